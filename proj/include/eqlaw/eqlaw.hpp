#pragma once

#include "eqlaw/behaviour.hpp"
#include "eqlaw/cfg.hpp"
#include "eqlaw/dsl.hpp"
#include "eqlaw/gsos.hpp"
#include "eqlaw/polynomial.hpp"
#include "eqlaw/preservation.hpp"
#include "eqlaw/rational.hpp"
#include "eqlaw/solver.hpp"
#include "eqlaw/term.hpp"
#include "eqlaw/theory.hpp"
