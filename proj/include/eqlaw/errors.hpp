#pragma once

#include <stdexcept>
#include <string>

namespace eqlaw {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct unbound_variable : error {
  explicit unbound_variable(std::string var)
      : error("unbound variable '" + var + "'"), variable(std::move(var)) {}
  std::string variable;
};

struct signature_mismatch : error {
  using error::error;
};

struct not_in_theory_signature : error {
  using error::error;
};

struct alphabet_mismatch : error {
  using error::error;
};

struct missing_rule : error {
  explicit missing_rule(std::string sym)
      : error("no rule for symbol '" + sym + "'"), symbol(std::move(sym)) {}
  std::string symbol;
};

struct placeholder_violation : error {
  using error::error;
};

/// A rule case-split on an output that is not a concrete Boolean.
struct symbolic_branch : error {
  using error::error;
};

struct preservation_not_certified : error {
  using error::error;
};

struct invalid_model : error {
  using error::error;
};

struct invalid_grammar : error {
  using error::error;
};

struct missing_section : error {
  using error::error;
};

}  // namespace eqlaw
