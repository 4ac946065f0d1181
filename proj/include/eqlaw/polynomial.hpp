#pragma once

#include "eqlaw/rational.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace eqlaw {

/// Sparse multivariate polynomial with generators of type `Gen` and
/// coefficients in the commutative ring `Coeff`.
///
/// The representation is canonical: monomials are sorted multisets of
/// generators, the term map is ordered graded-lexicographically and never
/// stores a zero coefficient. Two polynomials are equal iff their maps are.
/// `Coeff` may itself be a polynomial, which is how coefficients in
/// Q[params] are expressed.
template <class Gen, class Coeff = Rational>
class Polynomial {
 public:
  using generator_type = Gen;
  using coefficient_type = Coeff;
  using Monomial = std::vector<Gen>;

  struct GradedLex {
    bool operator()(const Monomial& a, const Monomial& b) const {
      if (a.size() != b.size()) return a.size() < b.size();
      return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    }
  };
  using TermMap = std::map<Monomial, Coeff, GradedLex>;

  Polynomial() = default;
  explicit Polynomial(Coeff c) {
    if (!zero(c)) terms_.emplace(Monomial{}, std::move(c));
  }

  static Polynomial generator(Gen g) {
    Polynomial p;
    p.terms_.emplace(Monomial{std::move(g)}, Coeff(1));
    return p;
  }

  static Polynomial monomial(Monomial m, Coeff c) {
    Polynomial p;
    std::sort(m.begin(), m.end());
    p.add_term(std::move(m), std::move(c));
    return p;
  }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  friend bool is_zero(const Polynomial& p) { return p.is_zero(); }

  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
  }

  Coeff constant_term() const {
    auto it = terms_.find(Monomial{});
    return it == terms_.end() ? Coeff() : it->second;
  }

  /// The single generator when this is exactly `1*g`.
  const Gen* as_generator() const {
    if (terms_.size() != 1) return nullptr;
    const auto& [m, c] = *terms_.begin();
    if (m.size() != 1 || !(c == Coeff(1))) return nullptr;
    return &m.front();
  }

  std::size_t degree() const { return terms_.empty() ? 0 : terms_.rbegin()->first.size(); }

  std::set<Gen> generators() const {
    std::set<Gen> out;
    for (const auto& [m, c] : terms_) out.insert(m.begin(), m.end());
    return out;
  }

  void add_term(Monomial m, Coeff c) {
    if (zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(std::move(m), c);
    if (inserted) return;
    it->second = it->second + c;
    if (zero(it->second)) terms_.erase(it);
  }

  Polynomial& operator+=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  Polynomial operator-() const {
    Polynomial p;
    for (const auto& [m, c] : terms_) p.terms_.emplace(m, -c);
    return p;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial p;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        Monomial m;
        m.reserve(ma.size() + mb.size());
        std::merge(ma.begin(), ma.end(), mb.begin(), mb.end(), std::back_inserter(m));
        p.add_term(std::move(m), ca * cb);
      }
    return p;
  }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  Polynomial scaled(const Coeff& k) const {
    Polynomial p;
    for (const auto& [m, c] : terms_) p.add_term(m, c * k);
    return p;
  }

  /// Ring homomorphism extending `f: Gen -> Target` (Target a polynomial
  /// type whose coefficients accept Coeff).
  template <class Target, class F>
  Target substitute(F&& f) const {
    Target out;
    for (const auto& [m, c] : terms_) {
      Target prod{typename Target::coefficient_type(c)};
      for (const auto& g : m) prod = prod * f(g);
      out += prod;
    }
    return out;
  }

  template <class F>
  Coeff evaluate(F&& f) const {
    Coeff out{};
    for (const auto& [m, c] : terms_) {
      Coeff prod = c;
      for (const auto& g : m) prod = prod * f(g);
      out = out + prod;
    }
    return out;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }
  friend bool operator<(const Polynomial& a, const Polynomial& b) {
    return std::lexicographical_compare(
        a.terms_.begin(), a.terms_.end(), b.terms_.begin(), b.terms_.end(),
        [](const auto& x, const auto& y) {
          GradedLex less;
          if (less(x.first, y.first)) return true;
          if (less(y.first, x.first)) return false;
          return x.second < y.second;
        });
  }

  /// Highest degree first and lexicographic within a degree, `x^2` for
  /// repeated generators.
  template <class GenPrinter>
  std::string to_string(GenPrinter&& gen) const {
    if (terms_.empty()) return "0";
    std::vector<const typename TermMap::value_type*> order;
    for (const auto& t : terms_) order.push_back(&t);
    std::stable_sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->first.size() > b->first.size(); });
    std::string out;
    bool first = true;
    for (const auto* t : order) {
      const auto& [m, c] = *t;
      std::string cs = coefficient_string(c);
      bool negative = !cs.empty() && cs[0] == '-' && cs.find_first_of("+ ", 1) == std::string::npos;
      if (!first) out += negative ? " - " : " + ";
      else if (negative) out += "-";
      if (negative) cs = cs.substr(1);
      first = false;
      std::string mono;
      for (std::size_t i = 0; i < m.size();) {
        std::size_t j = i;
        while (j < m.size() && !(m[i] < m[j]) && !(m[j] < m[i])) ++j;
        if (!mono.empty()) mono += "*";
        mono += gen(m[i]);
        if (j - i > 1) mono += "^" + std::to_string(j - i);
        i = j;
      }
      if (mono.empty()) out += cs;
      else if (cs == "1") out += mono;
      else out += cs + "*" + mono;
    }
    return out;
  }

  std::string to_string() const
    requires std::is_convertible_v<Gen, std::string>
  {
    return to_string([](const Gen& g) { return std::string(g); });
  }

 private:
  static bool zero(const Coeff& c) {
    if constexpr (std::is_same_v<Coeff, Rational>) return c == 0;
    else return c.is_zero();
  }
  static std::string coefficient_string(const Rational& c) { return eqlaw::to_string(c); }
  template <class G2, class C2>
  static std::string coefficient_string(const Polynomial<G2, C2>& c) {
    std::string s = c.to_string();
    return c.terms().size() > 1 ? "(" + s + ")" : s;
  }

  TermMap terms_;
};

/// Polynomials over Q in named tokens: symbolic rational outputs and
/// indices of scalar constants.
using ScalarPoly = Polynomial<std::string, Rational>;

inline ScalarPoly scalar(const Rational& q) { return ScalarPoly(q); }
inline ScalarPoly scalar_token(std::string name) { return ScalarPoly::generator(std::move(name)); }

}  // namespace eqlaw
