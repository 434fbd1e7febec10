#pragma once

#include "cantordyn/exact.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace cantordyn {

// Univariate polynomial over Q, coefficients stored low degree first.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coeffs);

  static Polynomial constant(const Rational& c) { return Polynomial({c}); }
  static Polynomial x() { return Polynomial({Rational(0), Rational(1)}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }

  Rational operator()(const Rational& x) const;
  int sign_at(const Rational& x) const { return sgn((*this)(x)); }

  Polynomial derivative() const;
  Polynomial monic() const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

  static std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b);

 private:
  void trim();
  std::vector<Rational> c_;
};

Polynomial gcd(Polynomial a, Polynomial b);

// p / gcd(p, p'): same roots, all simple.
Polynomial square_free(const Polynomial& p);

// det(xI - M) by Faddeev-LeVerrier, exact over Q.
Polynomial characteristic_polynomial(const RationalMatrix& m);

class SturmSequence {
 public:
  explicit SturmSequence(const Polynomial& p);

  // Number of distinct real roots in the half-open interval (a, b].
  int count_roots(const Rational& a, const Rational& b) const;
  const Polynomial& base() const { return chain_.front(); }

 private:
  int variations(const Rational& x) const;
  std::vector<Polynomial> chain_;
};

// A real algebraic number given by a square-free polynomial and an isolating
// interval (lo, hi] holding exactly one of its roots; lo == hi means exact.
class AlgebraicRoot {
 public:
  AlgebraicRoot(Polynomial square_free_poly, Rational lo, Rational hi);

  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }
  bool exact() const { return lo_ == hi_; }
  const Polynomial& polynomial() const { return p_; }

  // Halve the isolating interval (or detect an exact rational root).
  void refine();
  void refine_to(const Rational& width);

  // -1, 0, +1; exact, using the gcd of the defining polynomials for equality.
  friend int compare(AlgebraicRoot a, AlgebraicRoot b);
  int compare_to(const Rational& r) const;

 private:
  Polynomial p_;
  SturmSequence sturm_;
  Rational lo_, hi_;
};

// Largest real root of p in (a, b], or nullopt when there is none.
std::optional<AlgebraicRoot> largest_root(const Polynomial& p, const Rational& a, const Rational& b);

// Bisection on a sign change of p over [lo, hi] down to the requested width.
// Returns the bracket; collapses to a point when a dyadic midpoint is a root.
std::pair<Rational, Rational> bisect_sign_change(const Polynomial& p, Rational lo, Rational hi,
                                                 const Rational& width);

}  // namespace cantordyn
