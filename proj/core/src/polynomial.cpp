#include "cantordyn/polynomial.hpp"

#include <algorithm>
#include <stdexcept>

namespace cantordyn {

Polynomial::Polynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

void Polynomial::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational Polynomial::operator()(const Rational& x) const {
  Rational acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<Rational> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<long>(i);
  return Polynomial(std::move(d));
}

Polynomial Polynomial::monic() const {
  if (c_.empty()) return {};
  Rational lead = c_.back();
  std::vector<Rational> d(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) d[i] = c_[i] / lead;
  return Polynomial(std::move(d));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<Rational> r(std::max(a.c_.size(), b.c_.size()), Rational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
  return Polynomial(std::move(r));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
  std::vector<Rational> r(std::max(a.c_.size(), b.c_.size()), Rational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] -= b.c_[i];
  return Polynomial(std::move(r));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> r(a.c_.size() + b.c_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  return Polynomial(std::move(r));
}

std::pair<Polynomial, Polynomial> Polynomial::divmod(const Polynomial& a, const Polynomial& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  std::vector<Rational> rem = a.c_;
  if (a.degree() < b.degree()) return {Polynomial(), a};
  std::vector<Rational> quot(a.c_.size() - b.c_.size() + 1, Rational(0));
  const Rational& lead = b.c_.back();
  for (std::size_t k = quot.size(); k-- > 0;) {
    Rational f = rem[k + b.c_.size() - 1] / lead;
    quot[k] = f;
    if (f == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) rem[k + j] -= f * b.c_[j];
  }
  return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

Polynomial gcd(Polynomial a, Polynomial b) {
  while (!b.is_zero()) {
    Polynomial r = Polynomial::divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

Polynomial square_free(const Polynomial& p) {
  if (p.degree() <= 0) return p.monic();
  Polynomial g = gcd(p, p.derivative());
  return Polynomial::divmod(p, g).first.monic();
}

Polynomial characteristic_polynomial(const RationalMatrix& a) {
  const std::size_t n = a.size();
  std::vector<Rational> c(n + 1, Rational(0));
  c[n] = 1;
  RationalMatrix mk(n);
  for (std::size_t k = 1; k <= n; ++k) {
    mk = a * mk;
    for (std::size_t i = 0; i < n; ++i) mk(i, i) += c[n - k + 1];
    RationalMatrix amk = a * mk;
    Rational trace = 0;
    for (std::size_t i = 0; i < n; ++i) trace += amk(i, i);
    c[n - k] = -trace / static_cast<long>(k);
  }
  return Polynomial(std::move(c));
}

SturmSequence::SturmSequence(const Polynomial& p) {
  chain_.push_back(p);
  if (p.degree() <= 0) return;
  chain_.push_back(p.derivative());
  while (true) {
    Polynomial r = Polynomial::divmod(chain_[chain_.size() - 2], chain_.back()).second;
    if (r.is_zero()) break;
    chain_.push_back(Polynomial() - r);
  }
}

int SturmSequence::variations(const Rational& x) const {
  int count = 0;
  int prev = 0;
  for (const auto& q : chain_) {
    int s = q.sign_at(x);
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++count;
    prev = s;
  }
  return count;
}

int SturmSequence::count_roots(const Rational& a, const Rational& b) const {
  if (chain_.front().degree() <= 0 || !(a < b)) return 0;
  return variations(a) - variations(b);
}

AlgebraicRoot::AlgebraicRoot(Polynomial p, Rational lo, Rational hi)
    : p_(std::move(p)), sturm_(p_), lo_(std::move(lo)), hi_(std::move(hi)) {}

void AlgebraicRoot::refine() {
  if (exact()) return;
  if (p_(hi_) == 0) {
    lo_ = hi_;
    return;
  }
  Rational mid = (lo_ + hi_) / 2;
  if (p_(mid) == 0) {
    lo_ = hi_ = mid;
  } else if (sturm_.count_roots(mid, hi_) >= 1) {
    lo_ = mid;
  } else {
    hi_ = mid;
  }
}

void AlgebraicRoot::refine_to(const Rational& width) {
  while (hi_ - lo_ > width) refine();
}

int AlgebraicRoot::compare_to(const Rational& r) const {
  if (exact()) return sgn(lo_ - r);
  if (r <= lo_) return 1;
  if (r > hi_) return -1;
  // r in (lo, hi]: roots in (lo, r] decide.
  if (p_(r) == 0) return 0;
  return sturm_.count_roots(lo_, r) == 1 ? -1 : 1;
}

int compare(AlgebraicRoot a, AlgebraicRoot b) {
  if (a.exact()) return -b.compare_to(a.lo_);
  if (b.exact()) return a.compare_to(b.lo_);
  Polynomial g = gcd(a.p_, b.p_);
  if (g.degree() >= 1) {
    Rational lo = std::max(a.lo_, b.lo_);
    Rational hi = std::min(a.hi_, b.hi_);
    if (lo < hi && SturmSequence(g).count_roots(lo, hi) >= 1) return 0;
  }
  // Distinct numbers: refine until the isolating intervals separate.
  while (true) {
    if (a.exact()) return -b.compare_to(a.lo_);
    if (b.exact()) return a.compare_to(b.lo_);
    if (a.hi_ <= b.lo_) return -1;
    if (b.hi_ <= a.lo_) return 1;
    if (a.hi_ - a.lo_ >= b.hi_ - b.lo_) {
      a.refine();
    } else {
      b.refine();
    }
  }
}

std::optional<AlgebraicRoot> largest_root(const Polynomial& p, const Rational& a, const Rational& b) {
  Polynomial sf = square_free(p);
  if (sf.degree() < 1) return std::nullopt;
  SturmSequence s(sf);
  if (s.count_roots(a, b) == 0) return std::nullopt;
  if (sf(b) == 0) return AlgebraicRoot(sf, b, b);
  Rational lo = a;
  Rational hi = b;
  // Shrink until the interval isolates a single root, the largest one.
  while (s.count_roots(lo, hi) > 1) {
    Rational mid = (lo + hi) / 2;
    if (s.count_roots(mid, hi) >= 1) {
      lo = mid;
    } else {
      if (sf(mid) == 0) return AlgebraicRoot(sf, mid, mid);
      hi = mid;
    }
  }
  return AlgebraicRoot(sf, lo, hi);
}

std::pair<Rational, Rational> bisect_sign_change(const Polynomial& p, Rational lo, Rational hi,
                                                 const Rational& width) {
  int slo = p.sign_at(lo);
  int shi = p.sign_at(hi);
  if (slo == 0) return {lo, lo};
  if (shi == 0) return {hi, hi};
  if (slo == shi) throw std::invalid_argument("no sign change on bracket");
  while (hi - lo > width) {
    Rational mid = (lo + hi) / 2;
    int sm = p.sign_at(mid);
    if (sm == 0) return {mid, mid};
    if (sm == slo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo, hi};
}

}  // namespace cantordyn
