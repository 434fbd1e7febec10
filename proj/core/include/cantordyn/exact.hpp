#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace cantordyn {

using BigInt = mpz_class;
using Rational = mpq_class;

// Always "p/q", including "n/1" for integers, so files stay uniform.
std::string to_string(const Rational& q);
std::string to_string(const BigInt& z);

// Short human form: integers lose the "/1".
std::string to_display(const Rational& q);

// Accepts "p/q", "-p/q", integers and finite decimals ("0.8" -> 4/5).
// Throws std::invalid_argument on anything else or a zero denominator.
Rational parse_rational(std::string_view text);

Rational make_rational(long num, long den = 1);

inline int sign(const Rational& q) { return sgn(q); }

// Square, row-major matrix over an exact ring.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n) : n_(n), a_(n * n, T(0)) {}

  std::size_t size() const { return n_; }
  T& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  static Matrix identity(std::size_t n) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  friend Matrix operator*(const Matrix& x, const Matrix& y) {
    Matrix r(x.n_);
    for (std::size_t i = 0; i < x.n_; ++i)
      for (std::size_t k = 0; k < x.n_; ++k) {
        if (x(i, k) == 0) continue;
        for (std::size_t j = 0; j < x.n_; ++j) r(i, j) += x(i, k) * y(k, j);
      }
    return r;
  }

  friend Matrix operator+(const Matrix& x, const Matrix& y) {
    Matrix r(x.n_);
    for (std::size_t i = 0; i < x.a_.size(); ++i) r.a_[i] = x.a_[i] + y.a_[i];
    return r;
  }

  friend bool operator==(const Matrix& x, const Matrix& y) { return x.n_ == y.n_ && x.a_ == y.a_; }

  std::vector<T> apply(const std::vector<T>& v) const {
    std::vector<T> r(n_, T(0));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) r[i] += (*this)(i, j) * v[j];
    return r;
  }

  std::vector<T> row_sums() const { return apply(std::vector<T>(n_, T(1))); }

  std::vector<T> column_sums() const {
    std::vector<T> r(n_, T(0));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) r[j] += (*this)(i, j);
    return r;
  }

  Matrix principal(const std::vector<std::size_t>& idx) const {
    Matrix r(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) r(i, j) = (*this)(idx[i], idx[j]);
    return r;
  }

 private:
  std::size_t n_ = 0;
  std::vector<T> a_;
};

using RationalMatrix = Matrix<Rational>;
using IntegerMatrix = Matrix<BigInt>;

RationalMatrix to_rational(const IntegerMatrix& m);

template <class T>
Matrix<T> power(Matrix<T> base, unsigned exponent) {
  Matrix<T> result = Matrix<T>::identity(base.size());
  while (exponent > 0) {
    if (exponent & 1u) result = result * base;
    exponent >>= 1u;
    if (exponent > 0) base = base * base;
  }
  return result;
}

}  // namespace cantordyn
