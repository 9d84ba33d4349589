#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "epibvp/errors.hpp"

namespace epibvp {

/// Finite generalized polynomial  sum_k a_k t^(k/2),  k >= 0.
///
/// Exponents live on the half-integer lattice so that both the polynomial
/// iterates of the decomposition schemes and the sqrt(2t) seed functions are
/// closed under add/mul/integrate. Coefficients are stored densely by k;
/// normalization zeroes denormal-scale coefficients and trims the tail, so
/// two series with the same nonzero terms compare equal.
class PowerSeries {
 public:
  using Term = std::pair<int, double>;

  PowerSeries() = default;

  /// a * t^(k/2)
  static PowerSeries monomial(int k, double a) {
    if (k < 0) throw NegativeExponent("monomial with negative half-exponent " + std::to_string(k));
    PowerSeries s;
    s.coeffs_.assign(static_cast<std::size_t>(k) + 1, 0.0);
    s.coeffs_[static_cast<std::size_t>(k)] = a;
    s.normalize();
    return s;
  }

  static PowerSeries constant(double a) { return monomial(0, a); }

  /// Builds from (k, a_k) pairs; repeated k accumulate.
  static PowerSeries from_terms(const std::vector<Term>& terms) {
    PowerSeries s;
    for (const auto& [k, a] : terms) {
      if (k < 0) throw NegativeExponent("term with negative half-exponent " + std::to_string(k));
      if (static_cast<std::size_t>(k) >= s.coeffs_.size()) s.coeffs_.resize(static_cast<std::size_t>(k) + 1, 0.0);
      s.coeffs_[static_cast<std::size_t>(k)] += a;
    }
    s.normalize();
    return s;
  }

  bool is_zero() const { return coeffs_.empty(); }

  /// Coefficient of t^(k/2); zero when absent.
  double coeff(int k) const {
    if (k < 0 || static_cast<std::size_t>(k) >= coeffs_.size()) return 0.0;
    return coeffs_[static_cast<std::size_t>(k)];
  }

  /// Largest stored k, or -1 for the zero series.
  int max_k() const { return static_cast<int>(coeffs_.size()) - 1; }

  /// Smallest k with a nonzero coefficient, or -1 for the zero series.
  int min_k() const {
    for (std::size_t k = 0; k < coeffs_.size(); ++k)
      if (coeffs_[k] != 0.0) return static_cast<int>(k);
    return -1;
  }

  /// Nonzero terms in increasing k.
  std::vector<Term> terms() const {
    std::vector<Term> out;
    for (std::size_t k = 0; k < coeffs_.size(); ++k)
      if (coeffs_[k] != 0.0) out.emplace_back(static_cast<int>(k), coeffs_[k]);
    return out;
  }

  PowerSeries& operator+=(const PowerSeries& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), 0.0);
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
    normalize();
    return *this;
  }

  PowerSeries& operator-=(const PowerSeries& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), 0.0);
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
    normalize();
    return *this;
  }

  PowerSeries& operator*=(double f) {
    for (double& a : coeffs_) a *= f;
    normalize();
    return *this;
  }

  friend PowerSeries operator+(PowerSeries a, const PowerSeries& b) { return a += b; }
  friend PowerSeries operator-(PowerSeries a, const PowerSeries& b) { return a -= b; }
  friend PowerSeries operator*(PowerSeries a, double f) { return a *= f; }
  friend PowerSeries operator*(double f, PowerSeries a) { return a *= f; }
  friend PowerSeries operator-(PowerSeries a) { return a *= -1.0; }

  /// Cauchy product; half-exponents add.
  friend PowerSeries operator*(const PowerSeries& a, const PowerSeries& b) {
    PowerSeries out;
    if (a.is_zero() || b.is_zero()) return out;
    out.coeffs_.assign(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      const double ai = a.coeffs_[i];
      if (ai == 0.0) continue;
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out.coeffs_[i + j] += ai * b.coeffs_[j];
    }
    out.normalize();
    return out;
  }

  friend bool operator==(const PowerSeries& a, const PowerSeries& b) { return a.coeffs_ == b.coeffs_; }

  /// Multiplies by t (k -> k + 2).
  PowerSeries mul_t() const {
    PowerSeries out;
    if (is_zero()) return out;
    out.coeffs_.assign(coeffs_.size() + 2, 0.0);
    std::copy(coeffs_.begin(), coeffs_.end(), out.coeffs_.begin() + 2);
    return out;
  }

  /// Divides by t^2 (k -> k - 4). Every nonzero term must have k >= 4.
  PowerSeries scale_div_t2() const {
    const int lo = min_k();
    if (lo >= 0 && lo < 4)
      throw NegativeExponent("division by t^2 of a term t^(" + std::to_string(lo) +
                             "/2); the operand must vanish like t near 0");
    PowerSeries out;
    if (is_zero()) return out;
    out.coeffs_.assign(coeffs_.begin() + 4, coeffs_.end());
    out.normalize();
    return out;
  }

  /// Divides by t (k -> k - 2). Every nonzero term must have k >= 2.
  PowerSeries div_t() const {
    const int lo = min_k();
    if (lo >= 0 && lo < 2)
      throw NegativeExponent("division by t of a term t^(" + std::to_string(lo) + "/2)");
    PowerSeries out;
    if (is_zero()) return out;
    out.coeffs_.assign(coeffs_.begin() + 2, coeffs_.end());
    out.normalize();
    return out;
  }

  /// Antiderivative vanishing at t = 0:  t^(k/2) -> t^(k/2+1) / (k/2 + 1).
  PowerSeries integrate() const {
    PowerSeries out;
    if (is_zero()) return out;
    out.coeffs_.assign(coeffs_.size() + 2, 0.0);
    for (std::size_t k = 0; k < coeffs_.size(); ++k)
      out.coeffs_[k + 2] = coeffs_[k] * 2.0 / (static_cast<double>(k) + 2.0);
    out.normalize();
    return out;
  }

  /// Term-wise derivative. Constants vanish; a t^(1/2) term has no
  /// representable derivative and raises NegativeExponent.
  PowerSeries derivative() const {
    PowerSeries out;
    if (coeff(1) != 0.0) throw NegativeExponent("derivative of t^(1/2) leaves the series lattice");
    if (coeffs_.size() <= 2) return out;
    out.coeffs_.assign(coeffs_.size() - 2, 0.0);
    for (std::size_t k = 2; k < coeffs_.size(); ++k)
      out.coeffs_[k - 2] = coeffs_[k] * static_cast<double>(k) / 2.0;
    out.normalize();
    return out;
  }

  /// Sum a_k t^(k/2) with Neumaier-compensated accumulation.
  double eval(double t) const {
    if (!(t >= 0.0)) throw DomainError("series evaluated at t = " + std::to_string(t) + " < 0");
    const double root = std::sqrt(t);
    double sum = 0.0;
    double carry = 0.0;
    double power = 1.0;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      if (k > 0) power = (k % 2 == 0) ? std::pow(t, static_cast<double>(k / 2)) : std::pow(t, static_cast<double>(k / 2)) * root;
      const double term = coeffs_[k] * power;
      const double next = sum + term;
      if (std::abs(sum) >= std::abs(term))
        carry += (sum - next) + term;
      else
        carry += (term - next) + sum;
      sum = next;
    }
    return sum + carry;
  }

  double operator()(double t) const { return eval(t); }

 private:
  void normalize() {
    for (double& a : coeffs_)
      if (std::abs(a) < 1e-300) a = 0.0;
    while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
  }

  std::vector<double> coeffs_;
};

}  // namespace epibvp
