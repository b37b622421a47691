#pragma once

#include <optional>
#include <vector>

#include "arcdef/test_ring.hpp"

namespace arcdef {

// Univariate series over a TestRing, truncated at an explicit precision T:
// coefficients c_0..c_{T-1} are known exactly, everything beyond is a
// contract violation (PrecisionError), never a silent zero.
class PowerSeries {
 public:
  PowerSeries() = default;
  PowerSeries(TestRing::Ptr ring, std::size_t precision)
      : ring_(std::move(ring)), c_(precision, RingElement()) {
    if (precision == 0) throw DomainError("precision must be positive");
    for (auto& x : c_) x = ring_->zero();
  }
  PowerSeries(TestRing::Ptr ring, std::vector<RingElement> coeffs)
      : ring_(std::move(ring)), c_(std::move(coeffs)) {
    if (c_.empty()) throw DomainError("precision must be positive");
  }

  const TestRing::Ptr& ring() const { return ring_; }
  std::size_t precision() const { return c_.size(); }

  const RingElement& coeff(std::size_t k) const {
    if (k >= c_.size())
      throw PrecisionError("series coefficient beyond declared precision");
    return c_[k];
  }
  void set_coeff(std::size_t k, RingElement v) {
    if (k >= c_.size())
      throw PrecisionError("series coefficient beyond declared precision");
    c_[k] = std::move(v);
  }

  bool is_zero() const {
    for (const auto& x : c_)
      if (!x.is_zero()) return false;
    return true;
  }

  // Smallest k with c_k != 0, within precision.
  std::optional<std::size_t> order() const {
    for (std::size_t k = 0; k < c_.size(); ++k)
      if (!c_[k].is_zero()) return k;
    return std::nullopt;
  }

  // Order of the reduction to the residue field Q.
  std::optional<std::size_t> residue_order() const {
    for (std::size_t k = 0; k < c_.size(); ++k)
      if (c_[k].residue() != 0) return k;
    return std::nullopt;
  }

  bool all_coeffs_in_max_ideal() const {
    for (const auto& x : c_)
      if (!x.in_max_ideal()) return false;
    return true;
  }

  PowerSeries truncated(std::size_t T) const {
    if (T > c_.size())
      throw PrecisionError("cannot extend series precision");
    return PowerSeries(ring_, std::vector<RingElement>(c_.begin(), c_.begin() + T));
  }

  // Multiply by t^n (precision drops by nothing; top coefficients shift out).
  PowerSeries shifted_up(std::size_t n) const {
    PowerSeries r(ring_, c_.size());
    for (std::size_t k = 0; n + k < c_.size(); ++k) r.c_[n + k] = c_[k];
    return r;
  }

  // Divide by t^n; requires the first n coefficients to vanish.
  PowerSeries shifted_down(std::size_t n) const {
    if (n >= c_.size()) throw PrecisionError("shift exceeds precision");
    for (std::size_t k = 0; k < n; ++k)
      if (!c_[k].is_zero())
        throw DomainError("shifted_down: series not divisible by t^n");
    PowerSeries r(ring_, c_.size() - n);
    for (std::size_t k = 0; k + n < c_.size(); ++k) r.c_[k] = c_[k + n];
    return r;
  }

  PowerSeries operator+(const PowerSeries& o) const {
    return combine(o, false);
  }
  PowerSeries operator-(const PowerSeries& o) const {
    return combine(o, true);
  }
  PowerSeries operator-() const {
    PowerSeries r(*this);
    for (auto& x : r.c_) x = -x;
    return r;
  }

  PowerSeries operator*(const PowerSeries& o) const {
    require_same_ring(o);
    std::size_t T = std::min(c_.size(), o.c_.size());
    PowerSeries r(ring_, T);
    for (std::size_t i = 0; i < T; ++i) {
      if (c_[i].is_zero()) continue;
      for (std::size_t j = 0; i + j < T; ++j) {
        if (o.c_[j].is_zero()) continue;
        r.c_[i + j] += c_[i] * o.c_[j];
      }
    }
    return r;
  }

  PowerSeries operator*(const RingElement& s) const {
    PowerSeries r(*this);
    for (auto& x : r.c_) x = x * s;
    return r;
  }
  PowerSeries operator*(const Rational& s) const {
    PowerSeries r(*this);
    for (auto& x : r.c_) x = x * s;
    return r;
  }

  // Multiplicative inverse of a series whose constant term is a unit of A.
  PowerSeries inverse() const {
    if (!c_[0].is_unit())
      throw DomainError("series inverse: constant term is not a unit");
    RingElement u0 = c_[0].inverse();
    PowerSeries r(ring_, c_.size());
    r.c_[0] = u0;
    for (std::size_t k = 1; k < c_.size(); ++k) {
      RingElement acc = ring_->zero();
      for (std::size_t j = 0; j < k; ++j) acc += r.c_[j] * c_[k - j];
      r.c_[k] = -(acc * u0);
    }
    return r;
  }

  // Evaluate at a nilpotent element of A; needs precision >= nilpotency degree.
  RingElement eval_nilpotent(const RingElement& a) const {
    if (!a.in_max_ideal())
      throw DomainError("eval_nilpotent: argument must lie in the maximal ideal");
    if (c_.size() < ring_->nilpotency_degree())
      throw PrecisionError("eval_nilpotent: precision below nilpotency degree");
    RingElement acc = ring_->zero();
    RingElement pw = ring_->one();
    for (std::size_t k = 0; k < c_.size(); ++k) {
      if (pw.is_zero()) break;
      acc += c_[k] * pw;
      pw *= a;
    }
    return acc;
  }

  // Formal derivative; precision drops by one.
  PowerSeries derivative() const {
    if (c_.size() < 2) throw PrecisionError("derivative needs precision >= 2");
    PowerSeries r(ring_, c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k)
      r.c_[k - 1] = c_[k] * Rational(k);
    return r;
  }

  bool operator==(const PowerSeries& o) const {
    return ring_ == o.ring_ && c_ == o.c_;
  }

  static PowerSeries monomial(TestRing::Ptr ring, std::size_t k,
                              RingElement value, std::size_t T) {
    PowerSeries r(std::move(ring), T);
    r.set_coeff(k, std::move(value));
    return r;
  }

 private:
  PowerSeries combine(const PowerSeries& o, bool sub) const {
    require_same_ring(o);
    std::size_t T = std::min(c_.size(), o.c_.size());
    PowerSeries r(ring_, T);
    for (std::size_t k = 0; k < T; ++k)
      r.c_[k] = sub ? c_[k] - o.c_[k] : c_[k] + o.c_[k];
    return r;
  }

  void require_same_ring(const PowerSeries& o) const {
    if (ring_ != o.ring_) throw DomainError("ring mismatch");
  }

  TestRing::Ptr ring_;
  std::vector<RingElement> c_;
};

}  // namespace arcdef
