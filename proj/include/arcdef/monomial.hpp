#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <vector>

namespace arcdef {

// Exponent vector over an externally fixed, ordered variable list.
class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::size_t nvars) : e_(nvars, 0) {}
  explicit Monomial(std::vector<uint32_t> exps) : e_(std::move(exps)) {}

  static Monomial unit(std::size_t nvars, std::size_t var, uint32_t exp = 1) {
    Monomial m(nvars);
    m.e_[var] = exp;
    return m;
  }

  std::size_t nvars() const { return e_.size(); }
  uint32_t exp(std::size_t i) const { return e_[i]; }
  const std::vector<uint32_t>& exps() const { return e_; }

  uint32_t degree() const {
    return std::accumulate(e_.begin(), e_.end(), uint32_t{0});
  }

  bool is_one() const {
    return std::all_of(e_.begin(), e_.end(), [](uint32_t x) { return x == 0; });
  }

  bool divides(const Monomial& other) const {
    for (std::size_t i = 0; i < e_.size(); ++i)
      if (e_[i] > other.e_[i]) return false;
    return true;
  }

  Monomial operator*(const Monomial& other) const {
    Monomial r(*this);
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] += other.e_[i];
    return r;
  }

  bool operator==(const Monomial& other) const { return e_ == other.e_; }

  // Canonical term order: total degree, then lexicographic on exponents.
  bool operator<(const Monomial& other) const {
    uint32_t da = degree(), db = other.degree();
    if (da != db) return da < db;
    return e_ < other.e_;
  }

 private:
  std::vector<uint32_t> e_;
};

}  // namespace arcdef
