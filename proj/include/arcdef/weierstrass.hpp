#pragma once

#include <utility>
#include <vector>

#include "arcdef/power_series.hpp"

namespace arcdef {

struct WeierstrassResult {
  PowerSeries quotient;                // precision T - n
  std::vector<RingElement> remainder;  // degree < n polynomial in t
};

// Division G = Q*F + R with deg_t R < n, where n is the order of F mod m.
// The coefficient system for Q is triangular with unit diagonal F_n up to a
// nilpotent coupling, so Gauss-Seidel sweeps converge in at most nu steps
// with no loss of t-precision.
inline WeierstrassResult weierstrass_divide(const PowerSeries& G,
                                            const PowerSeries& F) {
  if (G.ring() != F.ring()) throw DomainError("ring mismatch");
  const TestRing::Ptr& ring = G.ring();
  auto n_opt = F.residue_order();
  if (!n_opt)
    throw DomainError(
        "weierstrass_divide: divisor is 0 mod the maximal ideal to precision");
  std::size_t n = *n_opt;
  std::size_t W = std::min(G.precision(), F.precision());
  if (W <= n)
    throw PrecisionError("weierstrass_divide: insufficient precision");
  std::size_t nq = W - n;

  RingElement pivot_inv = F.coeff(n).inverse();
  std::vector<RingElement> Q(nq, ring->zero());
  for (uint32_t sweep = 0; sweep < ring->nilpotency_degree(); ++sweep) {
    bool changed = false;
    for (std::size_t k = 0; k < nq; ++k) {
      RingElement acc = G.coeff(n + k);
      for (std::size_t j = 0; j < nq; ++j) {
        if (j == k || j > n + k) continue;
        acc -= Q[j] * F.coeff(n + k - j);
      }
      RingElement next = acc * pivot_inv;
      if (next != Q[k]) {
        Q[k] = std::move(next);
        changed = true;
      }
    }
    if (!changed) break;
  }

  std::vector<RingElement> R(n, ring->zero());
  for (std::size_t k = 0; k < n; ++k) {
    RingElement acc = G.coeff(k);
    for (std::size_t j = 0; j <= k && j < nq; ++j)
      acc -= Q[j] * F.coeff(k - j);
    R[k] = std::move(acc);
  }
  return {PowerSeries(ring, std::move(Q)), std::move(R)};
}

// The unique a in m with F(a) = 0, for F whose residue has a simple zero at
// t = 0. Solved as the fixed point a = -c1^{-1} (c0 + sum_{k>=2} c_k a^k).
inline RingElement distinguished_root(const PowerSeries& F) {
  auto n = F.residue_order();
  if (!n || *n != 1)
    throw DomainError("distinguished_root: residue order must be 1");
  const TestRing::Ptr& ring = F.ring();
  uint32_t nu = ring->nilpotency_degree();
  if (F.precision() < nu)
    throw PrecisionError("distinguished_root: precision below nilpotency degree");
  RingElement c1_inv = F.coeff(1).inverse();
  RingElement a = ring->zero();
  for (uint32_t sweep = 0; sweep < nu; ++sweep) {
    RingElement tail = F.coeff(0);
    RingElement pw = a * a;
    for (std::size_t k = 2; k < F.precision(); ++k) {
      if (pw.is_zero()) break;
      tail += F.coeff(k) * pw;
      pw *= a;
    }
    RingElement next = -(c1_inv * tail);
    if (next == a) break;
    a = std::move(next);
  }
  if (!F.eval_nilpotent(a).is_zero())
    throw DomainError("distinguished_root: iteration failed to converge");
  return a;
}

}  // namespace arcdef
