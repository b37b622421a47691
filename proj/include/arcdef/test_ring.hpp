#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "arcdef/monomial.hpp"
#include "arcdef/rational.hpp"

namespace arcdef {

class RingElement;

// A finite-dimensional local algebra Q[g_1..g_k]/(monomial ideal), with
// nilpotent maximal ideal m spanned by the non-constant standard monomials.
// An optional total-degree cap stands for the ideal m^{cap+1}; it lets the
// large universal rings avoid materializing every top-degree relation.
class TestRing : public std::enable_shared_from_this<TestRing> {
 public:
  using Ptr = std::shared_ptr<const TestRing>;

  static Ptr make(std::vector<std::string> gens, std::vector<Monomial> relations,
                  std::optional<uint32_t> degree_cap = std::nullopt) {
    auto r = std::shared_ptr<TestRing>(new TestRing);
    r->gens_ = std::move(gens);
    r->relations_ = std::move(relations);
    r->degree_cap_ = degree_cap;
    for (const auto& rel : r->relations_) {
      if (rel.nvars() != r->gens_.size())
        throw DomainError("relation monomial has wrong variable count");
      if (rel.is_one()) throw DomainError("relation 1 makes the zero ring");
    }
    if (!degree_cap) r->check_finite();
    r->enumerate_basis();
    return r;
  }

  // Q[g_1..g_k]/m^{K+1}.
  static Ptr make_truncated(std::vector<std::string> gens, uint32_t K) {
    return make(std::move(gens), {}, K);
  }

  // The ground field as the trivial test-ring.
  static Ptr rationals() { return make({}, {}); }

  const std::vector<std::string>& generators() const { return gens_; }
  const std::vector<Monomial>& relations() const { return relations_; }
  const std::vector<Monomial>& basis() const { return basis_; }
  std::optional<uint32_t> degree_cap() const { return degree_cap_; }
  uint32_t nilpotency_degree() const { return nu_; }
  std::size_t dimension() const { return basis_.size(); }

  std::optional<std::size_t> generator_index(const std::string& name) const {
    for (std::size_t i = 0; i < gens_.size(); ++i)
      if (gens_[i] == name) return i;
    return std::nullopt;
  }

  // True iff the monomial reduces to zero in the quotient.
  bool in_ideal(const Monomial& m) const {
    if (degree_cap_ && m.degree() > *degree_cap_) return true;
    for (const auto& rel : relations_)
      if (rel.divides(m)) return true;
    return false;
  }

  RingElement zero() const;
  RingElement one() const;
  RingElement constant(const Rational& q) const;
  RingElement generator(std::size_t i) const;
  RingElement monomial(const Monomial& m, const Rational& c) const;

 private:
  TestRing() = default;

  void check_finite() const {
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      bool has_power = false;
      for (const auto& rel : relations_) {
        bool pure = rel.exp(i) > 0;
        for (std::size_t j = 0; pure && j < gens_.size(); ++j)
          if (j != i && rel.exp(j) > 0) pure = false;
        if (pure) { has_power = true; break; }
      }
      if (!has_power)
        throw DomainError("infinite-dimensional quotient: generator '" +
                          gens_[i] + "' has no power in the ideal");
    }
  }

  void enumerate_basis() {
    std::set<Monomial> seen;
    std::vector<Monomial> queue{Monomial(gens_.size())};
    seen.insert(queue[0]);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      Monomial m = queue[head];
      for (std::size_t i = 0; i < gens_.size(); ++i) {
        Monomial next = m * Monomial::unit(gens_.size(), i);
        if (in_ideal(next) || seen.count(next)) continue;
        seen.insert(next);
        queue.push_back(next);
      }
    }
    basis_.assign(seen.begin(), seen.end());
    uint32_t maxdeg = 0;
    for (const auto& m : basis_) maxdeg = std::max(maxdeg, m.degree());
    nu_ = maxdeg + 1;
  }

  std::vector<std::string> gens_;
  std::vector<Monomial> relations_;
  std::optional<uint32_t> degree_cap_;
  std::vector<Monomial> basis_;  // sorted by the canonical term order
  uint32_t nu_ = 1;
};

// An element of a TestRing: sparse coordinates over the standard monomials.
class RingElement {
 public:
  RingElement() = default;
  explicit RingElement(TestRing::Ptr ring) : ring_(std::move(ring)) {}

  const TestRing::Ptr& ring() const { return ring_; }
  const std::map<Monomial, Rational>& coords() const { return c_; }

  bool is_zero() const { return c_.empty(); }

  Rational residue() const {  // constant coordinate (image in Q)
    auto it = c_.find(Monomial(ring_->generators().size()));
    return it == c_.end() ? Rational(0) : it->second;
  }

  bool in_max_ideal() const { return residue() == 0; }
  bool is_unit() const { return residue() != 0; }

  void add_term(const Monomial& m, const Rational& q) {
    if (q == 0 || ring_->in_ideal(m)) return;
    auto it = c_.find(m);
    if (it == c_.end()) {
      c_.emplace(m, q);
    } else {
      it->second += q;
      if (it->second == 0) c_.erase(it);
    }
  }

  RingElement& operator+=(const RingElement& o) {
    require_same_ring(o);
    for (const auto& [m, q] : o.c_) add_term(m, q);
    return *this;
  }
  RingElement& operator-=(const RingElement& o) {
    require_same_ring(o);
    for (const auto& [m, q] : o.c_) add_term(m, -q);
    return *this;
  }
  RingElement operator+(const RingElement& o) const {
    RingElement r(*this);
    r += o;
    return r;
  }
  RingElement operator-(const RingElement& o) const {
    RingElement r(*this);
    r -= o;
    return r;
  }
  RingElement operator-() const {
    RingElement r(ring_);
    for (const auto& [m, q] : c_) r.c_.emplace(m, -q);
    return r;
  }

  RingElement operator*(const RingElement& o) const {
    require_same_ring(o);
    RingElement r(ring_);
    for (const auto& [ma, qa] : c_)
      for (const auto& [mb, qb] : o.c_) r.add_term(ma * mb, qa * qb);
    return r;
  }
  RingElement& operator*=(const RingElement& o) { return *this = *this * o; }

  RingElement operator*(const Rational& q) const {
    RingElement r(ring_);
    if (q == 0) return r;
    for (const auto& [m, c] : c_) r.c_.emplace(m, c * q);
    return r;
  }

  bool operator==(const RingElement& o) const { return c_ == o.c_; }
  bool operator!=(const RingElement& o) const { return !(*this == o); }

  // Inverse of a unit r(1 + n), n nilpotent: geometric series in n.
  RingElement inverse() const {
    Rational r = residue();
    if (r == 0) throw DomainError("inverse of a non-unit ring element");
    RingElement n = (*this * (Rational(1) / r));  // 1 + nilpotent
    n -= ring_->one();
    RingElement acc = ring_->one();
    RingElement pw = ring_->one();
    for (uint32_t k = 1; k < ring_->nilpotency_degree(); ++k) {
      pw *= n;
      if (pw.is_zero()) break;
      acc += (k % 2 ? -pw : pw);
    }
    return acc * (Rational(1) / r);
  }

  RingElement pow(uint32_t e) const {
    RingElement acc = ring_->one();
    RingElement base = *this;
    while (e) {
      if (e & 1) acc *= base;
      base *= base;
      e >>= 1;
    }
    return acc;
  }

 private:
  void require_same_ring(const RingElement& o) const {
    if (ring_ != o.ring_) throw DomainError("ring mismatch");
  }

  friend class TestRing;
  TestRing::Ptr ring_;
  std::map<Monomial, Rational> c_;
};

inline RingElement TestRing::zero() const {
  return RingElement(shared_from_this());
}
inline RingElement TestRing::one() const { return constant(1); }
inline RingElement TestRing::constant(const Rational& q) const {
  RingElement r(shared_from_this());
  r.add_term(Monomial(gens_.size()), q);
  return r;
}
inline RingElement TestRing::generator(std::size_t i) const {
  RingElement r(shared_from_this());
  r.add_term(Monomial::unit(gens_.size(), i), 1);
  return r;
}
inline RingElement TestRing::monomial(const Monomial& m, const Rational& c) const {
  RingElement r(shared_from_this());
  r.add_term(m, c);
  return r;
}

inline RingElement operator*(const Rational& q, const RingElement& e) {
  return e * q;
}

// Algebra map A -> A' given by images of the generators; relations must die.
class RingMorphism {
 public:
  RingMorphism(TestRing::Ptr source, TestRing::Ptr target,
               std::vector<RingElement> gen_images)
      : source_(std::move(source)),
        target_(std::move(target)),
        images_(std::move(gen_images)) {
    if (images_.size() != source_->generators().size())
      throw DomainError("morphism: one image per generator required");
    for (const auto& rel : source_->relations())
      if (!apply_monomial(rel).is_zero())
        throw DomainError("morphism does not kill a defining relation");
    for (const auto& img : images_)
      if (!img.in_max_ideal())
        throw DomainError("morphism: generator image must be nilpotent");
    // A degree cap on the source stands for the ideal m^{cap+1}; nilpotent
    // generator images kill it exactly when nu(target) <= cap+1.
    if (auto cap = source_->degree_cap();
        cap && target_->nilpotency_degree() > *cap + 1)
      throw DomainError("morphism: target nilpotency exceeds source degree cap");
  }

  const TestRing::Ptr& source() const { return source_; }
  const TestRing::Ptr& target() const { return target_; }

  RingElement apply(const RingElement& e) const {
    if (e.ring() != source_) throw DomainError("morphism applied to wrong ring");
    RingElement out = target_->zero();
    for (const auto& [m, q] : e.coords()) out += apply_monomial(m) * q;
    return out;
  }

 private:
  RingElement apply_monomial(const Monomial& m) const {
    RingElement out = target_->one();
    for (std::size_t i = 0; i < images_.size(); ++i)
      if (m.exp(i)) out *= images_[i].pow(m.exp(i));
    return out;
  }

  TestRing::Ptr source_, target_;
  std::vector<RingElement> images_;
};

}  // namespace arcdef
