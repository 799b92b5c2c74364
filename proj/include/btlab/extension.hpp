#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "errors.hpp"
#include "finite_field.hpp"
#include "finite_ring.hpp"

namespace btlab {

// O_K[y]/(g(y)) truncated at level rho of the extension, for g monic of degree m.
// Unramified: g reduces to an irreducible polynomial and pi_K stays a uniformizer.
// Ramified: g is Eisenstein and y is the new uniformizer.
class ExtensionModel : public RingModel {
 public:
  ExtensionModel(RingPtr K, std::vector<uint32_t> g, bool ramified, uint32_t rho, FieldPtr residue)
      : K_(std::move(K)), g_(std::move(g)), ramified_(ramified), rho_(rho), F_(std::move(residue)) {
    m_ = static_cast<uint32_t>(g_.size() - 1);
    level_.resize(m_);
    for (uint32_t j = 0; j < m_; ++j)
      level_[j] = ramified_ ? (rho_ > j ? (rho_ - j + m_ - 1) / m_ : 0) : rho_;
    for (uint32_t j = 0; j < m_; ++j)
      if (level_[j] > K_->levels)
        fail(ErrorKind::InsufficientPrecision, "base ring too shallow for the extension level");
  }

  // Base ring level needed for an extension of the given level.
  static uint32_t base_level(uint32_t rho, uint32_t m, bool ramified) { return ramified ? (rho + m - 1) / m : rho; }

  Rep zero() const override { return Rep(m_, 0); }
  Rep one() const override {
    Rep r = zero();
    r[0] = 1;
    return normal(r);
  }
  Rep teich(uint32_t a) const override {
    if (ramified_) return normal(pad(a));
    Rep x = zero();
    uint32_t t = a;
    for (uint32_t j = 0; j < m_; ++j, t /= K_->Q) x[j] = K_->teich(t % K_->Q);
    x = normal(x);
    uint64_t q = F_->q;
    for (uint32_t i = 0; i <= rho_; ++i) x = pow(x, q);
    return x;
  }
  Rep unif() const override {
    Rep r = zero();
    if (ramified_) {
      if (m_ > 1) r[1] = 1;
      else r[0] = K_->uniformizer();
    } else {
      r[0] = K_->uniformizer();
    }
    return normal(r);
  }
  Rep add(const Rep& a, const Rep& b) const override {
    Rep r(m_);
    for (uint32_t j = 0; j < m_; ++j) r[j] = K_->add(u(a[j]), u(b[j]));
    return normal(r);
  }
  Rep neg(const Rep& a) const override {
    Rep r(m_);
    for (uint32_t j = 0; j < m_; ++j) r[j] = K_->neg(u(a[j]));
    return normal(r);
  }
  Rep mul(const Rep& a, const Rep& b) const override {
    std::vector<uint32_t> c(2 * m_ - 1, 0);
    for (uint32_t i = 0; i < m_; ++i) {
      if (!a[i]) continue;
      for (uint32_t j = 0; j < m_; ++j) c[i + j] = K_->add(c[i + j], K_->mul(u(a[i]), u(b[j])));
    }
    for (int64_t k = 2 * static_cast<int64_t>(m_) - 2; k >= static_cast<int64_t>(m_); --k) {
      uint32_t t = c[k];
      if (!t) continue;
      for (uint32_t i = 0; i < m_; ++i) c[k - m_ + i] = K_->sub(c[k - m_ + i], K_->mul(t, g_[i]));
    }
    Rep r(m_);
    for (uint32_t j = 0; j < m_; ++j) r[j] = c[j];
    return normal(r);
  }
  Rep pow(Rep a, uint64_t e) const {
    Rep r = one();
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

  const FiniteRing& base() const { return *K_; }
  uint32_t degree() const { return m_; }
  Rep normal(Rep r) const {
    for (uint32_t j = 0; j < m_; ++j) r[j] = K_->trunc(u(r[j]), level_[j]);
    return r;
  }

 private:
  RingPtr K_;
  std::vector<uint32_t> g_;
  bool ramified_;
  uint32_t rho_, m_ = 1;
  FieldPtr F_;
  std::vector<uint32_t> level_;

  static uint32_t u(int64_t x) { return static_cast<uint32_t>(x); }
  Rep pad(uint32_t a) const {
    Rep r = zero();
    r[0] = a;
    return r;
  }
};

// Residue field of base[y]/(g): the reduction of g must be irreducible when unramified.
inline FieldPtr extension_residue(const FiniteRing& K, const std::vector<uint32_t>& g, bool ramified) {
  if (ramified) return K.residue;
  FieldPoly gbar(g.size());
  for (size_t i = 0; i < g.size(); ++i) gbar[i] = K.digit(g[i], 0);
  if (!K.residue->is_irreducible(gbar))
    fail(ErrorKind::ReducibleExtension, "reduction of the defining polynomial is reducible");
  return FiniteField::extension(*K.residue, gbar);
}

inline RingPtr build_extension(RingPtr K, const std::vector<uint32_t>& g, bool ramified, uint32_t rho,
                               const std::string& label) {
  FieldPtr F = extension_residue(*K, g, ramified);
  auto model = std::make_shared<ExtensionModel>(K, g, ramified, rho, F);
  return FiniteRing::build(model, F, rho, true, label);
}

}  // namespace btlab
