#pragma once

#include "nilspherical/numeric.hpp"

#include <algorithm>
#include <array>

namespace nilspherical {

inline constexpr int kMaxJetOrder = 6;

// Truncated Taylor series sum_k c_k d^k in a small increment d of the central
// frequency. `order` is the highest coefficient that is still exact.
class Jet {
 public:
  Jet() = default;
  explicit Jet(int order, cplx constant = 0.0) : order_(order) { c_[0] = constant; }

  int order() const { return order_; }
  cplx operator[](int k) const { return c_[k]; }
  cplx& operator[](int k) { return c_[k]; }
  cplx value() const { return c_[0]; }
  // k-th derivative at the expansion point.
  cplx derivative(int k) const {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f * c_[k];
  }

  Jet differentiated() const {
    Jet d(std::max(order_ - 1, 0));
    for (int k = 0; k < order_; ++k) d.c_[k] = double(k + 1) * c_[k + 1];
    return d;
  }

  Jet truncated(int order) const {
    Jet j(std::min(order, order_));
    for (int k = 0; k <= j.order_; ++k) j.c_[k] = c_[k];
    return j;
  }

  // exp(c0 + c1 d)
  static Jet exp_linear(int order, cplx c0, cplx c1) {
    Jet j(order);
    cplx term = std::exp(c0);
    for (int k = 0; k <= order; ++k) {
      j.c_[k] = term;
      term *= c1 / double(k + 1);
    }
    return j;
  }

  static Jet linear(int order, cplx c0, cplx c1) {
    Jet j(order, c0);
    if (order >= 1) j.c_[1] = c1;
    return j;
  }

  // 1 / (x0 + d)
  static Jet reciprocal(int order, double x0) {
    Jet j(order);
    double p = 1.0 / x0;
    for (int k = 0; k <= order; ++k) {
      j.c_[k] = (k % 2 ? -p : p);
      p /= x0;
    }
    return j;
  }

  Jet& operator+=(const Jet& o) {
    order_ = std::min(order_, o.order_);
    for (int k = 0; k <= order_; ++k) c_[k] += o.c_[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    order_ = std::min(order_, o.order_);
    for (int k = 0; k <= order_; ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Jet& operator*=(cplx s) {
    for (int k = 0; k <= order_; ++k) c_[k] *= s;
    return *this;
  }
  Jet& operator*=(const Jet& o) {
    const int ord = std::min(order_, o.order_);
    std::array<cplx, kMaxJetOrder + 1> out{};
    for (int i = 0; i <= ord; ++i)
      for (int j = 0; i + j <= ord; ++j) out[i + j] += c_[i] * o.c_[j];
    c_ = out;
    order_ = ord;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, const Jet& b) { return a *= b; }
  friend Jet operator*(Jet a, cplx s) { return a *= s; }
  friend Jet operator*(cplx s, Jet a) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= cplx(s); }
  friend Jet operator*(Jet a, double s) { return a *= cplx(s); }

 private:
  int order_ = 0;
  std::array<cplx, kMaxJetOrder + 1> c_{};
};

}  // namespace nilspherical
