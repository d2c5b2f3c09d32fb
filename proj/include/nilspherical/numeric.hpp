#pragma once

#include <cmath>
#include <complex>

namespace nilspherical {

using cplx = std::complex<double>;

// Neumaier compensated summation.
template <class T>
class CompensatedSum {
 public:
  void add(T v) {
    if constexpr (std::is_same_v<T, cplx>) {
      re_.add(v.real());
      im_.add(v.imag());
    } else {
      const double t = sum_ + v;
      if (std::abs(sum_) >= std::abs(v))
        comp_ += (sum_ - t) + v;
      else
        comp_ += (v - t) + sum_;
      sum_ = t;
    }
  }
  T value() const {
    if constexpr (std::is_same_v<T, cplx>)
      return {re_.value(), im_.value()};
    else
      return sum_ + comp_;
  }
  CompensatedSum& operator+=(T v) {
    add(v);
    return *this;
  }

 private:
  struct Empty {};
  double sum_ = 0.0;
  double comp_ = 0.0;
  [[no_unique_address]] std::conditional_t<std::is_same_v<T, cplx>, CompensatedSum<double>, Empty> re_{};
  [[no_unique_address]] std::conditional_t<std::is_same_v<T, cplx>, CompensatedSum<double>, Empty> im_{};
};

}  // namespace nilspherical
