#pragma once

#include <complex>

namespace nhdkr::detail {

// First-order forward-mode dual number over complex values: v + d*eps, eps^2 = 0.
struct Jet {
  std::complex<double> v;
  std::complex<double> d;

  static Jet constant(std::complex<double> c) { return {c, 0.0}; }
  static Jet variable(double x) { return {x, 1.0}; }
};

inline Jet operator+(Jet a, Jet b) { return {a.v + b.v, a.d + b.d}; }
inline Jet operator-(Jet a, Jet b) { return {a.v - b.v, a.d - b.d}; }
inline Jet operator-(Jet a) { return {-a.v, -a.d}; }
inline Jet operator*(Jet a, Jet b) { return {a.v * b.v, a.v * b.d + a.d * b.v}; }
inline Jet operator*(std::complex<double> s, Jet a) { return {s * a.v, s * a.d}; }

inline Jet sin(Jet a) { return {std::sin(a.v), std::cos(a.v) * a.d}; }
inline Jet cos(Jet a) { return {std::cos(a.v), -std::sin(a.v) * a.d}; }

}  // namespace nhdkr::detail
