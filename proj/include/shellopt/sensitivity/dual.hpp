#pragma once

#include <cmath>

#include <Eigen/Core>

namespace shellopt::sensitivity {

// Forward-mode scalar carrying one directional derivative alongside the value.
// Flows through the templated element routines in place of double.
struct Dual {
  double value = 0.0;
  double deriv = 0.0;

  Dual() = default;
  Dual(double v) : value(v) {}  // literals and plain doubles enter with d = 0
  Dual(double v, double d) : value(v), deriv(d) {}

  Dual& operator+=(const Dual& o) {
    value += o.value;
    deriv += o.deriv;
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    value -= o.value;
    deriv -= o.deriv;
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    deriv = deriv * o.value + value * o.deriv;
    value *= o.value;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    const double inv = 1.0 / o.value;
    value *= inv;
    deriv = (deriv - value * o.deriv) * inv;
    return *this;
  }
};

inline Dual operator+(Dual a, const Dual& b) { return a += b; }
inline Dual operator-(Dual a, const Dual& b) { return a -= b; }
inline Dual operator*(Dual a, const Dual& b) { return a *= b; }
inline Dual operator/(Dual a, const Dual& b) { return a /= b; }
inline Dual operator-(const Dual& a) { return {-a.value, -a.deriv}; }
inline Dual operator+(const Dual& a) { return a; }

inline bool operator==(const Dual& a, const Dual& b) {
  return a.value == b.value;
}
inline bool operator!=(const Dual& a, const Dual& b) {
  return a.value != b.value;
}
inline bool operator<(const Dual& a, const Dual& b) { return a.value < b.value; }
inline bool operator>(const Dual& a, const Dual& b) { return a.value > b.value; }
inline bool operator<=(const Dual& a, const Dual& b) {
  return a.value <= b.value;
}
inline bool operator>=(const Dual& a, const Dual& b) {
  return a.value >= b.value;
}

inline Dual sqrt(const Dual& a) {
  const double s = std::sqrt(a.value);
  return {s, a.deriv / (2.0 * s)};
}
inline Dual abs(const Dual& a) {
  return a.value < 0.0 ? Dual{-a.value, -a.deriv} : a;
}

}  // namespace shellopt::sensitivity

namespace Eigen {

template <>
struct NumTraits<shellopt::sensitivity::Dual> : NumTraits<double> {
  typedef shellopt::sensitivity::Dual Real;
  typedef shellopt::sensitivity::Dual NonInteger;
  typedef shellopt::sensitivity::Dual Nested;
  typedef double Literal;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 2,
    MulCost = 4
  };
};

// Plain doubles may scale Dual expressions directly.
template <typename BinaryOp>
struct ScalarBinaryOpTraits<shellopt::sensitivity::Dual, double, BinaryOp> {
  typedef shellopt::sensitivity::Dual ReturnType;
};
template <typename BinaryOp>
struct ScalarBinaryOpTraits<double, shellopt::sensitivity::Dual, BinaryOp> {
  typedef shellopt::sensitivity::Dual ReturnType;
};

}  // namespace Eigen
