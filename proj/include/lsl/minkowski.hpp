#pragma once

#include <cmath>
#include <optional>

namespace lsl {

/// A vector of R^3_1 in the standard basis. The metric weights the
/// components with signature (-,+,+).
struct MinkowskiVec {
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;

  constexpr MinkowskiVec& operator+=(const MinkowskiVec& o) {
    a1 += o.a1;
    a2 += o.a2;
    a3 += o.a3;
    return *this;
  }
  constexpr MinkowskiVec& operator-=(const MinkowskiVec& o) {
    a1 -= o.a1;
    a2 -= o.a2;
    a3 -= o.a3;
    return *this;
  }
  constexpr MinkowskiVec& operator*=(double s) {
    a1 *= s;
    a2 *= s;
    a3 *= s;
    return *this;
  }

  friend constexpr bool operator==(const MinkowskiVec&, const MinkowskiVec&) = default;
};

constexpr MinkowskiVec operator+(MinkowskiVec a, const MinkowskiVec& b) { return a += b; }
constexpr MinkowskiVec operator-(MinkowskiVec a, const MinkowskiVec& b) { return a -= b; }
constexpr MinkowskiVec operator-(const MinkowskiVec& a) { return {-a.a1, -a.a2, -a.a3}; }
constexpr MinkowskiVec operator*(double s, MinkowskiVec a) { return a *= s; }
constexpr MinkowskiVec operator*(MinkowskiVec a, double s) { return a *= s; }
constexpr MinkowskiVec operator/(MinkowskiVec a, double s) { return a *= (1.0 / s); }

/// <a,b> = -a1 b1 + a2 b2 + a3 b3.
constexpr double inner(const MinkowskiVec& a, const MinkowskiVec& b) {
  return -a.a1 * b.a1 + a.a2 * b.a2 + a.a3 * b.a3;
}

/// Determinant of the 3x3 matrix with rows a, b, c.
constexpr double det(const MinkowskiVec& a, const MinkowskiVec& b, const MinkowskiVec& c) {
  return a.a1 * (b.a2 * c.a3 - b.a3 * c.a2) - a.a2 * (b.a1 * c.a3 - b.a3 * c.a1) +
         a.a3 * (b.a1 * c.a2 - b.a2 * c.a1);
}

/// Lorentzian cross product, defined by inner(cross(a,b), c) = det(a,b,c)
/// for every c.
constexpr MinkowskiVec cross(const MinkowskiVec& a, const MinkowskiVec& b) {
  return {-(a.a2 * b.a3 - a.a3 * b.a2), a.a3 * b.a1 - a.a1 * b.a3, a.a1 * b.a2 - a.a2 * b.a1};
}

/// Euclidean length of the component vector; used for drift and distance
/// diagnostics only, never as a metric quantity.
inline double euclidean_norm(const MinkowskiVec& a) {
  return std::sqrt(a.a1 * a.a1 + a.a2 * a.a2 + a.a3 * a.a3);
}

inline bool is_finite(const MinkowskiVec& a) {
  return std::isfinite(a.a1) && std::isfinite(a.a2) && std::isfinite(a.a3);
}

enum class CausalCharacter { timelike, null, spacelike };

const char* to_string(CausalCharacter c);

/// Classifies by the sign of inner(a,a) with a dead band of width tol.
/// Without tol the band is 1e-10 * (1 + |inner(a,a)|).
CausalCharacter causal_character(const MinkowskiVec& a, std::optional<double> tol = std::nullopt);

}  // namespace lsl
