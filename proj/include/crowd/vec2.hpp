#pragma once

#include <cmath>

namespace crowd {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
  Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
  Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
};

inline Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
inline Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
inline Vec2 operator*(double s, Vec2 a) { return a *= s; }
inline Vec2 operator*(Vec2 a, double s) { return a *= s; }
inline Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm2(const Vec2& a) { return dot(a, a); }
inline double norm(const Vec2& a) { return std::sqrt(norm2(a)); }

// fold a displacement component into [-L/2, L/2]
inline double min_image_coord(double d, double L) { return d - L * std::nearbyint(d / L); }

inline Vec2 min_image(const Vec2& d, double L) {
  return {min_image_coord(d.x, L), min_image_coord(d.y, L)};
}

// wrap a coordinate into [0, L); the +0.0 clears negative zero
inline double wrap_coord(double x, double L) {
  double r = x - L * std::floor(x / L);
  if (r >= L) r -= L;
  return r + 0.0;
}

}  // namespace crowd
