#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <utility>

namespace hstab {

// Arbitrary precision integer used by all exact integral linear algebra.
using Integer = boost::multiprecision::cpp_int;

inline Integer abs_value(const Integer& a) { return a < 0 ? Integer(-a) : a; }

inline Integer gcd(Integer a, Integer b) {
  a = abs_value(a);
  b = abs_value(b);
  while (b != 0) {
    Integer r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

struct ExtendedGcd {
  Integer g, x, y;  // g = x*a + y*b, g >= 0
};

inline ExtendedGcd extended_gcd(const Integer& a, const Integer& b) {
  Integer old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    Integer q = old_r / r;
    Integer tmp = old_r - q * r;
    old_r = std::move(r);
    r = std::move(tmp);
    tmp = old_s - q * s;
    old_s = std::move(s);
    s = std::move(tmp);
    tmp = old_t - q * t;
    old_t = std::move(t);
    t = std::move(tmp);
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  return {old_r, old_s, old_t};
}

// Floor division / modulus with non-negative remainder for positive divisor.
inline Integer floor_mod(const Integer& a, const Integer& m) {
  Integer r = a % m;
  if (r < 0) r += m;
  return r;
}

inline std::uint32_t reduce_mod(const Integer& a, std::uint32_t p) {
  return static_cast<std::uint32_t>(floor_mod(a, Integer(p)));
}

inline std::string to_string(const Integer& a) { return a.str(); }

inline std::int64_t to_int64(const Integer& a) {
  return static_cast<std::int64_t>(a);
}

}  // namespace hstab
