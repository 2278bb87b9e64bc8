#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace pythrep {

// Exact arithmetic for breakpoints and slopes. Everything here is arity-adic
// at desk scale, so 64-bit numerators/denominators are plenty.
using Rat = boost::rational<long long>;

inline long long ipow(long long base, int exp) {
  long long r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > (1LL << 62) / base) throw std::overflow_error("ipow overflow");
    r *= base;
  }
  return r;
}

inline Rat rat_pow(const Rat& base, int exp) {
  if (exp < 0) return rat_pow(Rat(base.denominator(), base.numerator()), -exp);
  Rat r(1);
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

inline double to_double(const Rat& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

inline std::string to_string(const Rat& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// Parses "p/q" or "p" (integers, optional sign).
inline Rat parse_rational(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(std::stoll(s));
    long long num = std::stoll(s.substr(0, slash));
    long long den = std::stoll(s.substr(slash + 1));
    return Rat(num, den);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad rational: '" + s + "'");
  }
}

inline Rat floor_rat(const Rat& r) {
  long long q = r.numerator() / r.denominator();
  if (r.numerator() % r.denominator() != 0 && r.numerator() < 0) --q;
  return Rat(q);
}

// x mod 1, result in [0,1).
inline Rat mod1(const Rat& x) { return x - floor_rat(x); }

}  // namespace pythrep
