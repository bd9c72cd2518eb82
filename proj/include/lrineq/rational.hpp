#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lrineq {

// Exact rationals backed by GMP. Always kept in canonical (reduced) form.
using Rational = mpq_class;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rational r{mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den))};
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

// Accepts "a", "-a", "a/b" with optional surrounding whitespace.
inline Rational parse_rational(std::string_view text) {
  auto first = text.find_first_not_of(" \t\r\n");
  auto last = text.find_last_not_of(" \t\r\n");
  if (first == std::string_view::npos) throw std::invalid_argument("empty rational");
  std::string s(text.substr(first, last - first + 1));
  if (!s.empty() && s.front() == '+') s.erase(s.begin());
  Rational r;
  if (s.empty() || r.set_str(s, 10) != 0 || r.get_den() == 0) {
    throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
  }
  r.canonicalize();
  return r;
}

}  // namespace lrineq
