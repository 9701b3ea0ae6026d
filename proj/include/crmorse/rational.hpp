#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "crmorse/errors.hpp"

namespace crmorse {

// Reduced fraction with positive denominator.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1) : num(n), den(d) {  // NOLINT(google-explicit-constructor)
    if (den == 0) throw InputError("rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool is_integer() const { return den == 1; }

  friend Rational operator*(const Rational& a, const Rational& b) { return {a.num * b.num, a.den * b.den}; }
  friend bool operator==(const Rational& a, const Rational& b) { return a.num == b.num && a.den == b.den; }

  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }

  // Accepts "p/q" or "p".
  static Rational parse(const std::string& s) {
    try {
      std::size_t used = 0;
      const auto slash = s.find('/');
      const std::int64_t n = std::stoll(s.substr(0, slash), &used);
      if (used != (slash == std::string::npos ? s.size() : slash)) throw InputError("");
      if (slash == std::string::npos) return {n, 1};
      const std::string rest = s.substr(slash + 1);
      const std::int64_t d = std::stoll(rest, &used);
      if (used != rest.size()) throw InputError("");
      return {n, d};
    } catch (const std::exception&) {
      throw InputError("malformed rational '" + s + "' (expected \"p/q\")");
    }
  }
};

}  // namespace crmorse
