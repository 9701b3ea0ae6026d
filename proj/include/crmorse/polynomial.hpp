#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "crmorse/errors.hpp"

namespace crmorse {

// Real polynomial, coefficients in ascending degree. Trailing zero
// coefficients are trimmed, so the zero polynomial has no coefficients.
class RealPolynomial {
 public:
  RealPolynomial() = default;
  explicit RealPolynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }

  const std::vector<double>& coeffs() const { return c_; }
  // -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }

  double operator()(double s) const {
    double acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * s + *it;
    return acc;
  }

  RealPolynomial derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<double> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = static_cast<double>(i) * c_[i];
    return RealPolynomial(std::move(d));
  }

  // Antiderivative with zero constant term.
  RealPolynomial antiderivative() const {
    if (c_.empty()) return {};
    std::vector<double> a(c_.size() + 1, 0.0);
    for (std::size_t i = 0; i < c_.size(); ++i) a[i + 1] = c_[i] / static_cast<double>(i + 1);
    return RealPolynomial(std::move(a));
  }

  // sum |c_i| * m^i, m = max(1, |lo|, |hi|): bound on |p| over [lo, hi].
  double magnitude(double lo, double hi) const {
    const double m = std::max({1.0, std::abs(lo), std::abs(hi)});
    double acc = 0.0;
    double pw = 1.0;
    for (double c : c_) {
      acc += std::abs(c) * pw;
      pw *= m;
    }
    return acc;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
  }

  std::vector<double> c_;
};

struct RootSet {
  std::vector<double> roots;     // sorted, multiplicities collapsed
  bool identically_zero = false; // p == 0: every point is a root
};

namespace detail {

inline bool near_zero(const RealPolynomial& p, double s, double ztol) { return std::abs(p(s)) <= ztol; }

// Roots of p in [lo, hi] via recursive isolation between critical points:
// on each segment between consecutive critical points p is monotone, so a
// strict sign change brackets exactly one simple root. Critical points where
// |p| is numerically zero are tangent (even-multiplicity) roots.
inline std::vector<double> isolate_roots(const RealPolynomial& p, double lo, double hi, double tol) {
  std::vector<double> out;
  if (p.degree() <= 0) return out;

  const double ztol = 1e-12 * p.magnitude(lo, hi);
  std::vector<double> pts{lo};
  for (double c : isolate_roots(p.derivative(), lo, hi, tol)) {
    if (c > lo && c < hi) pts.push_back(c);
  }
  pts.push_back(hi);

  for (double s : pts) {
    if (near_zero(p, s, ztol)) out.push_back(s);
  }
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    double a = pts[i];
    double b = pts[i + 1];
    double fa = p(a);
    const double fb = p(b);
    if (std::abs(fa) <= ztol || std::abs(fb) <= ztol) continue;
    if ((fa < 0.0) == (fb < 0.0)) continue;
    // Bisect to adjacent doubles; tol only governs collapsing.
    for (int it = 0; it < 1100; ++it) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      const double fm = p(mid);
      if (fm == 0.0) {
        a = b = mid;
        break;
      }
      if ((fm < 0.0) == (fa < 0.0)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
      }
    }
    out.push_back(0.5 * (a + b));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Merges roots closer than tol into their mean.
inline std::vector<double> collapse(const std::vector<double>& sorted, double tol) {
  std::vector<double> out;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    double sum = sorted[i];
    while (j + 1 < sorted.size() && sorted[j + 1] - sorted[j] <= tol) {
      ++j;
      sum += sorted[j];
    }
    out.push_back(sum / static_cast<double>(j - i + 1));
    i = j + 1;
  }
  return out;
}

}  // namespace detail

// All real roots of p in [lo, hi] to absolute accuracy tol.
inline RootSet real_roots(const RealPolynomial& p, double lo, double hi, double tol) {
  if (!(hi > lo)) throw InputError("real_roots: require hi > lo");
  if (!(tol > 0.0)) throw InputError("real_roots: tolerance must be positive");
  RootSet rs;
  if (p.is_zero()) {
    rs.identically_zero = true;
    return rs;
  }
  auto roots = detail::collapse(detail::isolate_roots(p, lo, hi, tol), tol);
  for (double& r : roots) r = std::clamp(r, lo, hi);
  rs.roots = std::move(roots);
  return rs;
}

}  // namespace crmorse
