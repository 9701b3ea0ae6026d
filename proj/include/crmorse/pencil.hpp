#pragma once

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "crmorse/errors.hpp"
#include "crmorse/hermitian.hpp"
#include "crmorse/polynomial.hpp"

namespace crmorse {

// Open interval (lo, hi).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  bool contains(double s) const { return s > lo && s < hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

struct Chamber {
  double lo = 0.0;
  double hi = 0.0;
  Inertia inertia;
  int det_sign = 1;  // sign of det(R + 2sL) at the midpoint
  double midpoint() const { return 0.5 * (lo + hi); }
};

struct ChamberDecomposition {
  double delta = 0.0;
  std::vector<double> roots;     // roots of det(R + 2sL) in [-delta, delta]
  std::vector<Chamber> chambers; // tiles [-delta, delta] minus the roots
  RealPolynomial det_poly;       // s -> det(R + 2sL)
};

inline constexpr double kDefaultRootTol = 1e-13;

// R + 2sL
inline HermitianMatrix pencil_at(const HermitianMatrix& r, const HermitianMatrix& l, double s) {
  return r + (2.0 * s) * l;
}

// det(R + 2sL) as a polynomial in s. Coefficients are recovered from
// determinant evaluations at d + 1 Chebyshev probes on [-rho, rho] by
// solving the (scaled) Vandermonde system, exact for degree <= d.
inline RealPolynomial pencil_char_poly(const HermitianMatrix& r, const HermitianMatrix& l) {
  HermitianMatrix::check_same_dim(r, l);
  const int d = r.dim();
  const double rn = r.matrix().norm();
  const double ln = l.matrix().norm();
  const double rho = ln > 0.0 ? std::max(1.0, rn / (2.0 * ln)) : 1.0;

  Eigen::MatrixXd vander(d + 1, d + 1);
  Eigen::VectorXd values(d + 1);
  for (int j = 0; j <= d; ++j) {
    const double t = std::cos(std::numbers::pi * (j + 0.5) / (d + 1));
    double pw = 1.0;
    for (int i = 0; i <= d; ++i) {
      vander(j, i) = pw;
      pw *= t;
    }
    values(j) = (r.matrix() + (2.0 * rho * t) * l.matrix()).partialPivLu().determinant().real();
  }
  const Eigen::VectorXd scaled = vander.colPivHouseholderQr().solve(values);

  // Hadamard-type bound on |det| over the probe interval.
  const double bound = std::pow(rn + 2.0 * rho * ln, d);
  if (values.cwiseAbs().maxCoeff() <= 1e-12 * bound) return {};

  const double cutoff = 1e-13 * scaled.cwiseAbs().maxCoeff();
  std::vector<double> coeffs(static_cast<std::size_t>(d + 1));
  double pw = 1.0;
  for (int i = 0; i <= d; ++i) {
    coeffs[static_cast<std::size_t>(i)] = std::abs(scaled(i)) <= cutoff ? 0.0 : scaled(i) / pw;
    pw *= rho;
  }
  return RealPolynomial(std::move(coeffs));
}

namespace detail {

// Merges neighbouring roots whose gap is numerically a zero of p (split
// multiple roots from coefficient round-off).
inline std::vector<double> merge_root_clusters(const RealPolynomial& p, std::vector<double> roots,
                                               double lo, double hi) {
  const double ztol = 1e-11 * p.magnitude(lo, hi);
  std::vector<double> out;
  std::size_t i = 0;
  while (i < roots.size()) {
    std::size_t j = i;
    while (j + 1 < roots.size() && std::abs(p(0.5 * (roots[j] + roots[j + 1]))) <= ztol) ++j;
    double sum = 0.0;
    for (std::size_t k = i; k <= j; ++k) sum += roots[k];
    out.push_back(sum / static_cast<double>(j - i + 1));
    i = j + 1;
  }
  return out;
}

}  // namespace detail

// Partition of [-delta, delta] into maximal intervals of constant inertia
// of R + 2sL. Inertia is read at chamber midpoints, never at roots.
inline ChamberDecomposition chambers(const HermitianMatrix& r, const HermitianMatrix& l, double delta,
                                     double tol = kDefaultRootTol) {
  HermitianMatrix::check_same_dim(r, l);
  if (!(delta > 0.0)) throw InputError("chambers: delta must be positive");

  ChamberDecomposition dec;
  dec.delta = delta;
  dec.det_poly = pencil_char_poly(r, l);
  const auto rs = real_roots(dec.det_poly, -delta, delta, tol);
  if (rs.identically_zero) {
    throw DegeneratePencil("det(R + 2sL) vanishes identically (R and L share a kernel vector)");
  }
  dec.roots = detail::merge_root_clusters(dec.det_poly, rs.roots, -delta, delta);

  std::vector<double> breaks;
  breaks.reserve(dec.roots.size() + 2);
  breaks.push_back(-delta);
  for (double x : dec.roots) breaks.push_back(x);
  breaks.push_back(delta);

  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double lo = breaks[i];
    const double hi = breaks[i + 1];
    if (!(hi > lo)) continue;
    Chamber c;
    c.lo = lo;
    c.hi = hi;
    const HermitianMatrix a = pencil_at(r, l, c.midpoint());
    c.inertia = inertia(a);
    if (!c.inertia.nondegenerate()) {
      std::ostringstream os;
      os << "pencil is singular inside chamber (" << lo << ", " << hi << ") at s = " << c.midpoint();
      throw DegeneratePencil(os.str());
    }
    c.det_sign = dec.det_poly(c.midpoint()) < 0.0 ? -1 : 1;
    dec.chambers.push_back(c);
  }
  return dec;
}

// Union of chambers with inertia exactly (q, 0, d - q), adjacent pieces
// kept separate (they are separated by a root).
inline std::vector<Interval> signature_set(const ChamberDecomposition& dec, int q) {
  std::vector<Interval> out;
  for (const auto& c : dec.chambers) {
    if (c.inertia.is_signature(q)) out.push_back({c.lo, c.hi});
  }
  return out;
}

// Integral of |det(R + 2sL)| over the q-signature set, from the exact
// antiderivative (det has constant sign on each chamber).
inline double chamber_integral(const ChamberDecomposition& dec, int q) {
  const RealPolynomial prim = dec.det_poly.antiderivative();
  double acc = 0.0;
  for (const auto& iv : signature_set(dec, q)) acc += std::abs(prim(iv.hi) - prim(iv.lo));
  return acc;
}

inline double chamber_integral(const HermitianMatrix& r, const HermitianMatrix& l, int q, double delta) {
  if (q < 0 || q > r.dim()) throw InputError("chamber_integral: degree q out of range");
  return chamber_integral(chambers(r, l, delta), q);
}

// Signed integral of det(R + 2sL) over the nondegenerate chambers.
inline double signed_chamber_integral(const ChamberDecomposition& dec) {
  const RealPolynomial prim = dec.det_poly.antiderivative();
  double acc = 0.0;
  for (const auto& c : dec.chambers) acc += prim(c.hi) - prim(c.lo);
  return acc;
}

}  // namespace crmorse
