#pragma once

// Test-only generators and independent oracles.

#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "crmorse/hermitian.hpp"

namespace crmorse::testkit {

// Hermitian matrix with integer real/imaginary parts in [-bound, bound].
inline HermitianMatrix random_integer_hermitian(std::mt19937_64& rng, int d, int bound = 3) {
  std::uniform_int_distribution<int> dist(-bound, bound);
  ComplexMatrix m(d, d);
  for (int j = 0; j < d; ++j) {
    m(j, j) = static_cast<double>(dist(rng));
    for (int t = j + 1; t < d; ++t) {
      m(j, t) = Complex(dist(rng), dist(rng));
      m(t, j) = std::conj(m(j, t));
    }
  }
  return HermitianMatrix(m);
}

inline HermitianMatrix random_hermitian(std::mt19937_64& rng, int d, double scale = 1.0) {
  std::normal_distribution<double> dist(0.0, scale);
  ComplexMatrix m(d, d);
  for (int j = 0; j < d; ++j) {
    m(j, j) = dist(rng);
    for (int t = j + 1; t < d; ++t) {
      m(j, t) = Complex(dist(rng), dist(rng));
      m(t, j) = std::conj(m(j, t));
    }
  }
  return HermitianMatrix(m);
}

inline HermitianMatrix random_positive_definite(std::mt19937_64& rng, int d, double floor = 0.5) {
  std::normal_distribution<double> dist(0.0, 1.0);
  ComplexMatrix b(d, d);
  for (int j = 0; j < d; ++j)
    for (int t = 0; t < d; ++t) b(j, t) = Complex(dist(rng), dist(rng));
  ComplexMatrix m = b.adjoint() * b + floor * ComplexMatrix::Identity(d, d);
  return HermitianMatrix(0.5 * (m + m.adjoint()));
}

inline ComplexMatrix random_unitary(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> dist(0.0, 1.0);
  ComplexMatrix b(d, d);
  for (int j = 0; j < d; ++j)
    for (int t = 0; t < d; ++t) b(j, t) = Complex(dist(rng), dist(rng));
  Eigen::HouseholderQR<ComplexMatrix> qr(b);
  return qr.householderQ() * ComplexMatrix::Identity(d, d);
}

// |det(R + 2sL)| if R + 2sL has exactly q negative and d - q positive
// eigenvalues at s, else 0. Uses only direct matrix evaluation.
inline double q_restricted_abs_det(const HermitianMatrix& r, const HermitianMatrix& l, int q, double s) {
  const ComplexMatrix a = r.matrix() + (2.0 * s) * l.matrix();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double radius = ev.cwiseAbs().maxCoeff();
  const double tol = 1e-12 * (1.0 + radius);
  int neg = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) <= tol) return 0.0;
    if (ev(i) < 0.0) ++neg;
  }
  if (neg != q) return 0.0;
  return std::abs(a.partialPivLu().determinant().real());
}

// Adaptive Gauss-Kronrod (15-point) integral of the q-restricted |det| over
// [-delta, delta], run on 64 equal panels so that narrow chambers cannot
// hide between the nodes of a single coarse rule. The integrand is
// continuous (it vanishes where the signature changes) with kinks only.
inline double quadrature_oracle(const HermitianMatrix& r, const HermitianMatrix& l, int q, double delta) {
  auto f = [&](double s) { return q_restricted_abs_det(r, l, q, s); };
  constexpr int panels = 64;
  const double h = 2.0 * delta / panels;
  double total = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double a = -delta + i * h;
    double err = 0.0;
    total += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, a + h, 12, 1e-11, &err);
  }
  return total;
}

}  // namespace crmorse::testkit
