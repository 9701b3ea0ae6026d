#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "crmorse/errors.hpp"

namespace crmorse {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

// Dense d x d complex Hermitian matrix. Hermiticity is checked once at
// construction; the stored matrix is the exact Hermitian part.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;

  // Rejects |a(j,t) - conj(a(t,j))| > tol * max(1, max|a|).
  explicit HermitianMatrix(const ComplexMatrix& m, double tol = 1e-12) {
    if (m.rows() != m.cols()) {
      std::ostringstream os;
      os << "matrix is " << m.rows() << "x" << m.cols() << ", expected square";
      throw InputError(os.str());
    }
    if (m.rows() < 1) throw InputError("matrix dimension must be >= 1");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    for (Eigen::Index j = 0; j < m.rows(); ++j) {
      for (Eigen::Index t = j; t < m.cols(); ++t) {
        if (std::abs(m(j, t) - std::conj(m(t, j))) > tol * scale) {
          std::ostringstream os;
          os << "entry (" << j << "," << t << ") is not the conjugate of entry (" << t << "," << j
             << ")";
          throw InputError(os.str());
        }
      }
    }
    m_ = 0.5 * (m + m.adjoint());
    for (Eigen::Index j = 0; j < m_.rows(); ++j) m_(j, j) = Complex(m_(j, j).real(), 0.0);
  }

  static HermitianMatrix zero(int d) { return HermitianMatrix(ComplexMatrix::Zero(d, d)); }
  static HermitianMatrix identity(int d) { return HermitianMatrix(ComplexMatrix::Identity(d, d)); }

  static HermitianMatrix diagonal(std::span<const double> values) {
    const auto d = static_cast<Eigen::Index>(values.size());
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    for (Eigen::Index j = 0; j < d; ++j) m(j, j) = values[static_cast<std::size_t>(j)];
    return HermitianMatrix(m);
  }

  // Real symmetric matrix from row-major values.
  static HermitianMatrix real(int d, std::initializer_list<double> row_major) {
    if (static_cast<int>(row_major.size()) != d * d) throw InputError("wrong number of entries");
    ComplexMatrix m(d, d);
    auto it = row_major.begin();
    for (int j = 0; j < d; ++j)
      for (int t = 0; t < d; ++t) m(j, t) = *it++;
    return HermitianMatrix(m);
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }
  Complex operator()(int j, int t) const { return m_(j, t); }

  friend HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
    check_same_dim(a, b);
    return from_trusted(a.m_ + b.m_);
  }
  friend HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
    check_same_dim(a, b);
    return from_trusted(a.m_ - b.m_);
  }
  friend HermitianMatrix operator*(double c, const HermitianMatrix& a) {
    return from_trusted(c * a.m_);
  }
  friend bool operator==(const HermitianMatrix& a, const HermitianMatrix& b) {
    return a.m_.rows() == b.m_.rows() && a.m_ == b.m_;
  }

  // U^* A U for a unitary (or arbitrary square) U.
  HermitianMatrix congruence(const ComplexMatrix& u) const {
    return from_trusted(u.adjoint() * m_ * u);
  }

  // Ascending eigenvalues.
  std::vector<double> eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m_, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
  }

  double spectral_radius() const {
    const auto ev = eigenvalues();
    return std::max(std::abs(ev.front()), std::abs(ev.back()));
  }

  double determinant() const { return m_.partialPivLu().determinant().real(); }

  // Quadratic form z^* A z (real for Hermitian A).
  double quadratic_form(const Eigen::VectorXcd& z) const { return (z.adjoint() * m_ * z)(0, 0).real(); }

  static void check_same_dim(const HermitianMatrix& a, const HermitianMatrix& b) {
    if (a.dim() != b.dim()) {
      std::ostringstream os;
      os << "dimension mismatch: " << a.dim() << " vs " << b.dim();
      throw InputError(os.str());
    }
  }

 private:
  static HermitianMatrix from_trusted(const ComplexMatrix& m) {
    HermitianMatrix h;
    h.m_ = 0.5 * (m + m.adjoint());
    return h;
  }

  ComplexMatrix m_;
};

// Eigenvalue sign counts relative to a tolerance band [-tol, tol].
struct Inertia {
  int neg = 0;
  int zero = 0;
  int pos = 0;
  double tol = 0.0;

  int dim() const { return neg + zero + pos; }
  bool nondegenerate() const { return zero == 0; }
  // Exactly q negative and d - q positive eigenvalues.
  bool is_signature(int q) const { return zero == 0 && neg == q; }

  friend bool operator==(const Inertia& a, const Inertia& b) {
    return a.neg == b.neg && a.zero == b.zero && a.pos == b.pos;
  }
};

inline Inertia inertia_of_eigenvalues(std::span<const double> ev, double tol) {
  Inertia in;
  in.tol = tol;
  for (double v : ev) {
    if (v < -tol)
      ++in.neg;
    else if (v > tol)
      ++in.pos;
    else
      ++in.zero;
  }
  return in;
}

inline Inertia inertia(const HermitianMatrix& a, double tol) {
  if (tol < 0.0) throw InputError("inertia tolerance must be nonnegative");
  const auto ev = a.eigenvalues();
  return inertia_of_eigenvalues(ev, tol);
}

// 1e-9 * (1 + spectral radius): relative band for deciding a zero eigenvalue.
inline double default_inertia_tol(const HermitianMatrix& a) {
  return 1e-9 * (1.0 + a.spectral_radius());
}

inline Inertia inertia(const HermitianMatrix& a) {
  const auto ev = a.eigenvalues();
  const double radius = std::max(std::abs(ev.front()), std::abs(ev.back()));
  return inertia_of_eigenvalues(ev, 1e-9 * (1.0 + radius));
}

}  // namespace crmorse
