#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "crmorse/errors.hpp"
#include "crmorse/hermitian.hpp"
#include "crmorse/pencil.hpp"
#include "crmorse/quadrature.hpp"

namespace crmorse {

// Heisenberg-group model at a point: Levi eigenvalues lambda (the Levi form
// pre-diagonalised by the caller), curvature matrix mu, and the Fourier
// cut-off delta. The model weight is
//   Phi_eta(z) = -2 eta sum_j lambda_j |z_j|^2 + sum_{j,t} mu_{j,t} conj(z_j) z_t
// and the engine dimension is n = d + 1.
struct ModelData {
  std::vector<double> lambda;
  HermitianMatrix mu;
  double delta = 1.0;

  int d() const { return static_cast<int>(lambda.size()); }
  int n() const { return d() + 1; }
};

inline void validate(const ModelData& m) {
  if (m.lambda.empty()) throw InputError("model: lambda must be nonempty");
  if (m.mu.dim() != m.d()) throw InputError("model: mu must be d x d with d = len(lambda)");
  if (!(m.delta > 0.0)) throw InputError("model: delta must be positive");
}

inline HermitianMatrix levi_matrix(const ModelData& m) { return HermitianMatrix::diagonal(m.lambda); }

// Complex Hessian of Phi_eta: mu - 2 eta diag(lambda).
inline HermitianMatrix m_phi_eta(const ModelData& m, double eta) {
  validate(m);
  return m.mu - (2.0 * eta) * levi_matrix(m);
}

inline double phi_eta(const ModelData& m, double eta, const Eigen::VectorXcd& z) {
  return m_phi_eta(m, eta).quadratic_form(z);
}

// The sets R_q n [-delta, delta] in the eta variable.
struct EtaChamberSet {
  ChamberDecomposition decomposition;  // of the pencil (mu, -diag(lambda)) in s = eta
  std::vector<std::vector<Interval>> by_degree;
};

inline EtaChamberSet eta_chambers(const ModelData& m) {
  validate(m);
  EtaChamberSet out;
  out.decomposition = chambers(m.mu, -1.0 * levi_matrix(m), m.delta);
  for (int q = 0; q <= m.d(); ++q) out.by_degree.push_back(signature_set(out.decomposition, q));
  return out;
}

struct BergmanValue {
  double value = 0.0;
  bool on_boundary = false;  // eta sits on a chamber boundary (M singular)
};

// Summed diagonal of the model Bergman kernel on (0,q)-forms:
// e^{Phi_eta(z)} (2 pi)^{-d} |det M_{Phi_eta}| when eta is in R_q, else 0.
inline BergmanValue bergman_diag(const ModelData& m, double eta, int q, const Eigen::VectorXcd& z) {
  validate(m);
  if (q < 0 || q > m.d()) throw InputError("bergman_diag: degree q out of range");
  if (z.size() != m.d()) throw InputError("bergman_diag: z must have length d");
  const HermitianMatrix mm = m_phi_eta(m, eta);
  const Inertia in = inertia(mm);
  BergmanValue out;
  if (!in.nondegenerate()) {
    out.on_boundary = true;
    return out;
  }
  if (!in.is_signature(q)) return out;
  out.value = std::exp(mm.quadratic_form(z)) * std::pow(2.0 * std::numbers::pi, -m.d()) *
              std::abs(mm.determinant());
  return out;
}

namespace detail {

inline void multi_indices(int d, int max_degree, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == d) {
    out.push_back(cur);
    return;
  }
  int used = 0;
  for (int a : cur) used += a;
  for (int a = 0; a + used <= max_degree; ++a) {
    cur.push_back(a);
    multi_indices(d, max_degree, cur, out);
    cur.pop_back();
  }
}

inline std::vector<int> expand(const std::vector<int>& alpha) {
  std::vector<int> out;
  for (int j = 0; j < static_cast<int>(alpha.size()); ++j)
    for (int k = 0; k < alpha[static_cast<std::size_t>(j)]; ++k) out.push_back(j);
  return out;
}

// Wick pairing: E[z_{a_1}..z_{a_p} conj(z_{b_1}..z_{b_p})] for the complex
// Gaussian with E[z_i conj(z_j)] = cov(i, j).
inline Complex wick(const std::vector<int>& a, std::vector<int> b, const ComplexMatrix& cov) {
  if (a.size() != b.size()) return 0.0;
  if (a.empty()) return 1.0;
  std::sort(b.begin(), b.end());
  Complex acc = 0.0;
  do {
    Complex term = 1.0;
    for (std::size_t k = 0; k < a.size(); ++k) term *= cov(a[k], b[k]);
    acc += term;
  } while (std::next_permutation(b.begin(), b.end()));
  // next_permutation visits distinct arrangements only; restore the
  // multiplicity of repeated indices in b.
  std::vector<int> counts;
  for (std::size_t i = 0; i < b.size();) {
    std::size_t j = i;
    while (j < b.size() && b[j] == b[i]) ++j;
    counts.push_back(static_cast<int>(j - i));
    i = j;
  }
  double mult = 1.0;
  for (int c : counts)
    for (int k = 2; k <= c; ++k) mult *= k;
  return acc * mult;
}

}  // namespace detail

// Independent check of the q = 0 closed form: reproducing kernel at the
// origin of the span of monomials z^alpha, |alpha| <= max_degree, under
// (f|g) = int f conj(g) e^{-Phi_eta} 2^d dx_1..dx_{2d}. Gaussian moments come
// from the eigen-decomposition of M (normalisation prod 2 pi / v_j and
// covariance M^{-1}) via Wick pairings.
inline double bergman_bruteforce(const ModelData& m, double eta, int max_degree) {
  validate(m);
  if (max_degree < 0) throw InputError("bergman_bruteforce: max degree must be >= 0");
  const HermitianMatrix mm = m_phi_eta(m, eta);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(mm.matrix());
  const Eigen::VectorXd v = es.eigenvalues();
  if (v.minCoeff() <= 0.0) throw InputError("bergman_bruteforce: M_{Phi_eta} must be positive definite");

  const int d = m.d();
  double mass = 1.0;
  for (int j = 0; j < d; ++j) mass *= 2.0 * std::numbers::pi / v(j);
  const ComplexMatrix cov = es.eigenvectors() * v.cwiseInverse().asDiagonal() * es.eigenvectors().adjoint();

  std::vector<std::vector<int>> alphas;
  std::vector<int> cur;
  detail::multi_indices(d, max_degree, cur, alphas);
  std::vector<std::vector<int>> expanded;
  for (const auto& a : alphas) expanded.push_back(detail::expand(a));

  const auto nb = static_cast<Eigen::Index>(alphas.size());
  ComplexMatrix gram(nb, nb);
  std::size_t origin = 0;
  for (Eigen::Index i = 0; i < nb; ++i) {
    if (expanded[static_cast<std::size_t>(i)].empty()) origin = static_cast<std::size_t>(i);
    for (Eigen::Index j = 0; j < nb; ++j) {
      gram(i, j) = mass * detail::wick(expanded[static_cast<std::size_t>(i)], expanded[static_cast<std::size_t>(j)], cov);
    }
  }
  // Evaluation functional at 0 picks out the constant monomial.
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(nb);
  e(static_cast<Eigen::Index>(origin)) = 1.0;
  const Eigen::VectorXcd x = gram.ldlt().solve(e);
  return x(static_cast<Eigen::Index>(origin)).real();
}

// (2 pi)^{-n} integral over R_q n [-delta, delta] of |det M_{Phi_eta}| d eta.
inline double szego_density(const ModelData& m, int q) {
  validate(m);
  if (q < 0 || q > m.d()) throw InputError("szego_density: degree q out of range");
  return std::pow(2.0 * std::numbers::pi, -m.n()) * chamber_integral(eta_chambers(m).decomposition, q);
}

struct ExtremalResult {
  std::vector<std::vector<int>> index_sets;  // increasing J, |J| = q
  std::vector<Complex> value;                // u_J(z, theta)
  std::vector<Complex> origin_value;         // u_J(0, 0)
  double norm_check = 0.0;                   // ||u||^2_{Phi_0}
  double peak_check = 0.0;                   // |u(0,0)|^2 / szego_density
};

namespace detail {

inline void subsets(int d, int q, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == q) {
    out.push_back(cur);
    return;
  }
  for (int j = start; j < d; ++j) {
    cur.push_back(j);
    subsets(d, q, j + 1, cur, out);
    cur.pop_back();
  }
}

// Ascending eigenpairs with each eigenvector's first non-negligible
// component made real positive.
inline Eigen::SelfAdjointEigenSolver<ComplexMatrix> phase_fixed_eigen(const HermitianMatrix& a, ComplexMatrix& vecs) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a.matrix());
  vecs = es.eigenvectors();
  for (Eigen::Index c = 0; c < vecs.cols(); ++c) {
    for (Eigen::Index r = 0; r < vecs.rows(); ++r) {
      if (std::abs(vecs(r, c)) > 1e-12) {
        const Complex ph = vecs(r, c) / std::abs(vecs(r, c));
        vecs.col(c) *= std::conj(ph);
        break;
      }
    }
  }
  return es;
}

}  // namespace detail

// The extremal harmonic (0,q)-form on the Heisenberg group,
//   u(z, theta) = (1/2 pi) int exp(i theta eta + eta sum lambda_j |z_j|^2) alpha(z, eta) d eta,
// alpha = C_0 |det M| 1_{R_q}(eta) exp(sum_{j<=q} v_j |z_j(eta)|^2) dz_1(eta)^..^dz_q(eta),
// evaluated by Gauss-Legendre quadrature (eta_nodes per chamber). The norm
// uses Parseval in theta and closed-form Gaussian z-integrals per node.
inline ExtremalResult extremal_form(const ModelData& m, int q, const Eigen::VectorXcd& z, double theta,
                                    int eta_nodes) {
  validate(m);
  const int d = m.d();
  if (q < 0 || q > d) throw InputError("extremal_form: degree q out of range");
  if (z.size() != d) throw InputError("extremal_form: z must have length d");
  if (eta_nodes < 16) throw InputError("extremal_form: need at least 16 eta nodes");

  const EtaChamberSet ec = eta_chambers(m);
  const auto& set = ec.by_degree[static_cast<std::size_t>(q)];
  const double mass = chamber_integral(ec.decomposition, q);
  if (set.empty() || !(mass > 0.0)) throw InputError("extremal_form: zero extremal mass");

  const double two_pi = 2.0 * std::numbers::pi;
  const double c0 = std::pow(two_pi, 1.0 - 0.5 * m.n()) / std::sqrt(mass);

  ExtremalResult res;
  std::vector<int> cur;
  detail::subsets(d, q, 0, cur, res.index_sets);
  res.value.assign(res.index_sets.size(), 0.0);
  res.origin_value.assign(res.index_sets.size(), 0.0);

  double levi_z = 0.0;
  for (int j = 0; j < d; ++j) levi_z += m.lambda[static_cast<std::size_t>(j)] * std::norm(z(j));

  const QuadratureRule rule = gauss_legendre(eta_nodes);
  for (const auto& iv : set) {
    const double half = 0.5 * iv.length();
    const double mid = 0.5 * (iv.lo + iv.hi);
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double eta = mid + half * rule.nodes[k];
      const double w = half * rule.weights[k];
      ComplexMatrix vecs;
      const auto es = detail::phase_fixed_eigen(m_phi_eta(m, eta), vecs);
      const Eigen::VectorXd v = es.eigenvalues();
      if ((q > 0 && !(v(q - 1) < 0.0)) || (q < d && !(v(q) > 0.0))) {
        throw DegeneratePencil("extremal_form: chamber boundary touched at eta = " + std::to_string(eta));
      }
      double abs_det = 1.0;
      for (int j = 0; j < d; ++j) abs_det *= std::abs(v(j));

      const Eigen::VectorXcd zeta = vecs.adjoint() * z;  // z_j(eta)
      double neg_quad = 0.0;
      for (int j = 0; j < q; ++j) neg_quad += v(j) * std::norm(zeta(j));

      double frame_norm2 = 0.0;
      std::vector<Complex> frame(res.index_sets.size());
      for (std::size_t J = 0; J < res.index_sets.size(); ++J) {
        if (q == 0) {
          frame[J] = 1.0;
        } else {
          ComplexMatrix minor(q, q);
          for (int a = 0; a < q; ++a)
            for (int b = 0; b < q; ++b) minor(a, b) = vecs(res.index_sets[J][static_cast<std::size_t>(a)], b);
          frame[J] = minor.determinant();
        }
        frame_norm2 += std::norm(frame[J]);
      }

      const Complex carrier = std::exp(Complex(eta * levi_z, theta * eta));
      const double amp = c0 * abs_det;
      for (std::size_t J = 0; J < frame.size(); ++J) {
        res.value[J] += (w / two_pi) * carrier * amp * std::exp(neg_quad) * frame[J];
        res.origin_value[J] += (w / two_pi) * amp * frame[J];
      }

      // |alpha|^2 e^{-Phi_eta}: |alpha|^2 carries 2 v_j on the first q
      // directions, the weight carries -v_j on all of them.
      double gauss = 1.0;
      for (int j = 0; j < d; ++j) {
        const double a = (j < q ? 2.0 * v(j) : 0.0) - v(j);
        gauss *= two_pi / (-a);
      }
      res.norm_check += (w / two_pi) * amp * amp * frame_norm2 * gauss;
    }
  }

  double peak = 0.0;
  for (const auto& c : res.origin_value) peak += std::norm(c);
  res.peak_check = peak / szego_density(m, q);
  return res;
}

}  // namespace crmorse
