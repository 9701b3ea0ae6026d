#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "crmorse/errors.hpp"
#include "crmorse/hermitian.hpp"
#include "crmorse/morse.hpp"
#include "crmorse/parallel.hpp"
#include "crmorse/rational.hpp"

namespace crmorse {

// Circle bundle X = unit sphere bundle of L_lambda^* over the flat torus
// C^d / (sqrt(2 pi) Z^d + i sqrt(2 pi) Z^d), with L = pi^* L_mu.
struct TorusBundleSpec {
  HermitianMatrix lambda_mat;
  HermitianMatrix mu_mat;
  double delta = 0.5;
  int d() const { return mu_mat.dim(); }
};

// Heisenberg-type example: constant Levi form diag(lambda), curvature mu.
struct HeisenbergSpec {
  std::vector<long> lambda;
  HermitianMatrix mu;
  double delta = 0.5;
  int d() const { return static_cast<int>(lambda.size()); }
};

// Frozen lattice constants: the mode-m bundle of the torus example has
// curvature k mu + c_mode m lambda, and a nondegenerate integer curvature
// matrix A carries c_dim^d |det A| sections in its index degree.
struct LatticeCalibration {
  Rational c_mode;
  Rational c_dim;
  // provenance
  long reference_curvature = 1;
  long reference_count = 0;
  std::vector<long> mode_candidates;
  long checked_tuples = 0;

  friend bool operator==(const LatticeCalibration&, const LatticeCalibration&) = default;
};

inline bool is_integer_hermitian(const HermitianMatrix& a) {
  for (int j = 0; j < a.dim(); ++j) {
    for (int t = 0; t < a.dim(); ++t) {
      const Complex v = a(j, t);
      if (std::abs(v.real() - std::round(v.real())) > 1e-9 || std::abs(v.imag() - std::round(v.imag())) > 1e-9)
        return false;
    }
  }
  return true;
}

inline PencilField heisenberg_field(const HeisenbergSpec& spec) {
  if (spec.lambda.empty()) throw InputError("heisenberg: lambda must be nonempty");
  std::vector<double> lam;
  for (long l : spec.lambda) {
    if (l == 0) throw InputError("heisenberg: every lambda_j must be a nonzero integer");
    lam.push_back(static_cast<double>(l));
  }
  if (spec.mu.dim() != spec.d()) throw InputError("heisenberg: mu must be d x d");
  if (!is_integer_hermitian(spec.mu)) throw InputError("heisenberg: mu must have integer entries");
  PencilField f;
  f.n = spec.d() + 1;
  f.delta = spec.delta;
  f.points.push_back({"heisenberg", 1.0, spec.mu, HermitianMatrix::diagonal(lam)});
  validate(f);
  return f;
}

inline PencilField torus_bundle_field(const TorusBundleSpec& spec) {
  HermitianMatrix::check_same_dim(spec.lambda_mat, spec.mu_mat);
  if (!is_integer_hermitian(spec.lambda_mat) || !is_integer_hermitian(spec.mu_mat))
    throw InputError("torus: lambda and mu must have integer entries");
  PencilField f;
  f.n = spec.d() + 1;
  f.delta = spec.delta;
  f.points.push_back({"torus", 1.0, spec.mu_mat, spec.lambda_mat});
  validate(f);
  return f;
}

// X = M x S^1 with the pulled-back bundle: Levi-flat, L = 0. With delta = 1
// the s-integral contributes a factor 2 per sample, and the modes |m| <= k
// repeat each cohomology of M (2k + 1) times.
inline PencilField levi_flat_field(const HermitianMatrix& mu, int d, double delta = 1.0) {
  if (mu.dim() != d) throw InputError("levi-flat: mu must be d x d");
  PencilField f;
  f.n = d + 1;
  f.delta = delta;
  f.points.push_back({"levi-flat", 1.0, mu, HermitianMatrix::zero(d)});
  validate(f);
  return f;
}

namespace detail {

// Number of linearly independent entire f on C with
//   f(z + alpha) = exp(a (z conj(alpha) + |alpha|^2 / 2)) f(z),  alpha in tau Z + i tau Z,
// tau = sqrt(2 pi). Counted from the Fourier expansion: f = exp(a z^2 / 2) g
// with g tau-periodic, g = sum_j c_j exp(i omega j z), omega = 2 pi / tau.
// The i tau shift forces c_{j+s} = c_j exp(-omega tau j - a tau^2) with
// s = 2 a tau / omega; each residue chain mod s is one free coefficient and
// contributes a section iff its series converges for every z, i.e. log|c_j|
// falls off faster than linearly in both directions along the chain.
inline long fourier_section_count(long a) {
  const double tau = std::sqrt(2.0 * std::numbers::pi);
  const double omega = 2.0 * std::numbers::pi / tau;
  const double shift_real = 2.0 * static_cast<double>(a) * tau / omega;
  const long s = std::lround(shift_real);
  if (std::abs(shift_real - static_cast<double>(s)) > 1e-9) {
    throw CalibrationError("Fourier oracle: non-integer coefficient shift");
  }
  auto log_step = [&](long j) { return -omega * tau * static_cast<double>(j) - static_cast<double>(a) * tau * tau; };

  if (s == 0) {
    // c_j (exp(-omega tau j) - exp(a tau^2)) = 0: only exact resonances survive.
    long count = 0;
    for (long j = -1000; j <= 1000; ++j) {
      if (std::abs(log_step(j)) < 1e-9) ++count;
    }
    return count;
  }

  constexpr int kSteps = 64;
  const double steep = 50.0 * static_cast<double>(std::labs(s));
  long count = 0;
  for (long r = 0; r < std::labs(s); ++r) {
    // forward: c_{j+s} from c_j
    double fwd_last = 0.0;
    for (int t = 0; t < kSteps; ++t) fwd_last = log_step(r + t * s);
    // backward: c_{j} from c_{j+s}, i.e. log|c_j| = log|c_{j+s}| - log_step(j)
    double bwd_last = 0.0;
    for (int t = 1; t <= kSteps; ++t) bwd_last = -log_step(r - t * s);
    if (fwd_last < -steep && bwd_last < -steep) ++count;
  }
  return count;
}

// Direct count for mode m of the d = 1 circle bundle with values in L^k:
// u = xi^m f(z), xi the fibre coordinate of L_lambda^*. Invariance of u
// composes the automorphy factor of L_mu^k with the m-th power of that of
// L_lambda.
inline long circle_mode_count(long k, long m, long mu, long lambda) {
  const long exponent_from_mu = k * mu;
  const long exponent_from_fibre = m * lambda;
  return fourier_section_count(exponent_from_mu + exponent_from_fibre);
}

}  // namespace detail

// Sections of the curvature-[a] bundle on the d = 1 lattice torus.
inline long d1_fourier_bruteforce(long a) {
  if (a < 1) throw InputError("d1_fourier_bruteforce: curvature must be >= 1");
  return detail::fourier_section_count(a);
}

namespace detail {

struct ModeTuple {
  long k, m, mu, lambda;
};

inline std::vector<ModeTuple> calibration_tuples() {
  std::vector<ModeTuple> out;
  for (long k = 1; k <= 4; ++k)
    for (long m = -3; m <= 3; ++m)
      for (long mu = 1; mu <= 3; ++mu)
        for (long lambda = 1; lambda <= 2; ++lambda) {
          if (m == 0) continue;
          if (k * mu + m * lambda <= 0 || k * mu + 2 * m * lambda <= 0) continue;
          out.push_back({k, m, mu, lambda});
        }
  return out;
}

}  // namespace detail

// c_dim from the reference count at curvature 1; c_mode as the unique
// candidate in {1, 2} reproducing direct circle-bundle mode counts.
inline LatticeCalibration calibrate() {
  LatticeCalibration cal;
  cal.reference_curvature = 1;
  cal.reference_count = d1_fourier_bruteforce(1);
  cal.c_dim = Rational(cal.reference_count, 1);
  cal.mode_candidates = {1, 2};
  const auto tuples = detail::calibration_tuples();
  cal.checked_tuples = static_cast<long>(tuples.size());

  std::optional<long> found;
  for (long c : cal.mode_candidates) {
    bool ok = true;
    for (const auto& t : tuples) {
      const long direct = detail::circle_mode_count(t.k, t.m, t.mu, t.lambda);
      const long predicted = cal.c_dim.num * (t.k * t.mu + c * t.m * t.lambda);
      if (cal.c_dim.den != 1 || direct != predicted) {
        ok = false;
        break;
      }
    }
    if (ok) {
      if (found) throw CalibrationError("calibration: mode coupling is ambiguous");
      found = c;
    }
  }
  if (!found) throw CalibrationError("calibration: no mode coupling candidate matches the Fourier counts");
  cal.c_mode = Rational(*found, 1);
  return cal;
}

// sections of the nondegenerate integer curvature A in degree q
inline long torus_mode_dim(int q, const HermitianMatrix& a, const LatticeCalibration& cal) {
  const int d = a.dim();
  if (q < 0 || q > d) throw InputError("torus_mode_dim: degree q out of range");
  if (!is_integer_hermitian(a)) throw CalibrationError("torus_mode_dim: curvature matrix is not integral");
  const double det_real = a.determinant();
  const double det_round = std::round(det_real);
  if (std::abs(det_real - det_round) > 1e-9 * std::max(1.0, std::abs(det_round))) {
    throw CalibrationError("torus_mode_dim: determinant of an integer matrix is not an integer");
  }
  const auto det = static_cast<std::int64_t>(det_round);
  if (det == 0) return 0;
  if (!inertia(a).is_signature(q)) return 0;
  Rational scale(1, 1);
  for (int j = 0; j < d; ++j) scale = scale * cal.c_dim;
  const Rational dim = scale * Rational(det < 0 ? -det : det, 1);
  if (!dim.is_integer()) throw CalibrationError("torus_mode_dim: non-integer dimension " + dim.str());
  return static_cast<long>(dim.num);
}

// k mu + c_mode m lambda
inline HermitianMatrix mode_curvature(const TorusBundleSpec& spec, long k, long m, const LatticeCalibration& cal) {
  const double coupling = static_cast<double>(cal.c_mode.num * m) / static_cast<double>(cal.c_mode.den);
  return static_cast<double>(k) * spec.mu_mat + coupling * spec.lambda_mat;
}

inline long max_mode(long k, double delta) {
  return static_cast<long>(std::floor(static_cast<double>(k) * delta + 1e-9));
}

// sum over |m| <= k delta of torus_mode_dim(q, k mu + c_mode m lambda)
inline long fourier_dimension_sum(const TorusBundleSpec& spec, int q, long k, const LatticeCalibration& cal,
                                  unsigned threads = 1) {
  if (k < 1) throw InputError("fourier_dimension_sum: k must be positive");
  const long top = max_mode(k, spec.delta);
  const auto count = static_cast<std::size_t>(2 * top + 1);
  const auto dims = ordered_map(count, threads, [&](std::size_t i) {
    const long m = static_cast<long>(i) - top;
    return torus_mode_dim(q, mode_curvature(spec, k, m, cal), cal);
  });
  long total = 0;
  for (long v : dims) total += v;
  return total;
}

// Re-derives the defining counts from the oracle; throws on any mismatch.
inline void verify_calibration(const LatticeCalibration& cal) {
  if (!(cal.c_dim.value() > 0.0)) throw CalibrationError("calibration: c_dim must be positive");
  for (long a = 1; a <= 12; ++a) {
    const HermitianMatrix m = HermitianMatrix::real(1, {static_cast<double>(a)});
    if (torus_mode_dim(0, m, cal) != d1_fourier_bruteforce(a)) {
      throw CalibrationError("calibration: c_dim = " + cal.c_dim.str() + " does not reproduce the Fourier count at a = " +
                             std::to_string(a));
    }
  }
  for (const auto& t : detail::calibration_tuples()) {
    const double predicted = cal.c_dim.value() * (static_cast<double>(t.k * t.mu) + cal.c_mode.value() * static_cast<double>(t.m * t.lambda));
    if (std::abs(predicted - static_cast<double>(detail::circle_mode_count(t.k, t.m, t.mu, t.lambda))) > 1e-9) {
      throw CalibrationError("calibration: c_mode = " + cal.c_mode.str() + " does not reproduce the mode counts");
    }
  }
}

}  // namespace crmorse
