#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "crmorse/errors.hpp"
#include "crmorse/morse.hpp"
#include "crmorse/oracles.hpp"

namespace crmorse {

// Built-in torus examples.
inline TorusBundleSpec torus_example(const std::string& name) {
  if (name == "torus-d1") {
    return {HermitianMatrix::real(1, {1.0}), HermitianMatrix::real(1, {2.0}), 0.5};
  }
  if (name == "torus-d2-indefinite") {
    return {HermitianMatrix::identity(2), HermitianMatrix::real(2, {1.0, 0.0, 0.0, -1.0}), 0.25};
  }
  throw InputError("unknown example '" + name + "' (expected torus-d1 or torus-d2-indefinite)");
}

// Reference Heisenberg example: lambda = (1, 2), mu = [[3, 1], [1, 3]].
inline HeisenbergSpec heisenberg_example(double delta = 0.5) {
  return {{1, 2}, HermitianMatrix::real(2, {3.0, 1.0, 1.0, 3.0}), delta};
}

enum class ConvergenceMode {
  Weak,  // dim H^q versus k^n c_q
  Rrh,   // sum_q (-1)^q dim H^q versus k^n times the signed total
};

struct ConvergenceRow {
  long k = 0;
  long oracle = 0;
  double bound = 0.0;
  double ratio = 0.0;
};

struct ConvergenceStudy {
  long k0 = 0;
  double weight = 0.0;  // field weight fixed by matching the oracle at k0
  std::vector<ConvergenceRow> rows;
};

inline long oracle_side(const TorusBundleSpec& spec, ConvergenceMode mode, int q, long k, const LatticeCalibration& cal,
                        unsigned threads) {
  if (mode == ConvergenceMode::Weak) return fourier_dimension_sum(spec, q, k, cal, threads);
  long acc = 0;
  for (int j = 0; j <= spec.d(); ++j) acc += (j % 2 == 0 ? 1 : -1) * fourier_dimension_sum(spec, j, k, cal, threads);
  return acc;
}

inline double bound_side(const PencilField& f, ConvergenceMode mode, int q, long k, const EvalOptions& opt) {
  if (mode == ConvergenceMode::Weak) return weak_bound(f, q, f.delta, k, opt);
  return std::pow(static_cast<double>(k), f.n) * rrh_total(f, f.delta, opt);
}

// Calibrates the single field weight at k0, then compares oracle and bound
// at every k. One scalar cannot absorb a wrong k^n law or chamber structure.
inline ConvergenceStudy convergence(const TorusBundleSpec& spec, ConvergenceMode mode, int q, long k0,
                                    const std::vector<long>& ks, const LatticeCalibration& cal, unsigned threads = 1) {
  if (k0 < 1) throw InputError("convergence: k0 must be positive");
  if (q < 0 || q > spec.d()) throw InputError("convergence: degree q out of range");
  PencilField field = torus_bundle_field(spec);
  const EvalOptions opt{threads};
  const double unit = bound_side(field, mode, q, k0, opt);
  if (unit == 0.0) throw InputError("convergence: bound vanishes at k0, weight cannot be calibrated");
  ConvergenceStudy study;
  study.k0 = k0;
  study.weight = static_cast<double>(oracle_side(spec, mode, q, k0, cal, threads)) / unit;
  if (!(study.weight > 0.0)) throw InputError("convergence: calibrated weight is not positive");
  field.points.front().weight = study.weight;
  for (long k : ks) {
    ConvergenceRow row;
    row.k = k;
    row.oracle = oracle_side(spec, mode, q, k, cal, threads);
    row.bound = bound_side(field, mode, q, k, opt);
    row.ratio = static_cast<double>(row.oracle) / row.bound;
    study.rows.push_back(row);
  }
  return study;
}

}  // namespace crmorse
