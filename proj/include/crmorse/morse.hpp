#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "crmorse/errors.hpp"
#include "crmorse/hermitian.hpp"
#include "crmorse/parallel.hpp"
#include "crmorse/pencil.hpp"

namespace crmorse {

// One sample x of the CR manifold: volume mass dv_X carried by the sample,
// curvature R^L_x and Levi form L_x in a common frame of T^{1,0}_x X.
//
// The top-degree form (R + 2sL)^{n-1} ^ (-omega_0) / (n-1)! equals
// det(R + 2sL) dv_X, so the engine stores det(R + 2sL) * weight and never
// represents omega_0.
struct PencilPoint {
  std::string label;
  double weight = 1.0;
  HermitianMatrix R;
  HermitianMatrix L;
};

// Discretisation of the integral over X as a weighted sum of samples.
// n is the CR dimension parameter (dim X = 2n - 1), so d = n - 1.
struct PencilField {
  int n = 2;
  double delta = 1.0;
  std::vector<PencilPoint> points;

  int d() const { return n - 1; }
  double total_weight() const {
    double w = 0.0;
    for (const auto& p : points) w += p.weight;
    return w;
  }
};

inline void validate(const PencilField& f) {
  if (f.n < 2) throw InputError("field: n must be >= 2");
  if (!(f.delta > 0.0)) throw InputError("field: delta must be positive");
  if (f.points.empty()) throw InputError("field: points must be nonempty");
  for (std::size_t i = 0; i < f.points.size(); ++i) {
    const auto& p = f.points[i];
    std::ostringstream where;
    where << "points[" << i << "] (" << p.label << ")";
    if (!(p.weight > 0.0) || !std::isfinite(p.weight)) throw InputError(where.str() + ": weight must be positive");
    if (p.R.dim() != f.d() || p.L.dim() != f.d()) {
      std::ostringstream os;
      os << where.str() << ": matrices must be " << f.d() << "x" << f.d() << " for n = " << f.n;
      throw InputError(os.str());
    }
  }
}

struct EvalOptions {
  unsigned threads = 1;
};

inline double two_pi_pow_minus(int n) { return std::pow(2.0 * std::numbers::pi, -n); }

// Per-sample chamber integrals: |det| integral per degree q = 0..d and the
// signed integral of det over [-delta, delta].
struct PointIntegrals {
  std::vector<double> by_degree;
  double signed_total = 0.0;
};

namespace detail {

template <typename F>
auto with_label(const PencilPoint& p, F&& f) {
  try {
    return f();
  } catch (const DegeneratePencil& e) {
    throw DegeneratePencil("sample '" + p.label + "': " + e.what());
  }
}

inline void check_delta(const PencilField& f, double delta) {
  if (!(delta > 0.0)) throw InputError("delta must be positive");
  if (delta > f.delta * (1.0 + 1e-15)) throw InputError("delta exceeds the field's delta");
}

}  // namespace detail

inline std::vector<PointIntegrals> point_integrals(const PencilField& f, double delta, const EvalOptions& opt = {}) {
  validate(f);
  detail::check_delta(f, delta);
  return ordered_map(f.points.size(), opt.threads, [&](std::size_t i) {
    const auto& p = f.points[i];
    return detail::with_label(p, [&] {
      const auto dec = chambers(p.R, p.L, delta);
      PointIntegrals out;
      out.by_degree.resize(static_cast<std::size_t>(f.d() + 1));
      for (int q = 0; q <= f.d(); ++q) out.by_degree[static_cast<std::size_t>(q)] = chamber_integral(dec, q);
      out.signed_total = signed_chamber_integral(dec);
      return out;
    });
  });
}

// c_q(delta) for q = 0..d; reduction in input order.
inline std::vector<double> densities(const PencilField& f, double delta, const EvalOptions& opt = {}) {
  const auto per_point = point_integrals(f, delta, opt);
  std::vector<double> c(static_cast<std::size_t>(f.d() + 1), 0.0);
  for (std::size_t i = 0; i < per_point.size(); ++i) {
    for (std::size_t q = 0; q < c.size(); ++q) c[q] += f.points[i].weight * per_point[i].by_degree[q];
  }
  const double norm = two_pi_pow_minus(f.n);
  for (double& x : c) x *= norm;
  return c;
}

// (2 pi)^{-n} sum_i w_i  integral over R_{x_i,q} n [-delta, delta] of |det(R_i + 2sL_i)| ds
inline double density_q(const PencilField& f, int q, double delta, const EvalOptions& opt = {}) {
  if (q < 0 || q > f.d()) throw InputError("degree q out of range");
  return densities(f, delta, opt)[static_cast<std::size_t>(q)];
}

// k^n c_q(delta): leading term of the upper bound on dim H^q_{b, <= k delta}.
inline double weak_bound(const PencilField& f, int q, double delta, long k, const EvalOptions& opt = {}) {
  if (k < 1) throw InputError("k must be a positive integer");
  return std::pow(static_cast<double>(k), f.n) * density_q(f, q, delta, opt);
}

// Signed integral of det over [-delta, delta], weighted and normalised.
inline double rrh_total(const PencilField& f, double delta, const EvalOptions& opt = {}) {
  const auto per_point = point_integrals(f, delta, opt);
  double acc = 0.0;
  for (std::size_t i = 0; i < per_point.size(); ++i) acc += f.points[i].weight * per_point[i].signed_total;
  return two_pi_pow_minus(f.n) * acc;
}

// Entry q < d: sum_{j<=q} (-1)^{q-j} c_j. Entry d: the signed total.
inline std::vector<double> strong_sums_from(const std::vector<double>& c, double rrh) {
  const std::size_t d = c.size() - 1;
  std::vector<double> out(c.size(), 0.0);
  for (std::size_t q = 0; q < d; ++q) {
    double acc = 0.0;
    for (std::size_t j = 0; j <= q; ++j) acc += ((q - j) % 2 == 0 ? 1.0 : -1.0) * c[j];
    out[q] = acc;
  }
  out[d] = rrh;
  return out;
}

inline std::vector<double> strong_sums(const PencilField& f, double delta, const EvalOptions& opt = {}) {
  return strong_sums_from(densities(f, delta, opt), rrh_total(f, delta, opt));
}

struct XqResult {
  bool holds = false;
  double max_delta = 0.0;
};

// Largest delta' <= field.delta with R_{x,q} n [-delta', delta'] empty for
// every sample. Certifies the sampled field only, not the continuum.
inline XqResult check_Xq(const PencilField& f, int q, const EvalOptions& opt = {}) {
  validate(f);
  if (q < 0 || q > f.d()) throw InputError("degree q out of range");
  const auto per_point = ordered_map(f.points.size(), opt.threads, [&](std::size_t i) {
    const auto& p = f.points[i];
    return detail::with_label(p, [&] {
      if (inertia(p.R).is_signature(q)) return 0.0;
      const auto dec = chambers(p.R, p.L, f.delta);
      double nearest = f.delta;
      for (const auto& iv : signature_set(dec, q)) {
        const double dist = iv.lo > 0.0 ? iv.lo : (iv.hi < 0.0 ? -iv.hi : 0.0);
        nearest = std::min(nearest, dist);
      }
      return nearest;
    });
  });
  XqResult res;
  res.max_delta = f.delta;
  for (double v : per_point) res.max_delta = std::min(res.max_delta, v);
  res.holds = res.max_delta > 0.0;
  return res;
}

struct Positivity {
  bool positive_everywhere = false;
  bool positive_somewhere = false;
  // Largest delta' <= field.delta with R + 2sL >= 0 for |s| <= delta' at
  // every sample; empty when no positive delta' works.
  std::optional<double> semi_positive_delta;
};

namespace detail {

// Extent [a, b] (a <= 0 <= b) of {s in [-delta, delta] : R + 2sL >= 0},
// or nullopt when R itself is not semidefinite. The set is an interval
// because the smallest eigenvalue of an affine Hermitian family is concave.
inline std::optional<std::pair<double, double>> semidefinite_extent(const HermitianMatrix& r,
                                                                    const HermitianMatrix& l, double delta) {
  if (inertia(r).neg > 0) return std::nullopt;
  const RealPolynomial poly = pencil_char_poly(r, l);
  if (!poly.is_zero()) {
    const auto dec = chambers(r, l, delta);
    double hi = 0.0;
    for (const auto& c : dec.chambers) {
      if (c.hi <= 0.0) continue;
      if (c.inertia.neg > 0) break;
      hi = c.hi;
    }
    double lo = 0.0;
    for (auto it = dec.chambers.rbegin(); it != dec.chambers.rend(); ++it) {
      if (it->lo >= 0.0) continue;
      if (it->inertia.neg > 0) break;
      lo = it->lo;
    }
    return std::pair{lo, hi};
  }
  // det == 0 identically: bisect on the concave smallest eigenvalue.
  auto ok = [&](double s) { return inertia(pencil_at(r, l, s)).neg == 0; };
  auto edge = [&](double sign) {
    if (ok(sign * delta)) return sign * delta;
    double in = 0.0;
    double out = sign * delta;
    for (int it = 0; it < 200 && std::abs(out - in) > 1e-15; ++it) {
      const double mid = 0.5 * (in + out);
      (ok(mid) ? in : out) = mid;
    }
    return in;
  };
  return std::pair{edge(-1.0), edge(1.0)};
}

}  // namespace detail

inline Positivity classify_bundle(const PencilField& f, const EvalOptions& opt = {}) {
  validate(f);
  struct PointClass {
    bool positive = false;
    std::optional<std::pair<double, double>> extent;
  };
  const auto per_point = ordered_map(f.points.size(), opt.threads, [&](std::size_t i) {
    const auto& p = f.points[i];
    return detail::with_label(p, [&] {
      PointClass pc;
      const Inertia in = inertia(p.R);
      pc.positive = in.pos == f.d();
      pc.extent = detail::semidefinite_extent(p.R, p.L, f.delta);
      return pc;
    });
  });

  Positivity res;
  res.positive_everywhere = true;
  double spd = f.delta;
  bool semi = true;
  for (const auto& pc : per_point) {
    res.positive_everywhere = res.positive_everywhere && pc.positive;
    res.positive_somewhere = res.positive_somewhere || pc.positive;
    if (!pc.extent) {
      semi = false;
      continue;
    }
    spd = std::min({spd, -pc.extent->first, pc.extent->second});
  }
  if (semi && spd > 0.0) res.semi_positive_delta = spd;
  return res;
}

enum class BignessReason { PositiveBundle, GrauertRiemenschneider, Inconclusive };

struct Bigness {
  bool big = false;
  BignessReason reason = BignessReason::Inconclusive;
  std::string explanation;
};

inline const char* to_string(BignessReason r) {
  switch (r) {
    case BignessReason::PositiveBundle: return "positive-bundle";
    case BignessReason::GrauertRiemenschneider: return "grauert-riemenschneider";
    case BignessReason::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

inline Bigness bigness_verdict(const Positivity& pos) {
  if (pos.positive_everywhere) {
    return {true, BignessReason::PositiveBundle, "curvature positive at every sample: rigid positive CR line bundle is big"};
  }
  if (pos.semi_positive_delta && pos.positive_somewhere) {
    return {true, BignessReason::GrauertRiemenschneider,
            "semi-positive and positive at least at one sample: Grauert-Riemenschneider criterion"};
  }
  return {false, BignessReason::Inconclusive, "criteria inconclusive (not a disproof of bigness)"};
}

inline Bigness bigness_verdict(const PencilField& f, const EvalOptions& opt = {}) {
  return bigness_verdict(classify_bundle(f, opt));
}

struct MorseReport {
  int n = 2;
  double delta = 0.0;
  std::vector<double> densities;  // c_q(delta), q = 0..d
  std::vector<double> strong_sums;
  double rrh_total = 0.0;
  std::vector<XqResult> xq;  // q = 0..d
  Positivity positivity;
  Bigness bigness;
};

inline MorseReport morse_report(const PencilField& f, double delta, const EvalOptions& opt = {}) {
  MorseReport rep;
  rep.n = f.n;
  rep.delta = delta;
  rep.densities = densities(f, delta, opt);
  rep.rrh_total = rrh_total(f, delta, opt);
  rep.strong_sums = strong_sums_from(rep.densities, rep.rrh_total);
  for (int q = 0; q <= f.d(); ++q) rep.xq.push_back(check_Xq(f, q, opt));
  rep.positivity = classify_bundle(f, opt);
  rep.bigness = bigness_verdict(rep.positivity);
  return rep;
}

}  // namespace crmorse
