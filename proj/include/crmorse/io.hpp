#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "crmorse/errors.hpp"
#include "crmorse/hermitian.hpp"
#include "crmorse/model_kernel.hpp"
#include "crmorse/morse.hpp"
#include "crmorse/oracles.hpp"

namespace crmorse::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// 17 significant digits, the CSV float format.
inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

namespace detail {

inline json parse_json(const std::string& bytes) {
  try {
    return json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("invalid JSON: ") + e.what());
  }
}

inline const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw InputError(path + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw InputError(path + "." + key + ": missing");
  return *it;
}

inline double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw InputError(path + ": expected a number");
  return v.get<double>();
}

inline long get_integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw InputError(path + ": expected an integer");
  return v.get<long>();
}

inline void check_schema(const json& doc) {
  const long schema = get_integer(require(doc, "schema", "$"), "$.schema");
  if (schema != kSchemaVersion) throw InputError("$.schema: unsupported version " + std::to_string(schema));
}

}  // namespace detail

// Square complex matrix encoded as rows of [re, im] pairs.
inline HermitianMatrix parse_matrix(const json& v, const std::string& path, double herm_tol = 1e-9) {
  if (!v.is_array() || v.empty()) throw InputError(path + ": expected a nonempty array of rows");
  const auto d = static_cast<Eigen::Index>(v.size());
  ComplexMatrix m(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const auto& row = v[static_cast<std::size_t>(j)];
    const std::string rp = path + "[" + std::to_string(j) + "]";
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d) {
      throw InputError(rp + ": expected a row of " + std::to_string(d) + " [re, im] entries");
    }
    for (Eigen::Index t = 0; t < d; ++t) {
      const auto& e = row[static_cast<std::size_t>(t)];
      const std::string ep = rp + "[" + std::to_string(t) + "]";
      if (!e.is_array() || e.size() != 2) throw InputError(ep + ": expected [re, im]");
      m(j, t) = Complex(detail::get_number(e[0], ep + "[0]"), detail::get_number(e[1], ep + "[1]"));
    }
  }
  try {
    return HermitianMatrix(m, herm_tol);
  } catch (const InputError& e) {
    throw InputError(path + ": not Hermitian: " + e.what());
  }
}

inline json matrix_to_json(const HermitianMatrix& a) {
  json rows = json::array();
  for (int j = 0; j < a.dim(); ++j) {
    json row = json::array();
    for (int t = 0; t < a.dim(); ++t) row.push_back(json::array({a(j, t).real(), a(j, t).imag()}));
    rows.push_back(row);
  }
  return rows;
}

inline PencilField parse_field(const std::string& bytes) {
  const json doc = detail::parse_json(bytes);
  detail::check_schema(doc);
  PencilField f;
  f.n = static_cast<int>(detail::get_integer(detail::require(doc, "n", "$"), "$.n"));
  if (f.n < 2) throw InputError("$.n: must be >= 2");
  f.delta = detail::get_number(detail::require(doc, "delta", "$"), "$.delta");
  if (!(f.delta > 0.0)) throw InputError("$.delta: must be positive");
  const json& pts = detail::require(doc, "points", "$");
  if (!pts.is_array() || pts.empty()) throw InputError("$.points: expected a nonempty array");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::string path = "$.points[" + std::to_string(i) + "]";
    const json& p = pts[i];
    PencilPoint pt;
    const json& label = detail::require(p, "label", path);
    if (!label.is_string()) throw InputError(path + ".label: expected a string");
    pt.label = label.get<std::string>();
    pt.weight = detail::get_number(detail::require(p, "weight", path), path + ".weight");
    if (!(pt.weight > 0.0)) throw InputError(path + ".weight: must be positive");
    pt.R = parse_matrix(detail::require(p, "R", path), path + ".R");
    pt.L = parse_matrix(detail::require(p, "L", path), path + ".L");
    if (pt.R.dim() != f.d() || pt.L.dim() != f.d()) {
      throw InputError(path + ": R and L must be " + std::to_string(f.d()) + "x" + std::to_string(f.d()) +
                       " for n = " + std::to_string(f.n));
    }
    f.points.push_back(std::move(pt));
  }
  validate(f);
  return f;
}

inline json field_to_json(const PencilField& f) {
  json pts = json::array();
  for (const auto& p : f.points) {
    pts.push_back({{"label", p.label}, {"weight", p.weight}, {"R", matrix_to_json(p.R)}, {"L", matrix_to_json(p.L)}});
  }
  return {{"schema", kSchemaVersion}, {"n", f.n}, {"delta", f.delta}, {"points", pts}};
}

inline std::string serialize_field(const PencilField& f) { return field_to_json(f).dump(2) + "\n"; }

// {"schema":1, "lambda":[...], "mu":[[[re,im],...],...], "delta":x}
inline ModelData parse_model(const std::string& bytes) {
  const json doc = detail::parse_json(bytes);
  detail::check_schema(doc);
  ModelData m;
  const json& lam = detail::require(doc, "lambda", "$");
  if (!lam.is_array() || lam.empty()) throw InputError("$.lambda: expected a nonempty array");
  for (std::size_t j = 0; j < lam.size(); ++j) m.lambda.push_back(detail::get_number(lam[j], "$.lambda[" + std::to_string(j) + "]"));
  m.mu = parse_matrix(detail::require(doc, "mu", "$"), "$.mu");
  if (m.mu.dim() != m.d()) throw InputError("$.mu: must be d x d with d = len($.lambda)");
  m.delta = detail::get_number(detail::require(doc, "delta", "$"), "$.delta");
  if (!(m.delta > 0.0)) throw InputError("$.delta: must be positive");
  return m;
}

inline json model_to_json(const ModelData& m) {
  return {{"schema", kSchemaVersion}, {"lambda", m.lambda}, {"mu", matrix_to_json(m.mu)}, {"delta", m.delta}};
}

// {"schema":1, "lambda":[[...]], "mu":[[...]], "delta":x}
inline TorusBundleSpec parse_torus_spec(const std::string& bytes) {
  const json doc = detail::parse_json(bytes);
  detail::check_schema(doc);
  TorusBundleSpec s;
  s.lambda_mat = parse_matrix(detail::require(doc, "lambda", "$"), "$.lambda");
  s.mu_mat = parse_matrix(detail::require(doc, "mu", "$"), "$.mu");
  if (s.lambda_mat.dim() != s.mu_mat.dim()) throw InputError("$.mu: dimension differs from $.lambda");
  if (!is_integer_hermitian(s.lambda_mat)) throw InputError("$.lambda: entries must be integers");
  if (!is_integer_hermitian(s.mu_mat)) throw InputError("$.mu: entries must be integers");
  s.delta = detail::get_number(detail::require(doc, "delta", "$"), "$.delta");
  if (!(s.delta > 0.0)) throw InputError("$.delta: must be positive");
  return s;
}

inline json calibration_to_json(const LatticeCalibration& cal) {
  return {{"c_mode", cal.c_mode.str()},
          {"c_dim", cal.c_dim.str()},
          {"provenance",
           {{"oracle", "Fourier quasi-periodicity count on C/(sqrt(2pi)Z + i sqrt(2pi)Z)"},
            {"reference_curvature", cal.reference_curvature},
            {"reference_count", cal.reference_count},
            {"mode_candidates", cal.mode_candidates},
            {"checked_tuples", cal.checked_tuples}}}};
}

inline std::string serialize_calibration(const LatticeCalibration& cal) { return calibration_to_json(cal).dump(2) + "\n"; }

inline LatticeCalibration parse_calibration(const std::string& bytes) {
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw CalibrationError(std::string("calibration record: invalid JSON: ") + e.what());
  }
  LatticeCalibration cal;
  try {
    if (!doc.is_object() || !doc.contains("c_mode") || !doc.contains("c_dim"))
      throw CalibrationError("calibration record: missing c_mode / c_dim");
    cal.c_mode = Rational::parse(doc.at("c_mode").get<std::string>());
    cal.c_dim = Rational::parse(doc.at("c_dim").get<std::string>());
    if (doc.contains("provenance")) {
      const json& p = doc.at("provenance");
      cal.reference_curvature = p.value("reference_curvature", 1L);
      cal.reference_count = p.value("reference_count", 0L);
      cal.mode_candidates = p.value("mode_candidates", std::vector<long>{});
      cal.checked_tuples = p.value("checked_tuples", 0L);
    }
  } catch (const json::exception& e) {
    throw CalibrationError(std::string("calibration record: ") + e.what());
  } catch (const InputError& e) {
    throw CalibrationError(std::string("calibration record: ") + e.what());
  }
  return cal;
}

inline json report_to_json(const MorseReport& r) {
  json xq = json::array();
  for (std::size_t q = 0; q < r.xq.size(); ++q) {
    xq.push_back({{"q", q}, {"holds", r.xq[q].holds}, {"max_delta", r.xq[q].max_delta}});
  }
  json pos = {{"positive_everywhere", r.positivity.positive_everywhere},
              {"positive_somewhere", r.positivity.positive_somewhere},
              {"semi_positive_delta", r.positivity.semi_positive_delta ? json(*r.positivity.semi_positive_delta) : json(nullptr)}};
  return {{"n", r.n},
          {"delta", r.delta},
          {"densities", r.densities},
          {"strong_sums", r.strong_sums},
          {"rrh_total", r.rrh_total},
          {"xq", xq},
          {"positivity", pos},
          {"bigness", {{"big", r.bigness.big}, {"reason", to_string(r.bigness.reason)}, {"explanation", r.bigness.explanation}}}};
}

// Columns: lo,hi,neg,zero,pos,det_sign
inline std::string chambers_csv(const ChamberDecomposition& dec) {
  std::ostringstream os;
  os << "lo,hi,neg,zero,pos,det_sign\n";
  for (const auto& c : dec.chambers) {
    os << fmt_double(c.lo) << "," << fmt_double(c.hi) << "," << c.inertia.neg << "," << c.inertia.zero << ","
       << c.inertia.pos << "," << c.det_sign << "\n";
  }
  return os.str();
}

// Columns: q,density,weak_bound,strong_sum,xq_holds,xq_max_delta
inline std::string report_csv(const MorseReport& r, long k) {
  std::ostringstream os;
  os << "q,density,weak_bound,strong_sum,xq_holds,xq_max_delta\n";
  const double kn = std::pow(static_cast<double>(k), r.n);
  for (std::size_t q = 0; q < r.densities.size(); ++q) {
    os << q << "," << fmt_double(r.densities[q]) << "," << fmt_double(kn * r.densities[q]) << ","
       << fmt_double(r.strong_sums[q]) << "," << (r.xq[q].holds ? 1 : 0) << "," << fmt_double(r.xq[q].max_delta) << "\n";
  }
  return os.str();
}

}  // namespace crmorse::io
