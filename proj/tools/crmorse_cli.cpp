// crmorse: batch front end for the pencil, Morse-bound, model-kernel and
// torus-oracle routines. Exit codes: 0 ok, 2 input error, 3 degenerate
// pencil, 4 calibration failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include <CLI11.hpp>

#include "crmorse/crmorse.hpp"
#include "crmorse/io.hpp"

namespace {

using crmorse::io::json;

constexpr const char* kVersion = "0.1.0";

struct Options {
  std::string input;
  std::string out;
  std::string format;
  std::string calibration = "calibration.json";
  std::string example = "torus-d1";
  std::string mode = "weak";
  std::optional<double> delta;
  std::optional<int> q;
  long k = 1;
  double tol = crmorse::kDefaultRootTol;
  unsigned threads = crmorse::default_threads();
  int point = 0;
  int eta_nodes = 256;
  int max_degree = 4;
  double eta = 0.0;
  double theta = 0.0;
  long kmin = 10;
  long kmax = 1000;
  long k0 = 50;
  std::vector<long> ks;
};

struct Output {
  json result;
  std::string csv;  // empty when the command has no tabular form
};

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

std::string require_input(const Options& o) {
  if (o.input.empty()) throw crmorse::InputError("--input is required for this command");
  return crmorse::io::read_file(o.input);
}

int degree_or(const Options& o, int d, int fallback) {
  const int q = o.q.value_or(fallback);
  if (q < 0 || q > d) throw crmorse::InputError("--q must lie in [0, " + std::to_string(d) + "]");
  return q;
}

crmorse::LatticeCalibration load_calibration(const std::string& path) {
  namespace fs = std::filesystem;
  crmorse::LatticeCalibration cal;
  if (!fs::exists(path)) {
    cal = crmorse::calibrate();
    crmorse::io::write_file(path, crmorse::io::serialize_calibration(cal));
  } else {
    std::string bytes;
    try {
      bytes = crmorse::io::read_file(path);
    } catch (const crmorse::InputError& e) {
      throw crmorse::CalibrationError(e.what());
    }
    cal = crmorse::io::parse_calibration(bytes);
  }
  crmorse::verify_calibration(cal);
  return cal;
}

json chamber_json(const crmorse::ChamberDecomposition& dec) {
  json rows = json::array();
  for (const auto& c : dec.chambers) {
    rows.push_back({{"lo", c.lo},
                    {"hi", c.hi},
                    {"inertia", {c.inertia.neg, c.inertia.zero, c.inertia.pos}},
                    {"det_sign", c.det_sign}});
  }
  return {{"delta", dec.delta}, {"roots", dec.roots}, {"det_poly", dec.det_poly.coeffs()}, {"chambers", rows}};
}

json positivity_json(const crmorse::Positivity& p) {
  return {{"positive_everywhere", p.positive_everywhere},
          {"positive_somewhere", p.positive_somewhere},
          {"semi_positive_delta", p.semi_positive_delta ? json(*p.semi_positive_delta) : json(nullptr)}};
}

// -- commands ---------------------------------------------------------------

Output cmd_chambers(const Options& o) {
  const auto f = crmorse::io::parse_field(require_input(o));
  if (o.point < 0 || o.point >= static_cast<int>(f.points.size())) {
    throw crmorse::InputError("--point " + std::to_string(o.point) + " out of range (field has " +
                              std::to_string(f.points.size()) + " points)");
  }
  const auto& p = f.points[static_cast<std::size_t>(o.point)];
  const double delta = o.delta.value_or(f.delta);
  crmorse::ChamberDecomposition dec;
  try {
    dec = crmorse::chambers(p.R, p.L, delta, o.tol);
  } catch (const crmorse::DegeneratePencil& e) {
    throw crmorse::DegeneratePencil("sample '" + p.label + "': " + e.what());
  }
  json res = chamber_json(dec);
  res["point"] = o.point;
  res["label"] = p.label;
  return {res, crmorse::io::chambers_csv(dec)};
}

Output cmd_morse(const Options& o) {
  const auto f = crmorse::io::parse_field(require_input(o));
  if (o.k < 1) throw crmorse::InputError("--k must be a positive integer");
  const double delta = o.delta.value_or(f.delta);
  const auto rep = crmorse::morse_report(f, delta, {o.threads});
  json res = crmorse::io::report_to_json(rep);
  res["k"] = o.k;
  json bounds = json::array();
  for (double c : rep.densities) bounds.push_back(std::pow(static_cast<double>(o.k), f.n) * c);
  res["weak_bounds"] = bounds;
  return {res, crmorse::io::report_csv(rep, o.k)};
}

Output cmd_classify(const Options& o) {
  const auto f = crmorse::io::parse_field(require_input(o));
  const crmorse::EvalOptions opt{o.threads};
  const auto pos = crmorse::classify_bundle(f, opt);
  const auto big = crmorse::bigness_verdict(pos);
  json xq = json::array();
  std::ostringstream csv;
  csv << "q,xq_holds,xq_max_delta\n";
  for (int q = 0; q <= f.d(); ++q) {
    const auto r = crmorse::check_Xq(f, q, opt);
    xq.push_back({{"q", q}, {"holds", r.holds}, {"max_delta", r.max_delta}});
    csv << q << "," << (r.holds ? 1 : 0) << "," << crmorse::io::fmt_double(r.max_delta) << "\n";
  }
  json res = {{"positivity", positivity_json(pos)},
              {"bigness", {{"big", big.big}, {"reason", crmorse::to_string(big.reason)}, {"explanation", big.explanation}}},
              {"xq", xq}};
  return {res, csv.str()};
}

crmorse::ModelData model_input(const Options& o) {
  auto m = crmorse::io::parse_model(require_input(o));
  if (o.delta) m.delta = *o.delta;
  crmorse::validate(m);
  return m;
}

Output cmd_szego(const Options& o) {
  const auto m = model_input(o);
  json rows = json::array();
  std::ostringstream csv;
  csv << "q,szego_density\n";
  for (int q = 0; q <= m.d(); ++q) {
    if (o.q && *o.q != q) continue;
    const double v = crmorse::szego_density(m, q);
    rows.push_back({{"q", q}, {"szego_density", v}});
    csv << q << "," << crmorse::io::fmt_double(v) << "\n";
  }
  if (rows.empty()) throw crmorse::InputError("--q out of range");
  json eta = json::array();
  for (const auto& iv : crmorse::eta_chambers(m).by_degree) {
    json ivs = json::array();
    for (const auto& i : iv) ivs.push_back({i.lo, i.hi});
    eta.push_back(ivs);
  }
  return {{{"n", m.n()}, {"delta", m.delta}, {"densities", rows}, {"eta_sets", eta}}, csv.str()};
}

Output cmd_extremal(const Options& o) {
  const auto m = model_input(o);
  const int q = degree_or(o, m.d(), 0);
  const Eigen::VectorXcd z = Eigen::VectorXcd::Zero(m.d());
  const auto r = crmorse::extremal_form(m, q, z, o.theta, o.eta_nodes);
  json coeffs = json::array();
  for (std::size_t j = 0; j < r.index_sets.size(); ++j) {
    coeffs.push_back({{"J", r.index_sets[j]}, {"u00", {r.origin_value[j].real(), r.origin_value[j].imag()}}});
  }
  std::ostringstream csv;
  csv << "q,eta_nodes,norm_check,peak_check\n"
      << q << "," << o.eta_nodes << "," << crmorse::io::fmt_double(r.norm_check) << ","
      << crmorse::io::fmt_double(r.peak_check) << "\n";
  return {{{"q", q}, {"eta_nodes", o.eta_nodes}, {"norm_check", r.norm_check}, {"peak_check", r.peak_check}, {"coefficients", coeffs}},
          csv.str()};
}

Output cmd_bergman(const Options& o) {
  const auto m = model_input(o);
  const Eigen::VectorXcd z = Eigen::VectorXcd::Zero(m.d());
  json per_q = json::array();
  std::ostringstream csv;
  csv << "q,bergman_diag,on_boundary\n";
  for (int q = 0; q <= m.d(); ++q) {
    const auto b = crmorse::bergman_diag(m, o.eta, q, z);
    per_q.push_back({{"q", q}, {"value", b.value}, {"on_boundary", b.on_boundary}});
    csv << q << "," << crmorse::io::fmt_double(b.value) << "," << (b.on_boundary ? 1 : 0) << "\n";
  }
  json res = {{"eta", o.eta}, {"bergman_diag", per_q}};
  const auto in = crmorse::inertia(crmorse::m_phi_eta(m, o.eta));
  if (in.pos == m.d()) {
    const double brute = crmorse::bergman_bruteforce(m, o.eta, o.max_degree);
    const double closed = per_q[0]["value"].get<double>();
    res["bruteforce"] = {{"max_degree", o.max_degree}, {"value", brute}, {"relative_error", std::abs(brute - closed) / closed}};
  } else {
    res["bruteforce"] = nullptr;
  }
  return {res, csv.str()};
}

crmorse::TorusBundleSpec torus_input(const Options& o) {
  auto spec = o.input.empty() ? crmorse::torus_example(o.example) : crmorse::io::parse_torus_spec(require_input(o));
  if (o.delta) spec.delta = *o.delta;
  return spec;
}

Output cmd_torus(const Options& o) {
  const auto cal = load_calibration(o.calibration);
  const auto spec = torus_input(o);
  if (o.k < 1) throw crmorse::InputError("--k must be a positive integer");
  const auto f = crmorse::torus_bundle_field(spec);
  const auto c = crmorse::densities(f, spec.delta, {o.threads});
  json rows = json::array();
  std::ostringstream csv;
  csv << "q,density,weak_bound,oracle_sum\n";
  for (int q = 0; q <= spec.d(); ++q) {
    const long sum = crmorse::fourier_dimension_sum(spec, q, o.k, cal, o.threads);
    const double bound = std::pow(static_cast<double>(o.k), f.n) * c[static_cast<std::size_t>(q)];
    rows.push_back({{"q", q}, {"density", c[static_cast<std::size_t>(q)]}, {"weak_bound", bound}, {"oracle_sum", sum}});
    csv << q << "," << crmorse::io::fmt_double(c[static_cast<std::size_t>(q)]) << "," << crmorse::io::fmt_double(bound)
        << "," << sum << "\n";
  }
  return {{{"k", o.k}, {"delta", spec.delta}, {"rows", rows}, {"calibration", crmorse::io::calibration_to_json(cal)}},
          csv.str()};
}

Output report_for(const crmorse::PencilField& f, const Options& o) {
  const auto rep = crmorse::morse_report(f, f.delta, {o.threads});
  json res = crmorse::io::report_to_json(rep);
  res["field"] = crmorse::io::field_to_json(f);
  return {res, crmorse::io::report_csv(rep, o.k)};
}

Output cmd_heisenberg(const Options& o) {
  return report_for(crmorse::heisenberg_field(crmorse::heisenberg_example(o.delta.value_or(0.5))), o);
}

Output cmd_levi_flat(const Options& o) {
  crmorse::HermitianMatrix mu = crmorse::HermitianMatrix::identity(2);
  if (!o.input.empty()) mu = crmorse::io::parse_model(require_input(o)).mu;
  return report_for(crmorse::levi_flat_field(mu, mu.dim(), o.delta.value_or(1.0)), o);
}

Output cmd_calibrate(const Options& o) {
  const auto cal = crmorse::calibrate();
  crmorse::verify_calibration(cal);
  crmorse::io::write_file(o.calibration, crmorse::io::serialize_calibration(cal));
  std::ostringstream csv;
  csv << "c_mode,c_dim\n" << cal.c_mode.str() << "," << cal.c_dim.str() << "\n";
  return {crmorse::io::calibration_to_json(cal), csv.str()};
}

std::vector<long> default_ks(long kmin, long kmax) {
  std::vector<long> ks;
  for (long decade = 1; decade <= kmax; decade *= 10) {
    for (long m : {1L, 2L, 5L}) {
      const long k = m * decade;
      if (k >= kmin && k <= kmax) ks.push_back(k);
    }
    if (decade > kmax / 10) break;
  }
  if (ks.empty() || ks.front() != kmin) ks.insert(ks.begin(), kmin);
  if (ks.back() != kmax) ks.push_back(kmax);
  return ks;
}

Output cmd_convergence(const Options& o) {
  const auto cal = load_calibration(o.calibration);
  const auto spec = torus_input(o);
  crmorse::ConvergenceMode mode;
  if (o.mode == "weak") {
    mode = crmorse::ConvergenceMode::Weak;
  } else if (o.mode == "rrh") {
    mode = crmorse::ConvergenceMode::Rrh;
  } else {
    throw crmorse::InputError("--mode must be weak or rrh");
  }
  if (o.kmin < 1 || o.kmax < o.kmin) throw crmorse::InputError("need 1 <= --kmin <= --kmax");
  const int q = degree_or(o, spec.d(), 0);
  const auto ks = o.ks.empty() ? default_ks(o.kmin, o.kmax) : o.ks;
  const auto study = crmorse::convergence(spec, mode, q, o.k0, ks, cal, o.threads);
  json rows = json::array();
  std::ostringstream csv;
  csv << "k,oracle_sum,bound,ratio\n";
  for (const auto& r : study.rows) {
    rows.push_back({{"k", r.k}, {"oracle_sum", r.oracle}, {"bound", r.bound}, {"ratio", r.ratio}});
    csv << r.k << "," << r.oracle << "," << crmorse::io::fmt_double(r.bound) << "," << crmorse::io::fmt_double(r.ratio)
        << "\n";
  }
  return {{{"mode", o.mode}, {"q", q}, {"k0", study.k0}, {"weight", study.weight}, {"rows", rows}}, csv.str()};
}

void emit(const Options& o, const std::string& default_format, const std::string& echo, const Output& out,
          double seconds) {
  const std::string format = o.format.empty() ? default_format : o.format;
  std::string text;
  if (format == "csv") {
    text = out.csv;
  } else {
    json digest = nullptr;
    if (!o.input.empty()) digest = "sha256:" + sha256_hex(crmorse::io::read_file(o.input));
    const json report = {{"tool", "crmorse"},
                         {"version", kVersion},
                         {"command", echo},
                         {"input_digest", digest},
                         {"result", out.result},
                         {"timing", {{"wall_seconds", seconds}}}};
    text = report.dump(2) + "\n";
  }
  if (o.out.empty()) {
    std::cout << text;
  } else {
    crmorse::io::write_file(o.out, text);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chamber decompositions, Morse-type density bounds and lattice oracles for rigid CR line bundles"};
  app.require_subcommand(1);
  Options o;

  struct Command {
    CLI::App* sub;
    Output (*run)(const Options&);
    std::string default_format;
  };
  std::vector<Command> commands;

  auto add = [&](const std::string& name, const std::string& help, Output (*run)(const Options&),
                 const std::string& default_format) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--input", o.input, "input document (JSON)");
    sub->add_option("--out", o.out, "write the report here instead of stdout");
    sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", o.threads, "worker threads (default: $CRMORSE_THREADS or all cores)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--delta", o.delta, "Fourier cut-off delta");
    sub->add_option("--q", o.q, "form degree");
    sub->add_option("--k", o.k, "tensor power k");
    sub->add_option("--tol", o.tol, "root tolerance");
    commands.push_back({sub, run, default_format});
    return sub;
  };

  add("chambers", "per-chamber table for one sample", cmd_chambers, "csv")
      ->add_option("--point", o.point, "sample index");
  add("morse", "densities, Morse bounds, X(q) and bigness for a field", cmd_morse, "json");
  add("classify", "positivity, X(q) and bigness verdict for a field", cmd_classify, "json");
  add("szego-density", "model Szego density per degree", cmd_szego, "json");
  auto* ext = add("extremal-check", "norm and peak checks of the model extremal form", cmd_extremal, "json");
  ext->add_option("--eta-nodes", o.eta_nodes, "Gauss-Legendre nodes per chamber");
  ext->add_option("--theta", o.theta, "fibre coordinate");
  auto* berg = add("bergman-check", "closed-form model Bergman density against the Gram oracle", cmd_bergman, "json");
  berg->add_option("--eta", o.eta, "Fourier variable eta");
  berg->add_option("--max-degree", o.max_degree, "monomial degree of the Gram oracle");
  auto* torus = add("torus-demo", "densities and oracle sums for a torus circle bundle", cmd_torus, "json");
  torus->add_option("--example", o.example, "torus-d1 or torus-d2-indefinite");
  torus->add_option("--calibration", o.calibration, "calibration record");
  add("heisenberg-demo", "Morse report of the built-in Heisenberg example", cmd_heisenberg, "json");
  add("levi-flat-demo", "Morse report of a Levi-flat product (mu from --input, default identity)", cmd_levi_flat,
      "json");
  add("calibrate", "derive and persist the lattice constants", cmd_calibrate, "json")
      ->add_option("--calibration", o.calibration, "calibration record");
  auto* conv = add("convergence", "oracle sum against the calibrated bound over k", cmd_convergence, "csv");
  conv->add_option("--example", o.example, "torus-d1 or torus-d2-indefinite");
  conv->add_option("--calibration", o.calibration, "calibration record");
  conv->add_option("--kmin", o.kmin, "smallest k");
  conv->add_option("--kmax", o.kmax, "largest k");
  conv->add_option("--k0", o.k0, "reference k for the weight");
  conv->add_option("--ks", o.ks, "explicit k list")->delimiter(',');
  conv->add_option("--mode", o.mode, "weak or rrh")->check(CLI::IsMember({"weak", "rrh"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  std::string echo;
  for (int i = 1; i < argc; ++i) echo += (i > 1 ? " " : "") + std::string(argv[i]);

  for (const auto& c : commands) {
    if (!c.sub->parsed()) continue;
    const auto start = std::chrono::steady_clock::now();
    try {
      const Output out = c.run(o);
      const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      emit(o, c.default_format, echo, out, seconds);
      return 0;
    } catch (const crmorse::InputError& e) {
      std::cerr << "input error: " << e.what() << "\n";
      return 2;
    } catch (const crmorse::DegeneratePencil& e) {
      std::cerr << "degenerate pencil: " << e.what() << "\n";
      return 3;
    } catch (const crmorse::CalibrationError& e) {
      std::cerr << "calibration failure: " << e.what() << "\n";
      return 4;
    }
  }
  return 2;
}
