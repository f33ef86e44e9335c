#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "gitkit/json_io.hpp"
#include "gitkit/symmetric_space.hpp"
#include "gitkit/toral.hpp"
#include "gitkit/verify.hpp"

namespace gk = gitkit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitUndetermined = 3;
constexpr int kExitNumerical = 4;

int exit_code_for(const gk::Error& e) {
  switch (e.code()) {
    case gk::ErrorCode::ParseError:
    case gk::ErrorCode::ValidationError:
      return kExitParse;
    default:
      return kExitNumerical;
  }
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Globals {
  unsigned long long seed = 1;
  std::optional<double> hbar;
  double tol_grad = 1e-10;
  double tol_class = 1e-6;
  std::string format = "json";
  std::string output;
};

gk::Instance load(const std::string& path, const Globals& g) {
  gk::Instance inst = gk::load_instance(path);
  if (g.hbar) inst.x = gk::ProjectivePoint::make(inst.x.v, *g.hbar);
  return inst;
}

std::ostream& out_stream(const Globals& g, std::ofstream& file) {
  if (g.output.empty()) return std::cout;
  file.open(g.output);
  if (!file) throw gk::Error(gk::ErrorCode::ValidationError, "cannot open " + g.output);
  return file;
}

gk::RVec parse_coords(const std::string& text, int dim) {
  gk::Json j;
  try {
    j = gk::Json::parse(text);
  } catch (const std::exception& e) {
    throw gk::Error(gk::ErrorCode::ParseError, std::string("bad coordinate array: ") + e.what());
  }
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw gk::Error(gk::ErrorCode::ValidationError, "coordinate array must have length " +
                                                        std::to_string(dim));
  gk::RVec c(dim);
  for (int a = 0; a < dim; ++a) c(a) = j[a].get<double>();
  return c;
}

int cmd_classify(const std::vector<std::string>& paths, const Globals& g) {
  gk::StabilityOptions opts;
  opts.tol_grad = g.tol_grad;
  opts.tol_class = g.tol_class;
  int n = static_cast<int>(paths.size());
  std::vector<std::string> lines(n);
  std::vector<int> codes(n, kExitOk);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int i = 0; i < n; ++i) {
    try {
      gk::Instance inst = load(paths[i], g);
      gk::StabilityVerdict v = gk::classify(inst.x, inst.group, opts);
      lines[i] = gk::verdict_to_json(v, inst.group).dump();
      if (v.klass == gk::StabilityClass::undetermined) codes[i] = kExitUndetermined;
    } catch (const gk::Error& e) {
      lines[i] = "";
      codes[i] = exit_code_for(e);
      std::string msg = paths[i] + ": " + e.what() + "\n";
#ifdef _OPENMP
#pragma omp critical
#endif
      std::cerr << msg;
    }
  }
  std::ofstream file;
  std::ostream& os = out_stream(g, file);
  for (const std::string& line : lines)
    if (!line.empty()) os << line << "\n";
  int worst = kExitOk;
  for (int c : codes) {
    if (c == kExitParse) return kExitParse;
    if (c == kExitNumerical) worst = kExitNumerical;
    if (c == kExitUndetermined && worst == kExitOk) worst = kExitUndetermined;
  }
  return worst;
}

int cmd_flow(const std::string& path, const Globals& g, double t_max, double fixed_step,
             long dump_every, const std::string& csv_path) {
  if (t_max <= 0.0) throw gk::Error(gk::ErrorCode::ValidationError, "--t-max must be positive");
  if (dump_every < 1)
    throw gk::Error(gk::ErrorCode::ValidationError, "--dump-every must be >= 1");
  gk::Instance inst = load(path, g);
  gk::FlowOptions fo;
  fo.tol_grad = g.tol_grad;
  fo.t_max = t_max;
  fo.fixed_step = fixed_step;
  gk::FlowTrajectory traj = gk::integrate_flow(inst.x, inst.group, fo);

  std::ofstream csv(csv_path);
  if (!csv) throw gk::Error(gk::ErrorCode::ValidationError, "cannot open " + csv_path);
  csv << "t";
  for (int k = 0; k < inst.group.n; ++k) csv << ",v" << k << "_re,v" << k << "_im";
  csv << ",mu_norm,grad_norm";
  for (int a = 0; a < inst.group.dim(); ++a) csv << ",xi_" << a;
  csv << "\n";
  for (size_t i = 0; i < traj.times.size(); i += dump_every) {
    csv << fmt17(traj.times[i]);
    for (int k = 0; k < inst.group.n; ++k)
      csv << "," << fmt17(traj.points[i].v(k).real()) << "," << fmt17(traj.points[i].v(k).imag());
    csv << "," << fmt17(traj.mu_norms[i]) << "," << fmt17(traj.grad_norms[i]);
    for (int a = 0; a < inst.group.dim(); ++a) csv << "," << fmt17(traj.xi_path[i].coords(a));
    csv << "\n";
  }

  gk::Json summary;
  summary["converged"] = traj.converged;
  summary["t_end"] = traj.times.back();
  summary["mu_final"] = traj.mu_norms.back();
  summary["grad_final"] = traj.grad_norms.back();
  summary["max_conjugacy_drift"] = traj.max_conjugacy_drift;
  double m_est = traj.mu_norms.back();
  summary["m"] = m_est;
  if (m_est > g.tol_class) {
    try {
      gk::DominantWeight dw = gk::dominant_weight(traj, inst.group);
      gk::Json coords = gk::Json::array();
      for (int a = 0; a < dw.xi_inf.coords.size(); ++a) coords.push_back(dw.xi_inf.coords(a));
      summary["xi_inf"] = coords;
      summary["xi_inf_norm"] = dw.xi_inf.norm();
    } catch (const gk::Error& e) {
      summary["xi_inf_error"] = e.what();
    }
  }
  try {
    gk::FlowTrajectory::RateFit fit = gk::lojasiewicz_fit(traj);
    summary["lojasiewicz"] = {{"epsilon", fit.epsilon},
                              {"c", fit.c},
                              {"T", fit.T},
                              {"residual", fit.residual},
                              {"super_polynomial", fit.super_polynomial},
                              {"degenerate", fit.degenerate}};
  } catch (const gk::Error&) {
    // too few samples for a fit; omit
  }
  std::ofstream file;
  out_stream(g, file) << summary.dump(2) << "\n";
  return kExitOk;
}

int cmd_weight(const std::string& path, const Globals& g, const std::string& xi_text,
               const std::string& eta_text, const std::string& mode) {
  gk::Instance inst = load(path, g);
  gk::AlgebraVector re = inst.group.from_coords(parse_coords(xi_text, inst.group.dim()));
  gk::AlgebraVector im = eta_text.empty()
                             ? inst.group.zero()
                             : inst.group.from_coords(parse_coords(eta_text, inst.group.dim()));
  gk::WeightMode wm = gk::WeightMode::exact;
  if (mode == "simulated")
    wm = gk::WeightMode::simulated;
  else if (mode != "exact")
    throw gk::Error(gk::ErrorCode::ValidationError, "--mode must be exact or simulated");
  gk::WeightReport rep = gk::mu_weight(inst.x, gk::ComplexAlgebraVector{re, im}, wm);
  gk::Json j;
  j["weight"] = rep.weight;
  j["lambda_max"] = rep.lambda_max;
  j["mode"] = mode;
  std::ofstream file;
  out_stream(g, file) << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_polytope(const std::string& path, const Globals& g) {
  gk::Instance inst = load(path, g);
  gk::TorusVerdict v = gk::torus_classify(inst.group, inst.x);
  std::ofstream file;
  out_stream(g, file) << gk::polytope_to_json(v).dump(2) << "\n";
  return kExitOk;
}

int cmd_kempf(const std::string& path, const Globals& g, int starts) {
  gk::Instance inst = load(path, g);
  gk::StabilityOptions opts;
  opts.tol_grad = g.tol_grad;
  opts.tol_class = g.tol_class;
  gk::KempfReport rep = gk::kempf_uniqueness_audit(inst.x, inst.group, starts, g.seed, opts);
  gk::Json j;
  j["starts"] = rep.starts;
  j["max_pairwise"] = rep.max_pairwise;
  gk::Json coords = gk::Json::array();
  for (int a = 0; a < rep.xi0.coords.size(); ++a) coords.push_back(rep.xi0.coords(a));
  j["xi0"] = coords;
  std::ofstream file;
  out_stream(g, file) << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_constants(const Globals& g, int alpha_n, int beta_n) {
  if ((alpha_n > 0) == (beta_n > 0))
    throw gk::Error(gk::ErrorCode::ValidationError, "pass exactly one of --alpha or --beta");
  gk::RVec vals =
      (alpha_n > 0) ? gk::alpha_constants(alpha_n).values : gk::beta_constants(beta_n).values;
  std::ofstream file;
  std::ostream& os = out_stream(g, file);
  os << "[";
  for (int k = 0; k < vals.size(); ++k) os << (k ? ", " : "") << fmt17(vals(k));
  os << "]\n";
  return kExitOk;
}

int cmd_geom(const std::string& op, const std::string& path, const Globals& g) {
  std::ifstream in(path);
  if (!in) throw gk::Error(gk::ErrorCode::ParseError, "cannot open " + path);
  gk::Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw gk::Error(gk::ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("group") || !j.contains("elements"))
    throw gk::Error(gk::ErrorCode::ParseError, "geom input needs group and elements");
  gk::CompactGroup group = gk::build_group(gk::parse_group_spec(j["group"]));
  std::vector<gk::GroupPoint> elems;
  for (const gk::Json& je : j["elements"]) {
    gk::Mat m(group.n, group.n);
    for (int r = 0; r < group.n; ++r)
      for (int c = 0; c < group.n; ++c)
        m(r, c) = gk::Cplx(je[r][c][0].get<double>(), je[r][c][1].get<double>());
    elems.push_back(gk::polar_decompose(group, m));
  }
  auto coset = [&](const gk::GroupPoint& p) { return gk::canonical_point(group, p); };
  auto eta_json = [](const gk::RVec& c) {
    gk::Json a = gk::Json::array();
    for (int k = 0; k < c.size(); ++k) a.push_back(c(k));
    return a;
  };
  gk::Json outj;
  if (op == "distance") {
    if (elems.size() != 2)
      throw gk::Error(gk::ErrorCode::ValidationError, "distance needs exactly 2 elements");
    outj["distance"] = gk::coset_distance(group, coset(elems[0]), coset(elems[1]));
  } else if (op == "midpoint") {
    if (elems.size() != 2)
      throw gk::Error(gk::ErrorCode::ValidationError, "midpoint needs exactly 2 elements");
    gk::CosetPoint mid = gk::geodesic_point(group, coset(elems[0]), coset(elems[1]), 0.5);
    outj["eta"] = eta_json(mid.eta.coords);
  } else if (op == "circumcenter") {
    if (elems.empty())
      throw gk::Error(gk::ErrorCode::ValidationError, "circumcenter needs elements");
    std::vector<gk::CosetPoint> pts;
    for (const gk::GroupPoint& p : elems) pts.push_back(coset(p));
    gk::Circumcenter cc = gk::circumcenter(group, pts, g.seed);
    outj["eta"] = eta_json(cc.center.eta.coords);
    outj["radius"] = cc.radius;
    outj["certified"] = cc.certified;
  } else {
    throw gk::Error(gk::ErrorCode::ValidationError, "geom op must be distance|midpoint|circumcenter");
  }
  std::ofstream file;
  out_stream(g, file) << outj.dump(2) << "\n";
  return kExitOk;
}

int cmd_verify(const Globals& g, long samples, bool acceptance, bool serial) {
  gk::VerifyOptions vo;
  vo.seed = g.seed;
  vo.samples = samples;
  vo.mode = serial ? gk::AuditMode::serial : gk::AuditMode::parallel;
  std::vector<gk::CheckResult> results =
      acceptance ? gk::run_acceptance(vo) : gk::run_invariants(vo);
  std::ofstream file;
  std::ostream& os = out_stream(g, file);
  int failures = 0;
  if (g.format == "json") {
    gk::Json arr = gk::Json::array();
    for (const gk::CheckResult& r : results) {
      arr.push_back({{"name", r.name}, {"pass", r.pass}, {"worst", r.worst}, {"detail", r.detail}});
      if (!r.pass) ++failures;
    }
    os << arr.dump(2) << "\n";
  } else {
    for (const gk::CheckResult& r : results) {
      os << (r.pass ? "PASS" : "FAIL") << "," << r.name << "," << fmt17(r.worst) << ","
         << r.detail << "\n";
      if (!r.pass) ++failures;
    }
  }
  return failures == 0 ? kExitOk : 1;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* t = std::getenv("GITKIT_THREADS")) {
#ifdef _OPENMP
    int nt = std::atoi(t);
    if (nt > 0) omp_set_num_threads(nt);
#else
    (void)t;
#endif
  }

  CLI::App app{"Moment-map stability toolkit on complex projective space"};
  app.require_subcommand(1);
  app.fallthrough();  // allow global flags after the subcommand
  Globals g;
  app.add_option("--seed", g.seed, "Sampling seed (fully determines all randomness)");
  app.add_option("--hbar", g.hbar, "Override instance hbar");
  app.add_option("--tol-grad", g.tol_grad, "Flow convergence tolerance on |grad f|");
  app.add_option("--tol-class", g.tol_class, "Classification threshold on m");
  app.add_option("--format", g.format, "Output format: json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--output", g.output, "Write report to this path instead of stdout");

  std::vector<std::string> classify_paths;
  CLI::App* classify = app.add_subcommand("classify", "Classify instances");
  classify->add_option("instances", classify_paths, "Instance JSON files")->required();

  std::string flow_path, flow_csv = "trajectory.csv";
  double flow_tmax = 1e4, flow_fixed = 0.0;
  long flow_dump = 1;
  CLI::App* flow = app.add_subcommand("flow", "Integrate the moment flow and dump a trajectory");
  flow->add_option("instance", flow_path, "Instance JSON file")->required();
  flow->add_option("--t-max", flow_tmax, "Integration horizon");
  flow->add_option("--fixed-step", flow_fixed, "Fixed step size (0 = adaptive)");
  flow->add_option("--dump-every", flow_dump, "Keep every k-th stored sample in the CSV");
  flow->add_option("--csv", flow_csv, "Trajectory CSV path");

  std::string weight_path, weight_xi, weight_eta, weight_mode = "exact";
  CLI::App* weight = app.add_subcommand("weight", "Evaluate the mu-weight along a direction");
  weight->add_option("instance", weight_path)->required();
  weight->add_option("--xi", weight_xi, "Real part, JSON array of basis coordinates")->required();
  weight->add_option("--eta", weight_eta, "Imaginary part coordinates (default 0)");
  weight->add_option("--mode", weight_mode, "exact|simulated");

  std::string poly_path;
  CLI::App* poly = app.add_subcommand("polytope", "Moment polytope of a torus instance");
  poly->add_option("instance", poly_path)->required();

  std::string kempf_path;
  int kempf_starts = 5;
  CLI::App* kempf = app.add_subcommand("kempf", "Audit uniqueness of the dominant direction");
  kempf->add_option("instance", kempf_path)->required();
  kempf->add_option("--starts", kempf_starts, "Number of orbit representatives");

  int alpha_n = 0, beta_n = 0;
  CLI::App* constants = app.add_subcommand("constants", "Emit the exact interpolation constants");
  constants->add_option("--alpha", alpha_n, "alpha constants for this N (power of two)");
  constants->add_option("--beta", beta_n, "beta constants for this N");

  std::string geom_op, geom_path;
  CLI::App* geom = app.add_subcommand("geom", "Symmetric-space geometry utilities");
  geom->add_option("op", geom_op, "distance|midpoint|circumcenter")->required();
  geom->add_option("input", geom_path, "JSON with group and elements")->required();

  long verify_samples = 500;
  bool verify_acceptance = false, verify_serial = false;
  CLI::App* verify = app.add_subcommand("verify", "Run the seeded property suite");
  verify->add_option("--samples", verify_samples, "Baseline per-invariant sample count");
  verify->add_flag("--acceptance", verify_acceptance, "Run the acceptance criteria instead");
  verify->add_flag("--serial", verify_serial, "Force the serial audit kernels");

  CLI11_PARSE(app, argc, argv);

  try {
    if (classify->parsed()) return cmd_classify(classify_paths, g);
    if (flow->parsed()) return cmd_flow(flow_path, g, flow_tmax, flow_fixed, flow_dump, flow_csv);
    if (weight->parsed()) return cmd_weight(weight_path, g, weight_xi, weight_eta, weight_mode);
    if (poly->parsed()) return cmd_polytope(poly_path, g);
    if (kempf->parsed()) return cmd_kempf(kempf_path, g, kempf_starts);
    if (constants->parsed()) return cmd_constants(g, alpha_n, beta_n);
    if (geom->parsed()) return cmd_geom(geom_op, geom_path, g);
    if (verify->parsed()) return cmd_verify(g, verify_samples, verify_acceptance, verify_serial);
  } catch (const gk::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}
