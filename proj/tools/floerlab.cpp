// floerlab command-line driver: chart, spectrum, flow and verify subcommands.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "floerlab/action.hpp"
#include "floerlab/chart.hpp"
#include "floerlab/error.hpp"
#include "floerlab/fredholm.hpp"
#include "floerlab/loopspace.hpp"
#include "floerlab/symplectic.hpp"
#include "floerlab/verify.hpp"

using namespace floerlab;
using json = nlohmann::ordered_json;

namespace {

struct RunConfig {
  std::string chart = "darboux";
  std::string hamiltonian;
  std::string loop;
  std::string path = "tanh";
  std::size_t M = 32;
  double tol = 0.0;  // 0: command default
  std::uint64_t seed = 1;
  std::string out;
  std::string csv;
  std::vector<std::string> only;
  std::vector<std::string> probes;
  std::size_t samples = 64;
  std::string fault;
};

json to_json(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json to_json(std::span<const double> v) {
  json a = json::array();
  for (double x : v) a.push_back(to_json(x));
  return a;
}

json to_json(const Matrix& m) {
  json a = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(to_json(m.row(i)));
  return a;
}

void emit(const json& doc, const RunConfig& cfg) {
  const std::string text = doc.dump(2) + "\n";
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out);
  if (!f) throw Error(ErrorCode::InvalidInput, "cannot write " + cfg.out);
  f << text;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::InvalidInput, "cannot write " + path);
  f << text;
}

Vector parse_point(const std::string& text) {
  Vector x;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      x.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidInput, "bad probe coordinate '" + item + "'");
    }
  }
  return x;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::InvalidInput, "cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

/// JSON file, or "quadratic:<eps>" for eps |x|^2.
HamiltonianPtr load_hamiltonian(const std::string& source, std::size_t dim) {
  if (source.empty()) return nullptr;
  const std::string prefix = "quadratic:";
  if (source.rfind(prefix, 0) == 0) return make_quadratic_hamiltonian(dim, std::stod(source.substr(prefix.size())));
  return parse_hamiltonian(read_file(source), dim);
}

json residuals_json(const CertifyReport& rep) {
  json a = json::array();
  for (const auto& r : rep.residuals)
    a.push_back({{"name", r.name}, {"value", to_json(r.value)}, {"limit", r.limit},
                 {"kind", r.positivity ? "positive" : "bound"}, {"pass", r.pass}});
  return a;
}

int cmd_chart(const RunConfig& cfg) {
  const ChartPtr chart = load_chart(cfg.chart);
  std::vector<Vector> probes;
  for (const auto& p : cfg.probes) probes.push_back(parse_point(p));
  if (probes.empty()) probes = chart->probes;
  if (probes.empty()) probes.push_back(Vector(chart->dim(), 0.0));
  const double tol = cfg.tol > 0.0 ? cfg.tol : 1e-10;

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal;
  json out = {{"command", "chart"}, {"chart", chart->name()}, {"dim", chart->dim()}, {"seed", cfg.seed}};
  json list = json::array();
  bool passed = true;
  for (const auto& x : probes) {
    if (x.size() != chart->dim())
      throw Error(ErrorCode::InvalidInput, "probe has " + std::to_string(x.size()) + " coordinates, chart has " +
                                               std::to_string(chart->dim()));
    const SymplecticPointData pd = symplectic_point(omega_at(*chart, x), x);
    const CertifyReport rep = certify_point(pd, tol, cfg.seed);
    const Tensor3 l = l_tensor_at(*chart, x);
    double cyc = 0.0, sch = 0.0, lmax = 0.0;
    for (double v : l.v) lmax = std::max(lmax, std::abs(v));
    for (int trial = 0; trial < 32; ++trial) {
      Vector a(chart->dim()), b(chart->dim()), c(chart->dim());
      for (auto* v : {&a, &b, &c})
        for (double& e : *v) e = normal(rng);
      const auto r = l_identity_residuals(l, a, b, c);
      cyc = std::max(cyc, r.cyclic);
      sch = std::max(sch, r.schwarz);
    }
    passed = passed && rep.passed;
    list.push_back({{"x", to_json(x)},
                    {"omega", to_json(pd.omega)},
                    {"B", to_json(pd.b)},
                    {"sqrtNegB2", to_json(pd.sqrtNegB2)},
                    {"Jb", to_json(pd.jb)},
                    {"Gb", to_json(pd.gb)},
                    {"detB", to_json(determinant(pd.b))},
                    {"detJb", to_json(determinant(pd.jb))},
                    {"lTensor", {{"maxAbs", lmax}, {"cyclicResidual", cyc}, {"schwarzResidual", sch}}},
                    {"certify", {{"passed", rep.passed}, {"residuals", residuals_json(rep)}}}});
  }
  out["probes"] = list;
  out["passed"] = passed;
  emit(out, cfg);
  return 0;
}

Loop spectrum_loop(const RunConfig& cfg, const Chart& chart) {
  if (!cfg.loop.empty()) {
    Loop u = read_loop_csv(cfg.loop);
    if (u.dim() != chart.dim()) throw Error(ErrorCode::InvalidInput, "loop dimension does not match the chart");
    return u;
  }
  const Vector c = chart.probes.empty() ? Vector(chart.dim(), 0.0) : chart.probes.front();
  return Loop::constant(cfg.M, c);
}

int cmd_spectrum(const RunConfig& cfg) {
  const ChartPtr chart = load_chart(cfg.chart);
  const HamiltonianPtr h = load_hamiltonian(cfg.hamiltonian, chart->dim());
  const Loop u = spectrum_loop(cfg, *chart);
  const double tol = cfg.tol > 0.0 ? cfg.tol : 1e-8;
  const OperatorMatrix op = assemble_hessian(*chart, h.get(), u);
  const SpectrumReport sp = hessian_spectrum(op, tol);
  json out = {{"command", "spectrum"},
              {"chart", chart->name()},
              {"hamiltonian", cfg.hamiltonian.empty() ? json(nullptr) : json(cfg.hamiltonian)},
              {"n", u.n},
              {"M", u.M},
              {"seed", cfg.seed},
              {"kernelTol", tol},
              {"kernelDim", sp.kernelDim},
              {"asymmetryDefect", sp.asymmetryDefect},
              {"fullAsymmetryDefect", sp.fullAsymmetryDefect},
              {"action", action_value(*chart, h.get(), u)},
              {"eigenvalues", to_json(sp.eigenvalues)}};
  emit(out, cfg);
  if (!cfg.csv.empty()) {
    std::ostringstream s;
    s.precision(17);
    s << "index,eigenvalue\n";
    for (std::size_t i = 0; i < sp.eigenvalues.size(); ++i) s << i << ',' << sp.eigenvalues[i] << '\n';
    write_text(cfg.csv, s.str());
  }
  return 0;
}

OperatorPath flow_path(const RunConfig& cfg, std::string& description) {
  const double sRange = 5.0;
  if (cfg.path == "tanh") {
    description = "tanh(s) in one coordinate, fixed positive block";
    return tanh_path();
  }
  if (cfg.path == "constant") {
    description = "constant nondegenerate diagonal operator";
    return constant_path(Matrix::diagonal(Vector{1.0, -2.0, 3.0, -4.0}), sRange);
  }
  if (cfg.path == "degenerate") {
    description = "constant operator with a zero eigenvalue";
    return constant_path(Matrix::diagonal(Vector{0.0, 1.0, 2.0}), sRange);
  }
  if (cfg.path == "darboux-shift") {
    // Darboux chart, constant loop, h_s = eps(s) |x|^2 with eps from -1 to 1:
    // the eigenvalues 2 pi k - 2 eps(s) move down and the k = 0 pair crosses.
    description = "darboux constant loop, h_s = eps(s)|x|^2, eps from -1 to 1";
    const ChartPtr chart = make_darboux_chart(1);
    const Loop u = Loop::constant(cfg.M, Vector{0.0, 0.0});
    const Vector grid{-sRange, sRange};
    const ConnectingPath path = ConnectingPath::from_samples(grid, {u, u});
    return hessian_operator_path(chart, path, [sRange](double s) {
      return make_quadratic_hamiltonian(2, std::tanh(s) / std::tanh(sRange));
    });
  }
  const ChartPtr chart = load_chart(cfg.chart);
  const ConnectingPath path = read_connecting_path(cfg.path);
  description = "loops from " + cfg.path + " in chart " + chart->name();
  HamiltonianFamily family;
  if (!cfg.hamiltonian.empty()) {
    const HamiltonianPtr h = load_hamiltonian(cfg.hamiltonian, chart->dim());
    family = [h](double) { return h; };
  }
  return hessian_operator_path(chart, path, family);
}

int cmd_flow(const RunConfig& cfg) {
  std::string description;
  const OperatorPath path = flow_path(cfg, description);
  FlowOptions opts;
  opts.samples = cfg.samples;
  if (cfg.tol > 0.0) opts.crossTol = cfg.tol;
  const SpectralFlowReport rep = spectral_flow(path, opts, 0);
  json crossings = json::array();
  for (const auto& c : rep.crossings) crossings.push_back({{"s", c.s}, {"branch", c.branch}, {"sign", c.sign}});
  json out = {{"command", "flow"},
              {"path", cfg.path},
              {"description", description},
              {"seed", cfg.seed},
              {"crossTol", opts.crossTol},
              {"samples", opts.samples},
              {"flow", rep.flow},
              {"crossings", crossings},
              {"endpointGaps", {rep.gapMinus, rep.gapPlus}},
              {"maxAsymmetryDefect", rep.maxDefect},
              {"accepted", rep.accepted},
              {"evaluations", rep.evaluations}};
  try {
    const IndexCertificate cert = index_of_D(path, rep, opts);
    out["index"] = {{"value", cert.index},
                    {"flowLevel0", cert.flowLevel0},
                    {"flowLevel1", cert.flowLevel1},
                    {"convention", cert.convention}};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::LevelMismatch) throw;
    out["index"] = {{"error", e.what()}};
  }
  emit(out, cfg);
  if (!cfg.csv.empty()) write_text(cfg.csv, branch_trace_csv(rep));
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  if (!cfg.fault.empty()) {
    if (cfg.fault != "sign-flip") throw Error(ErrorCode::InvalidInput, "unknown fault '" + cfg.fault + "'");
    set_sign_flip_fault(true);
  }
  std::vector<std::string> only;
  for (const auto& entry : cfg.only) {
    std::stringstream ss(entry);
    std::string name;
    while (std::getline(ss, name, ','))
      if (!name.empty()) only.push_back(name);
  }
  const VerifyReport rep = run_verify(cfg.seed, only);
  json suites = json::array();
  for (const auto& s : rep.suites) {
    json checks = json::array();
    for (const auto& c : s.checks)
      checks.push_back({{"name", c.name}, {"value", to_json(c.value)}, {"limit", c.limit}, {"pass", c.pass}});
    json entry = {{"name", s.name}, {"passed", s.passed}, {"checks", checks}};
    if (!s.error.empty()) entry["error"] = s.error;
    suites.push_back(entry);
  }
  json out = {{"command", "verify"}, {"seed", rep.seed}, {"passed", rep.passed}, {"suites", suites}};
  if (!cfg.fault.empty()) out["injectedFault"] = cfg.fault;
  emit(out, cfg);
  return rep.passed ? 0 : 1;
}

int exit_code_for(const std::string& command, ErrorCode code) {
  if (command == "chart") {
    if (code == ErrorCode::SchemaError || code == ErrorCode::OddDimension) return 2;
    if (code == ErrorCode::Degenerate || code == ErrorCode::NondegeneracyProbeFailed ||
        code == ErrorCode::HeronFailure)
      return 3;
  }
  if (command == "spectrum" && (code == ErrorCode::OutOfDomain || code == ErrorCode::Degenerate)) return 3;
  if (command == "flow" && code == ErrorCode::DegenerateEndpoint) return 4;
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"floerlab: loop-space Hessians, spectral flow and verification"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "seed for randomized checks (echoed in the report)");
    sub->add_option("--out", cfg.out, "write the JSON report here instead of stdout");
    sub->add_option("--tol", cfg.tol, "command tolerance")->check(CLI::PositiveNumber);
  };

  auto* chart = app.add_subcommand("chart", "pointwise symplectic data and certified invariants");
  chart->add_option("--chart", cfg.chart, "builtin name (darboux, darbouxN, cubic, exp) or JSON path");
  chart->add_option("--probe", cfg.probes, "probe point as comma-separated coordinates (repeatable)");
  add_common(chart);

  auto* spectrum = app.add_subcommand("spectrum", "Hessian spectrum of the action at a loop");
  spectrum->add_option("--chart", cfg.chart, "builtin name or JSON path");
  spectrum->add_option("--hamiltonian", cfg.hamiltonian, "JSON path or quadratic:<eps>");
  spectrum->add_option("--loop", cfg.loop, "loop CSV (default: constant loop at the first probe)");
  spectrum->add_option("-M", cfg.M, "samples for the default constant loop")
      ->check(CLI::Range(std::size_t{8}, std::size_t{1} << 14));
  spectrum->add_option("--csv", cfg.csv, "also write the spectrum as CSV");
  add_common(spectrum);

  auto* flow = app.add_subcommand("flow", "spectral flow and index along a path");
  flow->add_option("--path", cfg.path, "directory with path.json or builtin (tanh, constant, darboux-shift, degenerate)");
  flow->add_option("--chart", cfg.chart, "chart for a path directory");
  flow->add_option("--hamiltonian", cfg.hamiltonian, "Hamiltonian for a path directory");
  flow->add_option("-M", cfg.M, "samples for builtin loop paths")->check(CLI::Range(std::size_t{8}, std::size_t{1} << 12));
  flow->add_option("--samples", cfg.samples, "s-samples before refinement")->check(CLI::Range(2, 1 << 16));
  flow->add_option("--csv", cfg.csv, "write the eigenvalue branch trace (s, branch, lambda) here");
  add_common(flow);

  auto* verify = app.add_subcommand("verify", "run the invariant suites");
  verify->add_option("--only", cfg.only, "comma-separated suites: heron, symplectic, chart, loopspace, action, fredholm");
  verify->add_option("--inject-fault", cfg.fault)->group("");
  add_common(verify);

  CLI11_PARSE(app, argc, argv);

  for (auto* sub : {chart, spectrum, flow}) {
    if (!sub->parsed()) continue;
    if (cfg.M % 2 != 0) {
      std::cerr << "error: -M must be even\n";
      return 1;
    }
  }

  std::string command = app.get_subcommands().front()->get_name();
  try {
    if (command == "chart") return cmd_chart(cfg);
    if (command == "spectrum") return cmd_spectrum(cfg);
    if (command == "flow") return cmd_flow(cfg);
    return cmd_verify(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(command, e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
