#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kwlab/critical.hpp"
#include "kwlab/fixtures.hpp"
#include "kwlab/graph_io.hpp"
#include "kwlab/oracle.hpp"
#include "kwlab/sholo.hpp"
#include "suites.hpp"

namespace kwlab::cli {

namespace {

using json = nlohmann::json;

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

json error_json(std::string_view kind, std::string_view message) {
  return {{"error", {{"kind", kind}, {"message", message}}}};
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

GraphDocument load(const std::string& path, std::istream& in) {
  if (path != "-") return read_graph_document(path);
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_graph_document(text);
}

std::string fixture_name(const std::string& path, const EmbeddedGraph& g) {
  return (path == "-" ? std::string("stdin") : path) + ": " + describe(g);
}

// Couplings from the file, or J = atanh(x) so that beta = 1 reproduces the file's weights.
std::vector<double> couplings_of(const GraphDocument& doc) {
  if (doc.couplings) return *doc.couplings;
  std::vector<double> J;
  for (double x : doc.graph.weights().xs()) {
    if (x >= 1.0) throw ValidationError("x = 1 has no finite coupling");
    J.push_back(std::atanh(x));
  }
  return J;
}

void write_csv_row(std::ostream& os, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) os << ',';
    os << v;
    first = false;
  }
  os << '\n';
}

std::ofstream open_csv(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ValidationError("cannot write " + path);
  os << std::setprecision(17);
  return os;
}

// ------------------------------------------------------------------ gen

struct GenArgs {
  std::string kind;
  int size = 2;
  std::vector<double> x, theta, J;
  std::optional<double> beta;
};

int weight_classes(const std::string& kind) {
  if (kind == "triangle" || kind == "honeycomb-torus") return 3;
  if (kind == "square-torus" || kind == "rect-torus") return 2;
  throw ValidationError("unknown fixture '" + kind + "'");
}

std::vector<double> broadcast(std::vector<double> v, int classes, const char* what) {
  if (v.size() == 1) v.assign(classes, v[0]);
  if (static_cast<int>(v.size()) != classes) {
    throw ValidationError(std::string(what) + " takes 1 or " + std::to_string(classes) + " values");
  }
  return v;
}

json run_gen(const GenArgs& a) {
  const int classes = weight_classes(a.kind);
  const int given = !a.x.empty() + !a.theta.empty() + !a.J.empty();
  if (given > 1) throw ValidationError("give only one of --x, --theta, --J");
  if (!a.J.empty() != a.beta.has_value()) throw ValidationError("--J and --beta go together");

  std::vector<double> x;
  std::vector<double> J;
  if (!a.x.empty()) {
    x = broadcast(a.x, classes, "--x");
  } else if (!a.theta.empty()) {
    for (double t : broadcast(a.theta, classes, "--theta")) x.push_back(std::tan(t / 2));
  } else if (!a.J.empty()) {
    J = broadcast(a.J, classes, "--J");
    for (double j : J) {
      if (j < 0.0) throw ValidationError("couplings must be nonnegative");
      x.push_back(std::tanh(*a.beta * j));
    }
  } else if (a.kind == "triangle") {
    x.assign(3, 0.5);
  } else if (a.kind == "honeycomb-torus") {
    x.assign(3, 1.0 / std::sqrt(3.0));
  } else {
    x.assign(2, fixtures::kSquareCritical);
  }
  for (double v : x) {
    if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("edge weights must lie in [0, 1]");
  }

  GraphDocument doc{[&] {
    if (a.kind == "triangle") return fixtures::triangle(x);
    if (a.kind == "honeycomb-torus") return fixtures::honeycomb_torus(x);
    if (a.kind == "rect-torus") return fixtures::rect_torus(x[0], x[1]);
    return fixtures::square_torus(a.size, a.size, x[0], x[1]);
  }(), std::nullopt, std::nullopt};
  if (!J.empty()) {
    // Square lattices alternate horizontal and vertical edges; the others list one class per edge.
    std::vector<double> per_edge;
    for (int k = 0; k < doc.graph.num_edges(); ++k) per_edge.push_back(J[classes == 2 ? k % 2 : k]);
    doc.couplings = std::move(per_edge);
    doc.beta = a.beta;
  }
  return json::parse(graph_to_json(doc));
}

// ------------------------------------------------------------------ verify

int run_verify(const std::string& suite, const GraphDocument& doc, const std::string& path, const SuiteOptions& base,
               std::ostream& out) {
  SuiteOptions opt = base;
  opt.fixture = fixture_name(path, doc.graph);
  if (suite != "all") {
    const VerificationReport r = run_suite(suite, doc.graph, opt);
    emit(out, to_json(r));
    return r.pass() ? kOk : kCheckFailed;
  }
  json reports = json::array();
  json skipped = json::array();
  bool pass = true;
  for (const std::string& name : suite_names()) {
    try {
      const VerificationReport r = run_suite(name, doc.graph, opt);
      pass = pass && r.pass();
      reports.push_back(to_json(r));
    } catch (const SizeGuardError& e) {
      skipped.push_back({{"suite", name}, {"reason", e.what()}});
    }
  }
  emit(out, {{"suite", "all"}, {"fixture", opt.fixture}, {"seed", opt.seed}, {"draws", opt.draws},
             {"pass", pass}, {"reports", reports}, {"skipped", skipped}});
  return pass ? kOk : kCheckFailed;
}

// ------------------------------------------------------------------ partition functions

json run_z_ising(const GraphDocument& doc, std::optional<double> beta) {
  const std::vector<double> J = couplings_of(doc);
  const double b = beta ? *beta : doc.beta.value_or(1.0);
  const oracle::IsingValues v = oracle::ising_Z(doc.graph, J, b);
  const double gap = std::max(std::abs(v.spins - v.high_temperature), std::abs(v.spins - v.kac_ward)) /
                     std::abs(v.spins);
  return {{"beta", b}, {"spins", v.spins}, {"high_temperature", v.high_temperature},
          {"kac_ward", v.kac_ward}, {"relative_gap", gap}};
}

json run_z_dimer(const GraphDocument& doc) {
  const oracle::DimerValues v = oracle::dimer_Z(CGraph(doc.graph));
  return {{"matchings", v.matchings},
          {"determinant_combination", v.determinant_combination},
          {"relative_gap", std::abs(v.matchings - v.determinant_combination) / std::abs(v.matchings)}};
}

// ------------------------------------------------------------------ observables

Point midpoint(const EmbeddedGraph& g, int edge) {
  const Point p = g.vertex(g.origin(2 * edge)).pos;
  const Point d = g.displacement(2 * edge);
  return {p.x + d.x / 2, p.y + d.y / 2};
}

json run_observable(const EmbeddedGraph& g, int e0, const std::string& backend, const std::string& csv) {
  if (e0 < 0 || e0 >= g.num_darts()) throw ValidationError("dart id out of range");
  const ObservableBackend b =
      backend == "combinatorial" ? ObservableBackend::combinatorial : ObservableBackend::inverse_column;
  const MidpointFunction F = observable(g, e0, b);
  const auto res = sholo_residuals(g, F);
  double away = 0.0;
  for (int v = 0; v < g.num_vertices(); ++v) {
    if (v != g.origin(e0) && v != g.terminus(e0)) away = std::max(away, res[v]);
  }
  json values = json::array();
  for (cplx z : F.value) values.push_back(complex_json(z));
  if (!csv.empty()) {
    std::ofstream os = open_csv(csv);
    os << "edge,x,y,re,im\n";
    for (int k = 0; k < g.num_edges(); ++k) {
      const Point m = midpoint(g, k);
      os << k << ',';
      write_csv_row(os, {m.x, m.y, F(k).real(), F(k).imag()});
    }
  }
  return {{"dart", e0}, {"backend", backend}, {"values", values}, {"vertex_residuals", res},
          {"max_residual_away_from_source", away}};
}

json run_spectral(const EmbeddedGraph& g, int n, const std::string& csv) {
  if (g.surface() != SurfaceKind::torus) throw ValidationError("spectral curve needs a torus graph");
  const auto grid = spectral_grid(g, n);
  json samples = json::array();
  double min_abs = std::numeric_limits<double>::infinity();
  for (const SpectralSample& s : grid) {
    samples.push_back({{"phi1", s.phi1}, {"phi2", s.phi2}, {"P", complex_json(s.value)}});
    min_abs = std::min(min_abs, std::abs(s.value));
  }
  if (!csv.empty()) {
    std::ofstream os = open_csv(csv);
    os << "phi1,phi2,re,im\n";
    for (const SpectralSample& s : grid) write_csv_row(os, {s.phi1, s.phi2, s.value.real(), s.value.imag()});
  }
  return {{"grid", n}, {"min_abs", min_abs}, {"samples", samples}};
}

json run_h_function(const EmbeddedGraph& g, const std::vector<std::string>& from) {
  MidpointFunction G;
  std::vector<int> excluded;
  const int outer = outer_face(g);
  if (outer >= 0) excluded.push_back(g.num_vertices() + outer);
  std::string source;
  if (from.size() == 1 && from[0] == "kernel") {
    const auto kernel = kernel_observables(g);
    if (kernel.empty()) throw ValidationError("Kac-Ward kernel has no s-holomorphic element");
    G = kernel.front();
    source = "kernel";
  } else if (from.size() == 2 && from[0] == "observable") {
    int e0 = 0;
    try {
      e0 = std::stoi(from[1]);
    } catch (const std::exception&) {
      throw ValidationError("observable source needs a dart id");
    }
    if (e0 < 0 || e0 >= g.num_darts()) throw ValidationError("dart id out of range");
    G = observable(g, e0, ObservableBackend::inverse_column);
    excluded.push_back(g.origin(e0));
    excluded.push_back(g.terminus(e0));
    source = "observable " + from[1];
  } else {
    throw ValidationError("--from takes 'kernel' or 'observable ID'");
  }

  const HFunction H = integrate_square(g, G, excluded);
  const IncrementCheck inc = check_increments(g, G, H);
  const HLaplacian L = laplacian_of_H(g, H);
  double max_primal = -std::numeric_limits<double>::infinity();
  double min_dual = std::numeric_limits<double>::infinity();
  for (double v : L.primal) if (!std::isnan(v)) max_primal = std::max(max_primal, v);
  for (double v : L.dual) if (!std::isnan(v)) min_dual = std::min(min_dual, v);
  json lap = {{"primal", L.primal}, {"dual", L.dual}};
  if (std::isfinite(max_primal)) lap["max_primal"] = max_primal;
  if (std::isfinite(min_dual)) lap["min_dual"] = min_dual;
  return {{"source", source},
          {"values", H.value},
          {"base_point", H.base_point},
          {"closure_residual", H.closure_residual},
          {"periods", H.periods},
          {"max_sholo_residual", H.max_sholo_residual},
          {"increments", {{"primal", inc.primal}, {"dual", inc.dual}}},
          {"laplacian", lap}};
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::istream& in) {
  CLI::App app{"Kac-Ward, Kasteleyn and s-holomorphicity toolkit"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::string graph_path = "-";
  auto add_graph = [&](CLI::App* sub) {
    sub->add_option("-g,--graph", graph_path, "graph JSON file, '-' for stdin")->capture_default_str();
  };

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "emit a fixture graph as JSON");
  gen_cmd->add_option("kind", gen.kind, "triangle | square-torus | rect-torus | honeycomb-torus")->required();
  gen_cmd->add_option("size", gen.size, "square-torus side length")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--x", gen.x, "edge weights, one value or one per edge class");
  gen_cmd->add_option("--theta", gen.theta, "rhombus half-angles");
  gen_cmd->add_option("--J", gen.J, "couplings (needs --beta)");
  gen_cmd->add_option("--beta", gen.beta, "inverse temperature");

  std::string suite;
  SuiteOptions suite_opt;
  auto* verify_cmd = app.add_subcommand("verify", "run a verification suite");
  verify_cmd->add_option("suite", suite)->required()->check(
      CLI::IsMember({"corr", "det", "kw1", "kw2", "inv", "sholo", "dirac", "pf", "all"}));
  add_graph(verify_cmd);
  verify_cmd->add_option("--draws", suite_opt.draws)->check(CLI::NonNegativeNumber)->capture_default_str();
  verify_cmd->add_option("--seed", suite_opt.seed)->capture_default_str();

  std::optional<double> beta;
  auto* ising_cmd = app.add_subcommand("z-ising", "partition function three ways");
  add_graph(ising_cmd);
  ising_cmd->add_option("--beta", beta, "inverse temperature (default: from the file, else 1)");

  auto* dimer_cmd = app.add_subcommand("z-dimer", "dimer partition function on the C graph");
  add_graph(dimer_cmd);

  int dart = 0;
  std::string csv;
  std::string backend = "inverse";
  auto* obs_cmd = app.add_subcommand("observable", "fermionic observable sourced at a dart");
  add_graph(obs_cmd);
  obs_cmd->add_option("--dart", dart)->required();
  obs_cmd->add_option("--csv", csv, "write edge,x,y,re,im rows");
  obs_cmd->add_option("--backend", backend)->check(CLI::IsMember({"inverse", "combinatorial"}))->capture_default_str();

  int grid = 16;
  auto* spec_cmd = app.add_subcommand("spectral", "spectral curve on a character grid");
  add_graph(spec_cmd);
  spec_cmd->add_option("--grid", grid)->required()->check(CLI::PositiveNumber);
  spec_cmd->add_option("--csv", csv, "write phi1,phi2,re,im rows");

  auto* crit_cmd = app.add_subcommand("critical-beta", "critical inverse temperature of a torus graph");
  add_graph(crit_cmd);

  auto* tau_cmd = app.add_subcommand("tau", "modular parameter from the Hessian of P at (1,1)");
  add_graph(tau_cmd);

  auto* fe_cmd = app.add_subcommand("free-energy", "free energy per fundamental domain");
  add_graph(fe_cmd);
  fe_cmd->add_option("--beta", beta)->required();
  fe_cmd->add_option("--grid", grid)->required()->check(CLI::PositiveNumber);

  std::vector<std::string> from;
  auto* h_cmd = app.add_subcommand("h-function", "discrete integral of the square of an s-holomorphic function");
  add_graph(h_cmd);
  h_cmd->add_option("--from", from, "kernel | observable ID")->required()->expected(1, 2);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    emit(out, error_json("usage", e.what()));
    return kInvalid;
  }

  try {
    if (*gen_cmd) {
      emit(out, run_gen(gen));
      return kOk;
    }
    const GraphDocument doc = load(graph_path, in);
    if (*verify_cmd) return run_verify(suite, doc, graph_path, suite_opt, out);
    if (*ising_cmd) emit(out, run_z_ising(doc, beta));
    if (*dimer_cmd) emit(out, run_z_dimer(doc));
    if (*obs_cmd) emit(out, run_observable(doc.graph, dart, backend, csv));
    if (*spec_cmd) emit(out, run_spectral(doc.graph, grid, csv));
    if (*crit_cmd) {
      const std::vector<double> J = couplings_of(doc);
      const CriticalBeta cb = critical_beta(doc.graph, J);
      std::vector<double> x;
      for (double j : J) x.push_back(std::tanh(cb.beta_c * j));
      emit(out, {{"beta_c", cb.beta_c}, {"p11", cb.p11}, {"couplings", J}, {"x_at_beta_c", x},
                 {"evaluations", cb.trace.size()}});
    }
    if (*tau_cmd) {
      const ModularData m = hessian_tau(doc.graph);
      emit(out, {{"tau", complex_json(m.tau)},
                 {"hessian", {{"a_z", m.hessian.a_z}, {"a_w", m.hessian.a_w}, {"b", m.hessian.b}}}});
    }
    if (*fe_cmd) {
      const FreeEnergy f = free_energy(doc.graph, couplings_of(doc), *beta, grid);
      emit(out, {{"beta", *beta}, {"grid", f.n}, {"free_energy", f.value}, {"free_energy_fine", f.value_fine},
                 {"refinement_change", std::abs(f.value_fine - f.value)}});
    }
    if (*h_cmd) emit(out, run_h_function(doc.graph, from));
    return kOk;
  } catch (const SizeGuardError& e) {
    emit(out, error_json("size_guard", e.what()));
    return kSizeGuard;
  } catch (const ValidationError& e) {
    emit(out, error_json("validation", e.what()));
    return kInvalid;
  } catch (const nlohmann::json::exception& e) {
    emit(out, error_json("validation", e.what()));
    return kInvalid;
  }
}

}  // namespace kwlab::cli
