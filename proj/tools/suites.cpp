#include "suites.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "kwlab/critical.hpp"
#include "kwlab/identities.hpp"
#include "kwlab/oracle.hpp"
#include "kwlab/sholo.hpp"

namespace kwlab::cli {

namespace {

using Rng = std::mt19937_64;

Cochain random_unitary(const EmbeddedGraph& g, Rng& rng) {
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  std::vector<cplx> fwd(g.num_edges());
  for (cplx& z : fwd) z = std::polar(1.0, angle(rng));
  return Cochain::from_edges(fwd);
}

double relative(cplx value, double expected) { return std::abs(value - expected) / std::abs(expected); }

bool positive_angles(const EmbeddedGraph& g) {
  const auto th = g.weights().thetas();
  return std::all_of(th.begin(), th.end(), [](double t) { return t > 0.0; });
}

VerificationReport start(std::string suite, const SuiteOptions& opt) {
  VerificationReport r;
  r.suite = std::move(suite);
  r.fixture = opt.fixture;
  r.seed = opt.seed;
  r.draws = opt.draws;
  return r;
}

bool is_torus(const EmbeddedGraph& g) { return g.surface() == SurfaceKind::torus && g.genus() == 1; }

}  // namespace

void VerificationReport::add(std::string name, double residual, double threshold) {
  checks.push_back({std::move(name), residual, threshold, residual <= threshold});
}

bool VerificationReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

nlohmann::json to_json(const VerificationReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const Check& c : r.checks) {
    checks.push_back({{"name", c.name}, {"residual", c.residual}, {"threshold", c.threshold}, {"pass", c.pass}});
  }
  return {{"suite", r.suite}, {"fixture", r.fixture}, {"seed", r.seed}, {"draws", r.draws},
          {"pass", r.pass()}, {"checks", checks}, {"notes", r.notes}};
}

std::string describe(const EmbeddedGraph& g) {
  std::ostringstream s;
  s << (g.surface() == SurfaceKind::planar ? "planar" : "torus") << " graph, " << g.num_vertices()
    << " vertices, " << g.num_edges() << " edges, " << g.num_faces() << " faces";
  return s.str();
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"corr", "det", "kw1", "kw2", "inv", "sholo", "dirac", "pf"};
  return names;
}

VerificationReport run_suite(std::string_view name, const EmbeddedGraph& g, const SuiteOptions& opt) {
  if (name == "corr") return verify_corr_suite(g, opt);
  if (name == "det") return verify_det_suite(g, opt);
  if (name == "kw1") return verify_kw1_suite(g, opt);
  if (name == "kw2") return verify_kw2_suite(g, opt);
  if (name == "inv") return verify_inv_suite(g, opt);
  if (name == "sholo") return verify_sholo_suite(g, opt);
  if (name == "dirac") return verify_dirac_suite(g, opt);
  if (name == "pf") return verify_pf_suite(g, opt);
  throw ValidationError("unknown suite '" + std::string(name) + "'");
}

VerificationReport verify_corr_suite(const EmbeddedGraph& g, const SuiteOptions& opt) {
  VerificationReport r = start("corr", opt);
  Rng rng(opt.seed);
  double res = 0.0, res_reduced = 0.0, rot = 0.0, rev = 0.0;
  for (int d = 0; d < opt.draws; ++d) {
    const CorrReport c = verify_corr(g, random_unitary(g, rng));
    res = std::max(res, c.residual);
    res_reduced = std::max(res_reduced, c.residual_reduced);
    rot = std::max(rot, relative(c.det_rotation, c.expected_rotation));
    rev = std::max(rev, relative(c.det_reversal, c.expected_reversal));
  }
  r.add("factorization_unitary", res, 1e-12);
  r.add("factorization_reduced", res_reduced, 1e-12);
  r.add("det_rotation_factor", rot, 1e-12);
  r.add("det_reversal_factor", rev, 1e-12);
  return r;
}

VerificationReport verify_det_suite(const EmbeddedGraph& g, const SuiteOptions& opt) {
  VerificationReport r = start("det", opt);
  Rng rng(opt.seed);
  // The ratio must be one fixed sign for every unitary cochain.
  double spread = 0.0, not_sign = 0.0;
  cplx first;
  for (int d = 0; d < std::max(opt.draws, 1); ++d) {
    const cplx ratio = det_ratio(g, random_unitary(g, rng), Orientation::reduced);
    if (d == 0) first = ratio;
    spread = std::max(spread, std::abs(ratio - first));
    not_sign = std::max(not_sign, std::abs(std::abs(ratio.real()) - 1.0) + std::abs(ratio.imag()));
  }
  r.add("ratio_is_sign", not_sign, 1e-9);
  r.add("ratio_constant", spread, 1e-9);
  r.notes.push_back(first.real() > 0 ? "ratio +1" : "ratio -1");
  return r;
}

VerificationReport verify_kw1_suite(const EmbeddedGraph& g, const SuiteOptions& opt) {
  VerificationReport r = start("kw1", opt);
  if (!is_torus(g)) {
    r.notes.push_back("not applicable: the duality comparison is defined for torus graphs");
    return r;
  }
  r.add("dual_determinant_match", duality_check(g, opt.draws, opt.seed).kw1_residual, 1e-9);
  return r;
}

VerificationReport verify_kw2_suite(const EmbeddedGraph& g, const SuiteOptions& opt) {
  VerificationReport r = start("kw2", opt);
  if (!is_torus(g)) {
    r.notes.push_back("not applicable: the duality comparison is defined for torus graphs");
    return r;
  }
  const DualityReport rep = duality_check(g, 0, opt.seed);
  double wrong = 0.0;
  for (const DualitySign& s : rep.kw2) {
    const bool trivial = s.character[0] == 1 && s.character[1] == 1;
    std::ostringstream note;
    note << "character (" << s.character[0] << "," << s.character[1] << "): sign " << s.sign;
    r.notes.push_back(note.str());
    if (s.sign == 0) continue;  // both roots vanish (critical point)
    if (s.sign != (trivial ? -1 : 1)) wrong += 1.0;
  }
  r.add("sign_pattern_mismatches", wrong, 0.0);
  return r;
}

VerificationReport verify_inv_suite(const EmbeddedGraph& g, const SuiteOptions& opt) {
  VerificationReport r = start("inv", opt);
  const CMatrix F = oracle::F_matrix(g);
  const CMatrix kw = kac_ward(g, Cochain::trivial(g.num_darts())).m;
  const double root = sqrt_det_tracked(g, Cochain::trivial(g.num_darts())).value;
  if (std::abs(root) > 1e-8) {
    r.add("F_equals_root_times_inverse", max_abs(F - root * kw.inverse()), 1e-9);
  } else {
    r.notes.push_back("Kac-Ward matrix is singular; compared F KW with root times identity");
    r.add("F_times_kac_ward", max_abs(F * kw - root * CMatrix::Identity(kw.rows(), kw.cols())), 1e-9);
  }
  const EmbeddedGraph g0 = g.with_weights(WeightSystem::uniform(g.num_edges(), 0.0));
  const CMatrix F0 = oracle::F_matrix(g0);
  r.add("identity_at_zero_weight", max_abs(F0 - CMatrix::Identity(F0.rows(), F0.cols())), 1e-12);
  return r;
}

VerificationReport verify_sholo_suite(const EmbeddedGraph& g, const SuiteOptions& opt) {
  VerificationReport r = start("sholo", opt);
  const CGraph c(g);
  Rng rng(opt.seed);
  std::normal_distribution<double> normal;

  const auto kernel = kernel_observables(g);
  const cplx back = std::polar(1.0, -kPi / 4);
  double undecided = 0.0, disagreeing = 0.0;
  int in_kernel = 0;
  for (int d = 0; d < opt.draws; ++d) {
    MidpointFunction F = MidpointFunction::zero(g);
    if (!kernel.empty() && d % 2 == 1) {
      // exp(-i pi/4) times a real combination of s-holomorphic kernel functions
      for (const MidpointFunction& G : kernel) {
        const double a = normal(rng);
        for (int k = 0; k < g.num_edges(); ++k) F.value[k] += a * back * G(k);
      }
    } else {
      for (cplx& z : F.value) z = {normal(rng), normal(rng)};
    }
    const double n = F.norm();
    const KernelNorms kn = kernel_norms(c, F);
    std::vector<double> norms{kn.sholo, kn.kac_ward, kn.kasteleyn};
    if (kn.dirac) norms.push_back(*kn.dirac);
    const bool small = std::all_of(norms.begin(), norms.end(), [&](double v) { return v < 1e-8 * n; });
    const bool large = std::all_of(norms.begin(), norms.end(), [&](double v) { return v > 1e-3 * n; });
    if (small) ++in_kernel;
    if (!small && !large) {
      const bool any_small = std::any_of(norms.begin(), norms.end(), [&](double v) { return v < 1e-8 * n; });
      (any_small ? disagreeing : undecided) += 1.0;
    }
  }
  r.add("verdict_disagreements", disagreeing, 0.0);
  r.add("undecided_draws", undecided, 0.0);
  r.notes.push_back(std::to_string(in_kernel) + " of " + std::to_string(opt.draws) + " draws s-holomorphic");
  r.notes.push_back(std::to_string(kernel.size()) + " kernel observables");

  if (!positive_angles(g)) {
    r.notes.push_back("observables skipped: some edge has zero weight");
    return r;
  }
  // Up to eight source darts spread over the graph.
  const int step = std::max(1, g.num_darts() / 8);
  double worst = 0.0;
  int done = 0;
  for (int e0 = 0; e0 < g.num_darts(); e0 += step) {
    MidpointFunction G;
    try {
      G = observable(g, e0, ObservableBackend::inverse_column);
    } catch (const ValidationError&) {
      if (g.num_edges() > oracle::kMaxInverseEdges) continue;
      G = observable(g, e0, ObservableBackend::combinatorial);
    }
    const auto res = sholo_residuals(g, G);
    for (int v = 0; v < g.num_vertices(); ++v) {
      if (v == g.origin(e0) || v == g.terminus(e0)) continue;
      worst = std::max(worst, res[v] / std::max(1.0, G.norm()));
    }
    ++done;
  }
  if (done == 0) {
    r.notes.push_back("observables skipped: Kac-Ward matrix singular and graph too large for the combinatorial backend");
  } else {
    r.add("observable_residual_away_from_source", worst, 1e-9);
  }
  return r;
}

VerificationReport verify_dirac_suite(const EmbeddedGraph& g, const SuiteOptions& opt) {
  VerificationReport r = start("dirac", opt);
  const auto th = g.weights().thetas();
  const bool angles_ok = std::all_of(th.begin(), th.end(), [](double t) { return t > 0.0 && t < kPi / 2; });
  if (!is_torus(g) || !is_isoradial(g) || !angles_ok) {
    r.notes.push_back("not applicable: needs a critical isoradial torus graph");
    return r;
  }
  const DiracReport d = verify_dirac_identities(g);
  r.add("kasteleyn_vs_dirac", d.kasteleyn_dirac, 1e-10);
  r.add("spin_cochain_cocycle", d.spin_cocycle, 1e-10);
  r.add("dirac_square_is_double_laplacian", d.double_laplacian, 1e-10);
  r.add("c_black_laplacian", d.c_black, 1e-10);
  r.add("c_white_laplacian", d.c_white, 1e-10);
  r.add("c_laplacian_sum", d.c_sum, 1e-10);
  r.add("c_to_d_transfer", d.c_to_d, 1e-10);
  return r;
}

VerificationReport verify_pf_suite(const EmbeddedGraph& g, const SuiteOptions& opt) {
  VerificationReport r = start("pf", opt);
  const oracle::DimerValues v = oracle::dimer_Z(CGraph(g));
  r.add("matchings_vs_determinants", std::abs(v.matchings - v.determinant_combination) / std::abs(v.matchings),
        1e-9);
  return r;
}

}  // namespace kwlab::cli
