#include "kwlab/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "kwlab/operators.hpp"

namespace kwlab::oracle {

namespace {

void guard(bool ok, const std::string& what) {
  if (!ok) throw SizeGuardError(what);
}

std::vector<std::uint64_t> edge_parities(const EmbeddedGraph& g) {
  guard(g.num_vertices() <= 64, "oracle supports at most 64 vertices");
  std::vector<std::uint64_t> sig(g.num_edges());
  for (int k = 0; k < g.num_edges(); ++k) {
    const EdgeSpec& es = g.edge(k);
    sig[k] = (std::uint64_t{1} << es.u) ^ (std::uint64_t{1} << es.v);
  }
  return sig;
}

// Vertex parity signature of every subset of edges, indexed by mask.
std::vector<std::uint64_t> all_parities(const EmbeddedGraph& g) {
  const auto sig = edge_parities(g);
  const std::size_t n = std::size_t{1} << g.num_edges();
  std::vector<std::uint64_t> out(n, 0);
  for (std::size_t m = 1; m < n; ++m) out[m] = out[m & (m - 1)] ^ sig[std::countr_zero(m)];
  return out;
}

double weight_product(const EmbeddedGraph& g, EdgeMask mask) {
  double p = 1.0;
  for (EdgeMask m = mask; m; m &= m - 1) p *= g.weights().x(std::countr_zero(m));
  return p;
}

enum class PortKind { dart, start, finish };

struct Port {
  PortKind kind = PortKind::dart;
  int dart = 0;      // leaving dart, or the marked dart for start / finish
  int position = 0;  // index in the counterclockwise star
  int tie = 0;
};

}  // namespace

std::vector<EdgeMask> enumerate_even(const EmbeddedGraph& g) {
  const int ne = g.num_edges();
  guard(ne <= kMaxEvenEdges, "even-subgraph enumeration limited to 24 edges");
  const auto sig = edge_parities(g);
  std::vector<EdgeMask> out;
  // Gray-code walk keeps the parity signature up to date with one xor per step
  std::uint64_t parity = 0;
  const EdgeMask n = EdgeMask{1} << ne;
  out.push_back(0);
  for (EdgeMask i = 1; i < n; ++i) {
    parity ^= sig[std::countr_zero(i)];
    if (parity == 0) out.push_back(i ^ (i >> 1));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<LoopResolution> resolve(const EmbeddedGraph& g, const EvenSubgraph& xi, std::mt19937_64* rng) {
  const int nv = g.num_vertices();
  std::vector<int> position(g.num_darts());
  for (int v = 0; v < nv; ++v) {
    const auto& s = g.darts_at(v);
    for (std::size_t i = 0; i < s.size(); ++i) position[s[i]] = static_cast<int>(i);
  }

  std::vector<Port> ports;
  std::vector<std::vector<int>> at(nv);
  std::vector<int> port_of_dart(g.num_darts(), -1);
  for (int k = 0; k < g.num_edges(); ++k) {
    if (!(xi.mask >> k & 1)) continue;
    for (int d : {2 * k, 2 * k + 1}) {
      port_of_dart[d] = static_cast<int>(ports.size());
      at[g.origin(d)].push_back(port_of_dart[d]);
      ports.push_back({PortKind::dart, d, position[d], 0});
    }
  }
  int start = -1;
  int finish = -1;
  if (xi.marked) {
    const auto [e, e2] = *xi.marked;
    if (xi.mask >> g.edge_of(e) & 1 || xi.mask >> g.edge_of(e2) & 1)
      throw ValidationError("marked edges may not belong to the subgraph");
    start = static_cast<int>(ports.size());
    at[g.terminus(e)].push_back(start);
    ports.push_back({PortKind::start, e, position[g.reversal(e)], 0});
    finish = static_cast<int>(ports.size());
    at[g.origin(e2)].push_back(finish);
    ports.push_back({PortKind::finish, e2, position[e2], xi.finish_clockwise ? -1 : 1});
  }

  std::vector<int> partner(ports.size(), -1);
  for (int v = 0; v < nv; ++v) {
    auto& list = at[v];
    if (list.empty()) continue;
    if (list.size() % 2) throw ValidationError("odd degree at vertex " + std::to_string(g.vertex(v).id));
    std::sort(list.begin(), list.end(), [&](int a, int b) {
      return std::tie(ports[a].position, ports[a].tie) < std::tie(ports[b].position, ports[b].tie);
    });
    const bool doubled = start >= 0 && ports[start].position == ports[finish].position &&
                         g.terminus(ports[start].dart) == v && g.origin(ports[finish].dart) == v;
    if (doubled) {
      // joining the two marked strands would be a backtrack, so pairing starts
      // right after them
      if (list.size() == 2) return std::nullopt;
      auto it = std::find(list.begin(), list.end(), xi.finish_clockwise ? start : finish);
      std::rotate(list.begin(), it, list.end());
    }
    if (rng == nullptr || doubled) {
      const std::size_t off = rng && !doubled ? (*rng)() % 2 : 0;
      for (std::size_t i = 0; i < list.size(); i += 2) {
        const int a = list[(i + off) % list.size()];
        const int b = list[(i + off + 1) % list.size()];
        partner[a] = b;
        partner[b] = a;
      }
    } else {
      // random non-crossing matching: repeatedly join a random cyclically adjacent pair
      std::vector<int> rest = list;
      while (!rest.empty()) {
        const std::size_t i = (*rng)() % rest.size();
        const std::size_t j = (i + 1) % rest.size();
        partner[rest[i]] = rest[j];
        partner[rest[j]] = rest[i];
        rest.erase(rest.begin() + std::max(i, j));
        rest.erase(rest.begin() + std::min(i, j));
      }
    }
  }

  LoopResolution out;
  std::vector<bool> used(g.num_edges(), false);
  // follows the curve that arrives at the end of dart `cur`; returns the port it closes on
  auto walk = [&](int cur, Curve& c, int stop_dart) {
    while (true) {
      const int q = partner[port_of_dart[g.reversal(cur)]];
      if (q == finish && finish >= 0) {
        c.rot += turning(g, cur, ports[finish].dart);
        c.darts.push_back(ports[finish].dart);
        return;
      }
      const int next = ports[q].dart;
      c.rot += turning(g, cur, next);
      if (next == stop_dart) return;
      c.darts.push_back(next);
      used[g.edge_of(next)] = true;
      cur = next;
    }
  };
  if (start >= 0) {
    Curve c;
    const int e = ports[start].dart;
    c.darts.push_back(e);
    const int q = partner[start];
    if (q == finish) {
      c.rot = turning(g, e, ports[finish].dart);
      c.darts.push_back(ports[finish].dart);
    } else {
      const int d1 = ports[q].dart;
      c.rot = turning(g, e, d1);
      c.darts.push_back(d1);
      used[g.edge_of(d1)] = true;
      walk(d1, c, -1);
    }
    out.path = std::move(c);
  }
  for (int k = 0; k < g.num_edges(); ++k) {
    if (!(xi.mask >> k & 1) || used[k]) continue;
    Curve c;
    const int d0 = 2 * k;
    c.darts.push_back(d0);
    used[k] = true;
    walk(d0, c, d0);
    out.loops.push_back(std::move(c));
  }
  return out;
}

int q_sign(const LoopResolution& r) {
  cplx s = 1.0;
  for (const Curve& c : r.loops) s *= -std::polar(1.0, c.rot / 2);
  if (std::abs(s.imag()) > 1e-9 || std::abs(std::abs(s.real()) - 1.0) > 1e-9)
    throw ValidationError("loop signs are not real: inconsistent angle data");
  return s.real() > 0 ? 1 : -1;
}

double signed_cycle_sum(const EmbeddedGraph& g, const Cochain* phi) {
  guard(g.num_edges() <= kMaxCycleSumEdges, "signed cycle sum limited to 20 edges");
  if (phi && !phi->is_real_sign()) throw ValidationError("cycle sums take a +-1 cochain");
  double total = 0.0;
  for (EdgeMask m : enumerate_even(g)) {
    double term = q_sign(*resolve(g, {m, std::nullopt})) * weight_product(g, m);
    if (phi)
      for (EdgeMask r = m; r; r &= r - 1) term *= (*phi)(2 * std::countr_zero(r)).real();
    total += term;
  }
  return total;
}

IsingValues ising_Z(const EmbeddedGraph& graph, std::span<const double> J, double beta) {
  if (J.size() != static_cast<std::size_t>(graph.num_edges())) throw ValidationError("one coupling per edge required");
  std::vector<double> x;
  double cosh_prod = 1.0;
  for (double j : J) {
    if (j < 0.0) throw ValidationError("couplings must be nonnegative");
    x.push_back(std::tanh(beta * j));
    cosh_prod *= std::cosh(beta * j);
  }
  const EmbeddedGraph g = graph.with_weights(WeightSystem(x));
  const int nv = g.num_vertices();
  guard(nv <= kMaxSpinVertices, "spin enumeration limited to 20 vertices");
  guard(g.num_edges() <= kMaxCycleSumEdges, "even-subgraph expansion limited to 20 edges");

  IsingValues out;
  for (std::uint32_t s = 0; s < (1u << nv); ++s) {
    double energy = 0.0;
    for (int k = 0; k < g.num_edges(); ++k) {
      const EdgeSpec& es = g.edge(k);
      const int su = (s >> es.u & 1) ? -1 : 1;
      const int sv = (s >> es.v & 1) ? -1 : 1;
      energy += J[k] * su * sv;
    }
    out.spins += std::exp(beta * energy);
  }
  const double prefactor = std::ldexp(cosh_prod, nv);
  double even = 0.0;
  for (EdgeMask m : enumerate_even(g)) even += weight_product(g, m);
  out.high_temperature = prefactor * even;

  const int nd = g.num_darts();
  double zi = 0.0;
  if (g.genus() == 0) {
    zi = sqrt_det_tracked(g, Cochain::trivial(nd)).value;
  } else if (g.genus() == 1) {
    for (auto [z, w] : {std::pair{1.0, 1.0}, {-1.0, 1.0}, {1.0, -1.0}, {-1.0, -1.0}}) {
      const double s = sqrt_det_tracked(g, character_cochain(g, z, w)).value;
      zi += (z == 1.0 && w == 1.0 ? -0.5 : 0.5) * s;
    }
  } else {
    throw ValidationError("Kac-Ward partition function needs genus 0 or 1");
  }
  out.kac_ward = prefactor * zi;
  return out;
}

DimerValues dimer_Z(const CGraph& c) {
  const int nw = c.num_white();
  const int nb = c.num_black();
  guard(nw + nb <= kMaxMatchingVertices, "matching enumeration limited to 40 vertices");
  std::vector<std::vector<std::pair<int, double>>> adj(nw);
  for (const CEdge& ce : c.edges()) adj[ce.white].push_back({ce.black, ce.weight});

  // dp over used black vertices; whites are matched in index order
  std::vector<double> dp(std::size_t{1} << nb, 0.0);
  dp[0] = 1.0;
  for (std::uint32_t mask = 0; mask < dp.size(); ++mask) {
    if (dp[mask] == 0.0) continue;
    const int w = std::popcount(mask);
    if (w >= nw) continue;
    for (auto [b, y] : adj[w])
      if (!(mask >> b & 1)) dp[mask | (1u << b)] += dp[mask] * y;
  }
  DimerValues out;
  out.matchings = dp.back();

  const EmbeddedGraph& g = c.base();
  const int nd = g.num_darts();
  if (g.genus() == 0) {
    out.determinant_combination = det(kasteleyn(c, Cochain::trivial(nd), Orientation::reduced).m).real();
  } else if (g.genus() == 1) {
    double s = 0.0;
    for (auto [z, w] : {std::pair{1.0, 1.0}, {-1.0, 1.0}, {1.0, -1.0}, {-1.0, -1.0}}) {
      const double d = det(kasteleyn(c, character_cochain(g, z, w), Orientation::reduced).m).real();
      s += (z == 1.0 && w == 1.0 ? -0.5 : 0.5) * d;
    }
    out.determinant_combination = s;
  } else {
    throw ValidationError("dimer determinant formula needs genus 0 or 1");
  }
  return out;
}

namespace {

cplx f_entry(const EmbeddedGraph& g, const std::vector<std::uint64_t>& parity, int e, int e2) {
  const EdgeMask all = (EdgeMask{1} << g.num_edges()) - 1;
  const int k = g.edge_of(e);
  cplx total = 0.0;
  if (e == e2) {
    for (EdgeMask m = 0; m <= all; ++m) {
      if (parity[m] != 0 || (m >> k & 1)) continue;
      total += q_sign(*resolve(g, {m, std::nullopt})) * weight_product(g, m);
    }
    return total;
  }
  const int k2 = g.edge_of(e2);
  const std::uint64_t want = (std::uint64_t{1} << g.terminus(e)) ^ (std::uint64_t{1} << g.origin(e2));
  const double xe = g.weights().x(k);
  if (xe == 0.0) return 0.0;
  const bool doubled = e2 == g.reversal(e);
  for (EdgeMask m = 0; m <= all; ++m) {
    if (parity[m] != want || (m >> k & 1) || (m >> k2 & 1)) continue;
    for (bool cw : {false, true}) {
      if (cw && !doubled) break;
      const auto r = resolve(g, {m, std::pair{e, e2}, cw});
      if (!r) continue;
      const double share = doubled ? 0.5 : 1.0;
      total += share * q_sign(*r) * std::polar(1.0, r->path->rot / 2) * xe * weight_product(g, m);
    }
  }
  return total;
}

}  // namespace

cplx F_combinatorial(const EmbeddedGraph& g, int e, int e2) {
  guard(g.num_edges() <= kMaxInverseEdges, "combinatorial inverse limited to 12 edges");
  return f_entry(g, all_parities(g), e, e2);
}

CMatrix F_matrix(const EmbeddedGraph& g) {
  guard(g.num_edges() <= kMaxInverseEdges, "combinatorial inverse limited to 12 edges");
  const auto parity = all_parities(g);
  const int nd = g.num_darts();
  CMatrix f(nd, nd);
  for (int e = 0; e < nd; ++e)
    for (int e2 = 0; e2 < nd; ++e2) f(e, e2) = f_entry(g, parity, e, e2);
  return f;
}

}  // namespace kwlab::oracle
