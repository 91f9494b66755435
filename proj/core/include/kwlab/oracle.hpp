#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "kwlab/derived_graphs.hpp"
#include "kwlab/linalg.hpp"

namespace kwlab::oracle {

inline constexpr int kMaxEvenEdges = 24;
inline constexpr int kMaxCycleSumEdges = 20;
inline constexpr int kMaxInverseEdges = 12;
inline constexpr int kMaxSpinVertices = 20;
inline constexpr int kMaxMatchingVertices = 40;

using EdgeMask = std::uint64_t;

// Edge subset, optionally with the marked half-edges (z_e, t(e)) and (o(e2), z_e2).
struct EvenSubgraph {
  EdgeMask mask = 0;
  std::optional<std::pair<int, int>> marked;
  // When e2 = rev(e) both marked strands leave the same vertex along the same half-edge;
  // this picks which of the two lies counterclockwise.
  bool finish_clockwise = false;
};

// Even subsets in increasing bitmask order.
std::vector<EdgeMask> enumerate_even(const EmbeddedGraph& g);

struct Curve {
  std::vector<int> darts;  // consecutive darts; an open path starts with e and ends with e2
  double rot = 0.0;        // sum of turnings, closing turn included for loops
};

struct LoopResolution {
  std::vector<Curve> loops;
  std::optional<Curve> path;
};

// Pairs the subgraph's half-edges at every vertex without crossings. With rng == nullptr
// cyclically adjacent ports are joined starting from the lowest dart; otherwise a random
// non-crossing pairing is drawn. Returns nullopt when a marked configuration only admits
// an immediate backtrack at the shared midpoint.
std::optional<LoopResolution> resolve(const EmbeddedGraph& g, const EvenSubgraph& xi,
                                      std::mt19937_64* rng = nullptr);

// Product over loops of -exp(i rot / 2), checked to be +-1.
int q_sign(const LoopResolution& r);

// sum over even subgraphs of (-1)^q prod x_e, times prod phi(2k) for a +-1 cochain.
double signed_cycle_sum(const EmbeddedGraph& g, const Cochain* phi = nullptr);

struct IsingValues {
  double spins = 0.0;
  double high_temperature = 0.0;
  double kac_ward = 0.0;
};

// Couplings J >= 0 per edge; the graph's own weights are replaced by tanh(beta J).
IsingValues ising_Z(const EmbeddedGraph& g, std::span<const double> J, double beta);

struct DimerValues {
  double matchings = 0.0;
  double determinant_combination = 0.0;  // genus 0: det K; genus 1: Arf-signed sum
};

DimerValues dimer_Z(const CGraph& c);

cplx F_combinatorial(const EmbeddedGraph& g, int e, int e2);
CMatrix F_matrix(const EmbeddedGraph& g);

}  // namespace kwlab::oracle
