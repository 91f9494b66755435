#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "kwlab/surface_graph.hpp"
#include "report.hpp"

namespace kwlab::cli {

struct SuiteOptions {
  int draws = 10;
  std::uint64_t seed = 1;
  std::string fixture;  // free-form description copied into the report
};

// Suite names accepted by `verify`, without "all".
const std::vector<std::string>& suite_names();

// Runs one named suite. Oracle size guards propagate as SizeGuardError.
VerificationReport run_suite(std::string_view name, const EmbeddedGraph& g, const SuiteOptions& opt);

VerificationReport verify_corr_suite(const EmbeddedGraph& g, const SuiteOptions& opt);
VerificationReport verify_det_suite(const EmbeddedGraph& g, const SuiteOptions& opt);
VerificationReport verify_kw1_suite(const EmbeddedGraph& g, const SuiteOptions& opt);
VerificationReport verify_kw2_suite(const EmbeddedGraph& g, const SuiteOptions& opt);
VerificationReport verify_inv_suite(const EmbeddedGraph& g, const SuiteOptions& opt);
VerificationReport verify_sholo_suite(const EmbeddedGraph& g, const SuiteOptions& opt);
VerificationReport verify_dirac_suite(const EmbeddedGraph& g, const SuiteOptions& opt);
VerificationReport verify_pf_suite(const EmbeddedGraph& g, const SuiteOptions& opt);

// "planar graph, 3 vertices, 3 edges, 2 faces" and so on.
std::string describe(const EmbeddedGraph& g);

}  // namespace kwlab::cli
