#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace kwlab::cli {

struct Check {
  std::string name;
  double residual = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

struct VerificationReport {
  std::string suite;
  std::string fixture;
  std::uint64_t seed = 0;
  int draws = 0;
  std::vector<Check> checks;
  std::vector<std::string> notes;

  // residual <= threshold; NaN fails.
  void add(std::string name, double residual, double threshold);
  bool pass() const;
};

nlohmann::json to_json(const VerificationReport& r);

}  // namespace kwlab::cli
