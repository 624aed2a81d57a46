#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "chaoskit/basis.hpp"
#include "chaoskit/measures.hpp"

namespace chaoskit::cli {

inline constexpr std::uint64_t kDefaultSeed = 20190101;

/// Malformed or inconsistent run specification.
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string subcommand;  // basis, quad, tensor, propagate, ocp, bench
  std::string spec_path;   // empty: subcommand defaults only
  std::string out_prefix = "chaoskit";
  std::uint64_t seed = kDefaultSeed;
  std::vector<std::string> overrides;  // key=value, key may be a dotted path
  std::optional<std::string> rule;
  std::optional<std::size_t> n;
  std::optional<std::size_t> order;
};

/// Reads the spec file (if any) and applies overrides; values parse as JSON
/// and fall back to plain strings.
nlohmann::json load_spec(const RunConfig& cfg);
void apply_override(nlohmann::json& spec, const std::string& assignment);

/// {"kind": "beta01", "alpha": 2, "beta": 4.5} or
/// {"mixture": [{"weight": 0.3, "measure": {...}}, ...]}.
Measure measure_from_json(const nlohmann::json& j, const std::string& path = "measure");
/// {"measure": ..., "degree": d} or {"factors": [...], "total_degree": p}.
MultiOrthoBasis basis_from_json(const nlohmann::json& spec);

/// Executes one subcommand and writes <out_prefix>.json and/or .csv.
/// Returns the process exit status.
int run(const RunConfig& cfg, std::ostream& err);

/// Full command-line entry point.
int main_entry(int argc, char** argv);

/// printf("%.17g") formatting used for CSV cells.
std::string format_real(double v);

}  // namespace chaoskit::cli
