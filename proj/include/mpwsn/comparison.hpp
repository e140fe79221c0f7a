#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mpwsn/scenario.hpp"

namespace mpwsn {

struct PathInfo {
  int path_id{0};
  int hops{0};
  double tau{0};
};

struct SchemeResult {
  Scheme scheme{Scheme::EqualSplit};
  Distributiond distribution;
  std::vector<double> path_delay;  ///< simulated, in PathInfo order
  double overall_delay{0};         ///< max over paths
  double energy{0};                ///< J, nodes of loaded paths plus background sensing
  Packets delivered{0};
  Packets dropped{0};
  std::vector<std::string> warnings;
  TransferReport transfer;
};

struct ComparisonReport {
  std::vector<PathInfo> paths;
  std::vector<SchemeResult> schemes;  ///< requested order
  Packets packets{0};
  bool orderings_checked{false};      ///< all three schemes present
  bool delay_order{true};             ///< S3 < S2 < S1
  bool energy_order{true};            ///< E1 <= E3 <= E2
  bool energy_closer{true};           ///< |E3 - E1| < |E3 - E2|
  std::vector<std::string> warnings;

  bool orderings_pass() const { return delay_order && energy_order && energy_closer; }
  const SchemeResult* find(Scheme s) const;
};

/// Allocates and simulates each requested scheme on its own copy of the
/// network. `trace`, if given, receives every scheme's event trace.
ComparisonReport run_comparison(const ScenarioConfig& cfg, std::ostream* trace = nullptr);

/// Energy charged during a round to the nodes of paths carrying traffic,
/// plus `background_nodes` sensing for the round's duration.
double scheme_energy(const TransferReport& report, const std::vector<std::size_t>& devices,
                     double background_nodes, double sensing_power);

/// Writes distribution.csv, delays.csv, energy.csv and report.txt.
void emit_outputs(const ComparisonReport& report, const std::filesystem::path& dir);

std::string render_report(const ComparisonReport& report);
std::string distribution_csv(const ComparisonReport& report);
std::string delays_csv(const ComparisonReport& report);
std::string energy_csv(const ComparisonReport& report);

/// Minimal CSV reader for the files above (no quoting).
std::vector<std::vector<std::string>> read_csv(std::istream& in);

}  // namespace mpwsn
