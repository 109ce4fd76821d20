#ifndef CVM_REPORT_HPP_
#define CVM_REPORT_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "cvm/critical_values.hpp"
#include "cvm/dataset.hpp"
#include "cvm/statistics.hpp"

namespace cvm {

struct TestConfig {
  std::vector<StatisticId> statistics;
  double alpha = 0.05;
  std::string method = "asymptotic";  // asymptotic | finite-sample-mc
  std::uint64_t seed = 0;
  int truncation = 0;
  std::size_t mc_reps = 10000;   // replications for finite-sample quantiles
  std::size_t dm_reps = 100000;  // replications behind the B quantile
  std::size_t dm_grid = 128;
  std::string cache_path;
};

struct StatisticResult {
  std::string name;
  double value = 0.0;
  double critical = 0.0;
  double p_value = -1.0;  // < 0 when no p-value is defined
  bool reject = false;
};

struct TestReport {
  TestConfig config;
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<StatisticResult> statistics;
  std::vector<DependogramRow> dependogram;
  std::vector<std::string> warnings;

  bool any_reject() const;
};

/// Ranks -> per-subset statistics -> combinations -> decisions, using
/// asymptotic critical values by default or simulated finite-sample ones.
TestReport run_test(const Dataset& data, const TestConfig& config);

std::string report_to_json(const TestReport& report);
void write_report(const TestReport& report, const std::string& path);

}  // namespace cvm

#endif  // CVM_REPORT_HPP_
