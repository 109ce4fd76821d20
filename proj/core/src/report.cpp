#include "cvm/report.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "cvm/gil_pelaez.hpp"
#include "cvm/ranks.hpp"
#include "cvm/special.hpp"

namespace cvm {

bool TestReport::any_reject() const {
  return std::any_of(statistics.begin(), statistics.end(),
                     [](const StatisticResult& s) { return s.reject; });
}

TestReport run_test(const Dataset& data, const TestConfig& config) {
  if (config.statistics.empty())
    throw std::invalid_argument("config names no statistics");
  if (config.method != "asymptotic" && config.method != "finite-sample-mc")
    throw std::invalid_argument("unknown method: " + config.method);
  const bool finite = config.method == "finite-sample-mc";
  const int d = static_cast<int>(data.d);

  TestReport report;
  report.config = config;
  report.n = data.n;
  report.d = data.d;

  const RankMatrix ranks = compute_ranks(data, config.seed);
  for (std::size_t j = 0; j < ranks.ties_broken.size(); ++j)
    if (ranks.ties_broken[j] > 0)
      report.warnings.push_back(
          "column " + std::to_string(j + 1) + ": " +
          std::to_string(ranks.ties_broken[j]) +
          " tie(s) broken at random; the asymptotic theory assumes "
          "continuous margins");

  const bool need_full = std::any_of(
      config.statistics.begin(), config.statistics.end(),
      [](StatisticId id) {
        return id != StatisticId::kB && !is_pairwise(id);
      });
  const bool need_pairs =
      std::any_of(config.statistics.begin(), config.statistics.end(),
                  [](StatisticId id) { return is_pairwise(id); });
  SubsetStatistics full_stats, pair_stats;
  if (need_full) full_stats = subset_statistics(ranks, false);
  if (need_pairs)
    pair_stats = d == 2 && need_full ? full_stats
                                     : subset_statistics(ranks, true);

  CriticalValueSettings cv_settings;
  cv_settings.method = finite ? "finite-sample-mc" : "spectral-mc";
  cv_settings.reps = finite ? config.mc_reps : config.dm_reps;
  cv_settings.dm_grid = config.dm_grid;
  cv_settings.sample_n = data.n;
  cv_settings.truncation = config.truncation;
  cv_settings.seed = config.seed ^ 0x5bf03635u;
  cv_settings.cache_path = config.cache_path;

  std::map<int, NullCdfTable> cdf_tables;
  auto cdf_for = [&](int card) -> const NullCdfTable& {
    auto it = cdf_tables.find(card);
    if (it == cdf_tables.end())
      it = cdf_tables
               .emplace(card,
                        NullCdfTable(
                            subset_null_spectrum(card, config.truncation)))
               .first;
    return it->second;
  };

  for (StatisticId id : config.statistics) {
    const bool pairs = is_pairwise(id);
    const SubsetStatistics& stats = pairs ? pair_stats : full_stats;
    StatisticResult res;
    res.name = statistic_name(id);

    switch (id) {
      case StatisticId::kB: {
        res.value = cvm_global(ranks);
        res.critical =
            critical_value(id, d, config.alpha, cv_settings).value;
        break;
      }
      case StatisticId::kL:
      case StatisticId::kL2:
      case StatisticId::kW: {
        res.value = id == StatisticId::kW ? combine_weighted(stats)
                                          : combine_linear(stats);
        if (finite) {
          res.critical =
              critical_value(id, d, config.alpha, cv_settings).value;
        } else {
          CriticalValueSettings inv = cv_settings;
          inv.method = "inversion";
          res.critical = critical_value(id, d, config.alpha, inv).value;
          res.p_value = survival(
              combination_null_spectrum(id == StatisticId::kW, d, pairs,
                                        config.truncation),
              res.value);
        }
        break;
      }
      case StatisticId::kM:
      case StatisticId::kM2: {
        const auto crit =
            finite ? finite_sample_dependogram_quantiles(
                         d, config.alpha, pairs, data.n, config.mc_reps,
                         cv_settings.seed)
                   : dependogram_quantiles(d, config.alpha, pairs,
                                           config.truncation);
        const auto dep = combine_dependogram(stats, crit);
        res.value = dep.statistic;
        res.critical = 1.0;
        if (report.dependogram.empty() || !pairs)
          report.dependogram = dep.rows;
        break;
      }
      case StatisticId::kT:
      case StatisticId::kT2: {
        bool clamped = false;
        res.value = combine_fisher(
            stats,
            [&](int card, double x) { return cdf_for(card).cdf(x); },
            &clamped);
        if (clamped)
          report.warnings.push_back(
              "Fisher combination: a per-subset CDF reached its tail "
              "truncation; 1 - F floored at 1e-15");
        res.critical =
            critical_value(id, d, config.alpha, cv_settings).value;
        if (!finite)
          res.p_value =
              1.0 - chi_square_cdf(res.value, fisher_df(d, pairs));
        break;
      }
    }
    res.reject = res.value > res.critical;
    report.statistics.push_back(std::move(res));
  }
  return report;
}

std::string report_to_json(const TestReport& report) {
  nlohmann::json j;
  nlohmann::json cfg;
  std::vector<std::string> names;
  for (StatisticId id : report.config.statistics)
    names.push_back(statistic_name(id));
  cfg["statistics"] = names;
  cfg["alpha"] = report.config.alpha;
  cfg["method"] = report.config.method;
  cfg["seed"] = report.config.seed;
  cfg["truncation"] = report.config.truncation;
  cfg["mc_reps"] = report.config.mc_reps;
  cfg["dm_reps"] = report.config.dm_reps;
  cfg["dm_grid"] = report.config.dm_grid;
  cfg["n"] = report.n;
  cfg["d"] = report.d;
  j["config"] = cfg;

  j["statistics"] = nlohmann::json::array();
  for (const auto& s : report.statistics) {
    nlohmann::json row;
    row["name"] = s.name;
    row["value"] = s.value;
    row["critical"] = s.critical;
    if (s.p_value >= 0.0)
      row["p_value"] = s.p_value;
    else
      row["p_value"] = nullptr;
    row["reject"] = s.reject;
    j["statistics"].push_back(row);
  }

  j["dependogram"] = nlohmann::json::array();
  for (const auto& row : report.dependogram)
    j["dependogram"].push_back({{"subset", subset_name(row.subset)},
                                {"value", row.value},
                                {"critical", row.critical}});

  j["warnings"] = report.warnings;
  return j.dump(1);
}

void write_report(const TestReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << report_to_json(report) << "\n";
}

}  // namespace cvm
