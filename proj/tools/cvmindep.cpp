// Command-line driver: rank-based Cramer-von Mises independence tests,
// critical-value tables, local power curves, relative-efficiency tables, and
// copula sampling.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cvm/copula.hpp"
#include "cvm/critical_values.hpp"
#include "cvm/dataset.hpp"
#include "cvm/efficiency.hpp"
#include "cvm/power.hpp"
#include "cvm/report.hpp"

namespace {

std::vector<cvm::StatisticId> parse_stats(const std::string& csv) {
  std::vector<cvm::StatisticId> ids;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) ids.push_back(cvm::statistic_from_string(item));
  if (ids.empty()) throw std::invalid_argument("no statistics requested");
  return ids;
}

std::vector<cvm::Family> parse_families(const std::string& csv) {
  std::vector<cvm::Family> fams;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) fams.push_back(cvm::family_from_string(item));
  if (fams.empty()) throw std::invalid_argument("no families requested");
  return fams;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << text;
}

int cmd_test(const std::string& input, const std::string& stats,
             double alpha, const std::string& method, std::uint64_t seed,
             const std::string& output, const std::string& cache,
             bool fail_on_reject) {
  cvm::TestConfig config;
  config.statistics = parse_stats(stats);
  config.alpha = alpha;
  config.method = method;
  config.seed = seed;
  config.cache_path = cache;
  const cvm::Dataset data = cvm::load_dataset(input);
  const cvm::TestReport report = cvm::run_test(data, config);
  emit(cvm::report_to_json(report) + "\n", output);
  return fail_on_reject && report.any_reject() ? 2 : 0;
}

int cmd_tables(int d, double alpha, const std::string& stats,
               const std::string& method, std::size_t reps,
               std::size_t dm_grid, std::size_t sample_n, std::uint64_t seed,
               const std::string& output, const std::string& cache) {
  cvm::CriticalValueSettings settings;
  settings.method = method;
  settings.reps = reps;
  settings.dm_grid = dm_grid;
  settings.sample_n = sample_n;
  settings.seed = seed;
  settings.cache_path = cache;

  std::ostringstream os;
  os.precision(7);
  os << std::fixed;
  os << "# critical values, d=" << d << " alpha=" << alpha
     << " method=" << method << " reps=" << reps << " seed=" << seed << "\n";
  os << "# statistic value std_error\n";
  for (cvm::StatisticId id : parse_stats(stats)) {
    if (id == cvm::StatisticId::kM || id == cvm::StatisticId::kM2) {
      const bool pairs = id == cvm::StatisticId::kM2;
      const auto q = cvm::dependogram_quantiles(d, alpha, pairs);
      for (const auto& [card, value] : q)
        os << "q" << card << (pairs ? "(alpha'')" : "(alpha')") << " "
           << value << " 0\n";
      continue;
    }
    const auto cv = cvm::critical_value(id, d, alpha, settings);
    os << cvm::statistic_name(id) << " " << cv.value << " " << cv.std_error
       << "\n";
  }
  emit(os.str(), output);
  return 0;
}

int cmd_power(const std::string& family, int d, const std::string& stats,
              double alpha, double delta_max, std::size_t points,
              std::size_t reps, std::uint64_t seed,
              const std::string& out_prefix) {
  const cvm::Family f = cvm::family_from_string(family);
  cvm::PowerSettings settings;
  settings.points = points;
  settings.reps = reps;
  settings.seed = seed;
  for (cvm::StatisticId id : parse_stats(stats)) {
    const auto curve =
        cvm::power_curve(id, f, d, alpha, delta_max, settings);
    cvm::write_power_curve(
        curve, out_prefix + "_" + cvm::statistic_name(id) + ".dat");
  }
  return 0;
}

int cmd_are(int d, double alpha, const std::string& families,
            const std::string& output) {
  const auto fams = parse_families(families);
  const auto rows = cvm::are_table(fams, d, alpha);
  std::ostringstream os;
  os.precision(6);
  os << std::fixed;
  os << "# relative efficiency (% of best), d=" << d << " alpha=" << alpha
     << "\n";
  os << "# family best L L2 M M2 W\n";
  for (const auto& row : rows) {
    os << row.family << " " << row.best;
    for (const char* name : {"L", "L2", "M", "M2", "W"})
      os << " " << row.percent.at(name);
    os << "\n";
  }
  emit(os.str(), output);
  return 0;
}

int cmd_sample(const std::string& family, double theta, std::size_t n,
               std::size_t d, std::uint64_t seed, const std::string& output) {
  const auto data =
      cvm::sample(cvm::family_from_string(family), theta, n, d, seed);
  cvm::write_dataset(data, output);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rank-based Cramer-von Mises tests of multivariate "
               "independence"};
  app.require_subcommand(1);
  int threads = 1;
  app.add_option("--threads", threads,
                 "worker threads (computations are currently serial; the "
                 "flag is accepted for forward compatibility)");

  // test
  auto* test = app.add_subcommand("test", "run tests on a dataset");
  std::string input, stats = "B,L,W,M,T", method = "asymptotic";
  std::string output, cache;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  bool fail_on_reject = false;
  test->add_option("--input", input, "delimited dataset file")->required();
  test->add_option("--stats", stats, "comma list from B,L,W,M,T,L2,M2,T2");
  test->add_option("--alpha", alpha, "global level");
  test->add_option("--method", method, "asymptotic | finite-sample-mc");
  test->add_option("--seed", seed, "RNG seed (tie breaking, MC)");
  test->add_option("--output", output, "report file (default stdout)");
  test->add_option("--cache", cache, "critical-value cache file");
  test->add_flag("--fail-on-reject", fail_on_reject,
                 "exit 2 when any test rejects");

  // tables
  auto* tables = app.add_subcommand("tables", "critical-value tables");
  int d = 3;
  std::string t_stats = "B,L,W,M,T,L2,M2,T2", t_method = "spectral-mc";
  std::size_t reps = 100000, dm_grid = 128, sample_n = 100;
  tables->add_option("--d", d, "dimension (2..5)")
      ->check(CLI::Range(2, 5));
  tables->add_option("--alpha", alpha, "level");
  tables->add_option("--stats", t_stats, "statistics to tabulate");
  tables->add_option("--method", t_method,
                     "spectral-mc | inversion | finite-sample-mc");
  tables->add_option("--reps", reps, "MC replications");
  tables->add_option("--dm-grid", dm_grid, "grid size of the B sampler");
  tables->add_option("--n", sample_n, "sample size for finite-sample-mc");
  tables->add_option("--seed", seed, "RNG seed");
  tables->add_option("--output", output, "table file (default stdout)");
  tables->add_option("--cache", cache, "critical-value cache file");

  // power
  auto* power = app.add_subcommand("power", "local power curves");
  std::string family = "frank", p_stats = "L,M,W";
  double delta_max = 3.0;
  std::size_t points = 20, p_reps = 10000;
  std::string out_prefix = "power";
  power->add_option("--family", family, "copula family")->required();
  power->add_option("--d", d, "dimension");
  power->add_option("--stats", p_stats, "statistics to sweep");
  power->add_option("--alpha", alpha, "level");
  power->add_option("--delta-max", delta_max, "upper end of the drift grid");
  power->add_option("--points", points, "grid points");
  power->add_option("--reps", p_reps, "MC replications (B, T)");
  power->add_option("--seed", seed, "RNG seed");
  power->add_option("--output-prefix", out_prefix,
                    "curves written to <prefix>_<stat>.dat");

  // are
  auto* are = app.add_subcommand("are", "relative-efficiency table");
  std::string families = "gaussian,fgm,frank,clayton";
  are->add_option("--d", d, "dimension");
  are->add_option("--alpha", alpha, "level");
  are->add_option("--families", families, "comma list of families");
  are->add_option("--output", output, "table file (default stdout)");

  // sample
  auto* sample = app.add_subcommand("sample", "draw from a copula family");
  double theta = 0.0;
  std::size_t n = 100, dim = 2;
  std::string s_output = "sample.csv";
  sample->add_option("--family", family, "copula family")->required();
  sample->add_option("--theta,--rho", theta, "dependence parameter");
  sample->add_option("--n", n, "sample size");
  sample->add_option("--d", dim, "dimension");
  sample->add_option("--seed", seed, "RNG seed");
  sample->add_option("--output", s_output, "dataset file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*test)
      return cmd_test(input, stats, alpha, method, seed, output, cache,
                      fail_on_reject);
    if (*tables)
      return cmd_tables(d, alpha, t_stats, t_method, reps, dm_grid, sample_n,
                        seed, output, cache);
    if (*power)
      return cmd_power(family, d, p_stats, alpha, delta_max, points, p_reps,
                       seed, out_prefix);
    if (*are) return cmd_are(d, alpha, families, output);
    if (*sample) return cmd_sample(family, theta, n, dim, seed, s_output);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
