#include "sbci/cli.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>
#include <vector>

#include "sbci/config.hpp"
#include "sbci/format.hpp"
#include "sbci/metrics.hpp"
#include "sbci/sim.hpp"

namespace sbci::cli {

namespace {

constexpr const char* kSummaryHeader =
    "model,alpha,fr_fraction,aad,coop_rejection_pct,msgs_report,msgs_query";

std::string summary_row(const sim::ExperimentConfig& config,
                        const sim::ExperimentResult& result) {
  std::ostringstream row;
  row << sim::to_string(config.model) << ',' << format_double(config.alpha)
      << ',' << format_double(config.fr_fraction) << ','
      << format_double(metrics::aad(result.totals)) << ','
      << format_double(metrics::cooperative_rejection_rate(result.tally).pct)
      << ',' << result.messages_total.report_msgs << ','
      << result.messages_total.query_msgs;
  return row.str();
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << body;
}

std::string epochs_csv(const sim::ExperimentResult& result) {
  std::ostringstream out;
  out << "epoch,transfers,rejections,report_msgs,query_msgs,aad,"
         "coop_rejection_pct\n";
  for (const auto& e : result.epochs)
    out << e.epoch << ',' << e.transfers << ',' << e.rejections << ','
        << e.messages.report_msgs << ',' << e.messages.query_msgs << ','
        << format_double(e.aad) << ',' << format_double(e.coop_rejection_pct)
        << '\n';
  return out.str();
}

sim::ExperimentConfig load_config(const std::string& path,
                                  const Options& options) {
  sim::ExperimentConfig config = config::parse_config_file(path);
  if (options.seed) config.seed = *options.seed;
  if (options.epoch_size) config.epoch_size = *options.epoch_size;
  config.validate();
  return config;
}

struct Fig1Scenario {
  std::vector<Transfer> epoch0;
  std::vector<Transfer> epoch1;
  std::vector<double> x1;
  std::vector<double> x2;
};

Fig1Scenario fig1() {
  Fig1Scenario s;
  s.epoch0 = {{0, 1, 100}, {0, 2, 200}, {1, 4, 100}, {2, 1, 100},
              {2, 3, 200}, {3, 0, 100}, {4, 0, 200}, {4, 3, 100}};
  s.epoch1 = {{3, 0, 100}};
  s.x1 = {0.4737, 0.3103, 0.5745, 0.2308, 0.7297};
  s.x2 = {0.4060, 0.3103, 0.5745, 0.3846, 0.7297};
  return s;
}

bool diff_indices(std::ostream& out, const SbciVector& got,
                  const std::vector<double>& expected, double tolerance) {
  bool ok = true;
  for (Eigen::Index i = 0; i < got.size(); ++i) {
    const double diff = std::abs(got(i) - expected[static_cast<std::size_t>(i)]);
    const bool pass = diff <= tolerance;
    ok = ok && pass;
    out << "  peer " << i + 1 << ": expected "
        << format_double(expected[static_cast<std::size_t>(i)]) << " got "
        << format_double(got(i)) << " |diff| " << format_double(diff)
        << (pass ? "" : "  MISMATCH") << '\n';
  }
  return ok;
}

}  // namespace

int cmd_run(const std::string& config_path, const Options& options,
            std::ostream& out, std::ostream& err) {
  sim::ExperimentConfig config;
  try {
    config = load_config(config_path, options);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  try {
    const std::filesystem::path dir(options.out_dir);
    std::filesystem::create_directories(dir);
    const sim::ExperimentResult result = sim::run_experiment(config);

    std::ostringstream scatter;
    metrics::export_scatter(scatter, result.totals, result.final_class);
    write_file(dir / "scatter.csv", scatter.str());

    const std::string row = summary_row(config, result);
    write_file(dir / "summary.csv", std::string(kSummaryHeader) + "\n" + row + "\n");

    std::ostringstream log;
    overlay::write_transaction_log(log, result.log);
    write_file(dir / "transactions.log", log.str());

    write_file(dir / "epochs.csv", epochs_csv(result));
    write_file(dir / "config.effective", config::echo_config(config));

    out << kSummaryHeader << '\n' << row << '\n';
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int cmd_sweep(const std::string& sweep_path, const Options& options,
              std::ostream& out, std::ostream& err) {
  std::vector<sim::ExperimentConfig> cells;
  try {
    cells = config::expand_sweep(config::parse_sweep_file(sweep_path));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  std::vector<std::string> rows(cells.size());
  std::vector<char> failed(cells.size(), 0);
  std::atomic<std::size_t> cursor{0};
  unsigned jobs = options.jobs ? options.jobs : std::thread::hardware_concurrency();
  if (jobs == 0) jobs = 1;
  jobs = static_cast<unsigned>(
      std::min<std::size_t>(jobs, std::max<std::size_t>(cells.size(), 1)));

  auto worker = [&] {
    for (std::size_t k = cursor.fetch_add(1); k < cells.size();
         k = cursor.fetch_add(1)) {
      try {
        const sim::ExperimentResult result = sim::run_experiment(cells[k]);
        rows[k] = summary_row(cells[k], result);
      } catch (const std::exception& e) {
        rows[k] = std::string(sim::to_string(cells[k].model)) + ',' +
                  format_double(cells[k].alpha) + ',' +
                  format_double(cells[k].fr_fraction) + ",!error:" + e.what() +
                  ",,,";
        failed[k] = 1;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  try {
    const std::filesystem::path dir(options.out_dir);
    std::filesystem::create_directories(dir);
    std::ostringstream body;
    body << kSummaryHeader << '\n';
    for (const auto& row : rows) body << row << '\n';
    write_file(dir / "sweep.csv", body.str());
    out << "wrote " << cells.size() << " rows to "
        << (dir / "sweep.csv").string() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  for (const char f : failed)
    if (f) {
      err << "error: one or more sweep cells failed\n";
      return 1;
    }
  return 0;
}

int cmd_verify(const std::string& example_name, std::ostream& out,
               std::ostream& err) {
  if (example_name != "fig1-epoch0" && example_name != "fig1-epoch1") {
    err << "error: unknown example '" << example_name
        << "' (expected fig1-epoch0 or fig1-epoch1)\n";
    return 2;
  }
  const Fig1Scenario scenario = fig1();
  const Alpha alpha(0.9);
  const int n = 5;
  std::vector<PeerId> ids = {0, 1, 2, 3, 4};
  const auto assignment = overlay::assign_managers(ids, 0);
  std::vector<PeerLedger> ledgers(n, PeerLedger{alpha.initial_index(), 0.0});
  SbciVector x = init_indices(n, alpha);

  auto first = overlay::process_epoch(scenario.epoch0, assignment, ledgers, x, alpha);
  bool ok = true;
  if (example_name == "fig1-epoch0") {
    out << "indices after the first epoch:\n";
    ok = diff_indices(out, first.indices, scenario.x1, 1e-4);
  } else {
    const SparseShareMatrix shares(n, scenario.epoch1);
    const double beta1 = compute_beta(0, shares, first.indices, ledgers[0]);
    const double beta4 = compute_beta(3, shares, first.indices, ledgers[3]);
    auto second =
        overlay::process_epoch(scenario.epoch1, assignment, ledgers, first.indices, alpha);
    out << "indices after the second epoch:\n";
    ok = diff_indices(out, second.indices, scenario.x2, 1e-4);
    const bool b1 = std::abs(beta1 - 1.0 / 7.0) <= 1e-12;
    const bool b4 = std::abs(beta4 - 1.0 / 5.0) <= 1e-12;
    out << "  beta(peer 1) expected " << format_double(1.0 / 7.0) << " got "
        << format_double(beta1) << (b1 ? "" : "  MISMATCH") << '\n';
    out << "  beta(peer 4) expected " << format_double(1.0 / 5.0) << " got "
        << format_double(beta4) << (b4 ? "" : "  MISMATCH") << '\n';
    ok = ok && b1 && b4;
  }
  out << (ok ? "verified\n" : "mismatch\n");
  if (!ok) err << "error: " << example_name << " did not match\n";
  return ok ? 0 : 1;
}

}  // namespace sbci::cli
