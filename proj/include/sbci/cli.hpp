#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace sbci::cli {

struct Options {
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;        // overrides the config's seed
  std::optional<std::uint64_t> epoch_size;  // overrides the config's epoch_size
  unsigned jobs = 0;                        // 0 = hardware concurrency
};

// Run one experiment from a key=value config file. Writes scatter.csv,
// summary.csv, transactions.log, epochs.csv and config.effective under
// the output directory and prints the summary row. Returns 0 on success.
int cmd_run(const std::string& config_path, const Options& options,
            std::ostream& out, std::ostream& err);

// Run every cell of a sweep grid (cells execute in parallel) and write
// one summary row per cell to sweep.csv. Failed cells carry an error
// marker; any failure makes the exit status nonzero.
int cmd_sweep(const std::string& sweep_path, const Options& options,
              std::ostream& out, std::ostream& err);

// Replay a built-in 5-peer scenario through the manager overlay and diff
// the resulting indices against their known values. Names: fig1-epoch0,
// fig1-epoch1.
int cmd_verify(const std::string& example_name, std::ostream& out,
               std::ostream& err);

}  // namespace sbci::cli
