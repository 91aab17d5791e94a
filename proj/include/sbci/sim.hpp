#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sbci/core.hpp"
#include "sbci/metrics.hpp"
#include "sbci/overlay.hpp"
#include "sbci/rng.hpp"

namespace sbci::sim {

enum class Model { simple, adaptive, extreme };
enum class Bandwidth { uniform, type1, type2 };
enum class Policy { greedy, stable_marriage };

struct ExperimentConfig {
  int n_peers = 1000;
  double alpha = 0.9;
  std::uint64_t total_transactions = 100'000;
  double responder_fraction = 0.1;
  int resource_min = 1;
  int resource_max = 255;
  Model model = Model::simple;
  double fr_fraction = 0.1;  // ignored by the extreme model
  Bandwidth bandwidth = Bandwidth::uniform;
  Policy policy = Policy::greedy;
  std::uint64_t epoch_size = 100;  // request slots per index update
  std::uint64_t seed = 1;

  void validate() const;  // throws std::invalid_argument naming the field
};

// When each peer stops sharing. Membership comes from a seeded shuffle so
// free-riding is uncorrelated with id-based bandwidth blocks.
//   simple   - a fixed fraction free-rides from the first request on
//   adaptive - half the quota from the start, the other half from the
//              halfway point of the request budget
//   extreme  - 10% tranches: one from the start, one more after every
//              completed eighth of the budget, 80% by the end
class BehaviorSchedule {
 public:
  static BehaviorSchedule make(Model model, int n_peers, double fr_fraction,
                               std::uint64_t total_transactions,
                               rng::Stream& population);

  bool free_riding(PeerId peer, std::uint64_t slot) const {
    return slot >= convert_slot_[peer];
  }
  // Free-riders from the very first request; these never upload at all.
  bool pure_free_rider(PeerId peer) const { return convert_slot_[peer] == 0; }
  metrics::PeerClass class_at(PeerId peer, std::uint64_t slot) const {
    return free_riding(peer, slot) ? metrics::PeerClass::free_rider
                                   : metrics::PeerClass::cooperative;
  }

 private:
  std::vector<std::uint64_t> convert_slot_;  // UINT64_MAX = always cooperative
};

// Upload bandwidth per peer, assigned in id blocks:
//   uniform - everyone at resource_max (no cap in practice)
//   type1   - first half 10 units, rest 20
//   type2   - deciles at 10, 20, ..., 100
std::vector<double> make_bandwidths(Bandwidth model, int n_peers,
                                    int resource_max);

// Requested transfer size: uniform integer in [resource_min, resource_max].
int draw_resource_size(rng::Stream& rng, int resource_min, int resource_max);

// Uniform sample without replacement of ceil(fraction * |eligible|) peers.
// The caller excludes the requester beforehand. Empty input yields an
// empty sample.
std::vector<PeerId> sample_responders(std::span<const PeerId> eligible,
                                      double fraction, rng::Stream& rng);

struct EpochReport {
  std::uint64_t epoch = 0;
  std::uint64_t transfers = 0;    // this epoch
  std::uint64_t rejections = 0;   // this epoch, all class pairs
  overlay::MessageCounters messages;
  double aad = 0.0;               // cumulative through this epoch
  double coop_rejection_pct = 0.0;
};

struct ExperimentResult {
  metrics::PeerTotals totals;
  SbciVector indices;
  std::vector<PeerLedger> ledgers;
  metrics::RejectionTally tally;
  std::vector<EpochReport> epochs;
  std::vector<overlay::LogEntry> log;
  overlay::MessageCounters messages_total;
  std::vector<metrics::PeerClass> final_class;
  std::uint64_t transfers = 0;
  std::uint64_t unserved = 0;  // requests with nobody able to respond or no partner
  // Transfers granted to a peer whose index was exactly 0 at selection
  // time. The threshold screen keeps this at zero; anything else is a bug.
  std::uint64_t zero_index_transfers = 0;
};

// Run one experiment: total_transactions request slots, each drawing a
// requester uniformly from all peers, sampling responders from the
// currently cooperative peers, screening at the alpha/(1+alpha) threshold
// and transferring per the configured policy. Indices update through the
// manager overlay every epoch_size slots. Fully deterministic per seed.
ExperimentResult run_experiment(const ExperimentConfig& config);

const char* to_string(Model model);
const char* to_string(Bandwidth bandwidth);
const char* to_string(Policy policy);

}  // namespace sbci::sim
