#include "sbci/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sbci/selection.hpp"

namespace sbci::sim {

namespace {

constexpr std::uint64_t kNever = std::numeric_limits<std::uint64_t>::max();

// Draw streams per run seed. Workload covers requester, responder and
// amount draws; population fixes free-rider membership; the last one
// seeds manager placement.
enum Streams : std::uint64_t {
  kPopulationStream = 0,
  kWorkloadStream = 1,
  kOverlayStream = 2
};

std::size_t ceil_fraction(double fraction, std::size_t count) {
  // Nudge below the exact product so 0.1 * 100 style draws stay at the
  // intended integer instead of spilling one past it.
  const double raw = fraction * static_cast<double>(count) - 1e-9;
  const auto want = static_cast<std::size_t>(std::ceil(std::max(raw, 0.0)));
  return std::clamp<std::size_t>(want, 1, count);
}

std::vector<PeerId> shuffled_ids(int n, rng::Stream& rng) {
  std::vector<PeerId> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int i = n - 1; i > 0; --i)
    std::swap(order[i], order[rng.next_below(static_cast<std::uint64_t>(i) + 1)]);
  return order;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (n_peers < 1) throw std::invalid_argument("n_peers must be at least 1");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("alpha must lie in (0, 1)");
  if (total_transactions < 1)
    throw std::invalid_argument("total_transactions must be at least 1");
  if (!(responder_fraction > 0.0 && responder_fraction <= 1.0))
    throw std::invalid_argument("responder_fraction must lie in (0, 1]");
  if (resource_min < 1)
    throw std::invalid_argument("resource_min must be at least 1");
  if (resource_max < resource_min)
    throw std::invalid_argument("resource_max must be at least resource_min");
  if (!(fr_fraction >= 0.0 && fr_fraction <= 1.0))
    throw std::invalid_argument("fr_fraction must lie in [0, 1]");
  if (epoch_size < 1)
    throw std::invalid_argument("epoch_size must be at least 1");
}

BehaviorSchedule BehaviorSchedule::make(Model model, int n_peers,
                                        double fr_fraction,
                                        std::uint64_t total_transactions,
                                        rng::Stream& population) {
  if (n_peers < 1) throw std::invalid_argument("n_peers must be at least 1");
  if (!(fr_fraction >= 0.0 && fr_fraction <= 1.0))
    throw std::invalid_argument("fr_fraction must lie in [0, 1]");
  const std::vector<PeerId> order = shuffled_ids(n_peers, population);

  BehaviorSchedule schedule;
  schedule.convert_slot_.assign(n_peers, kNever);
  switch (model) {
    case Model::simple: {
      const int quota = static_cast<int>(fr_fraction * n_peers + 0.5);
      for (int k = 0; k < quota; ++k) schedule.convert_slot_[order[k]] = 0;
      break;
    }
    case Model::adaptive: {
      const int quota = static_cast<int>(fr_fraction * n_peers + 0.5);
      const int immediate = (quota + 1) / 2;
      for (int k = 0; k < immediate; ++k) schedule.convert_slot_[order[k]] = 0;
      for (int k = immediate; k < quota; ++k)
        schedule.convert_slot_[order[k]] = total_transactions / 2;
      break;
    }
    case Model::extreme: {
      // Tranche t holds the t-th tenth of the shuffle and converts once
      // t eighths of the budget have completed; tranches 8 and 9 never do.
      for (int k = 0; k < n_peers; ++k) {
        const int tranche = static_cast<int>(
            (static_cast<std::int64_t>(k) * 10) / n_peers);
        if (tranche <= 7)
          schedule.convert_slot_[order[k]] =
              total_transactions * static_cast<std::uint64_t>(tranche) / 8;
      }
      break;
    }
  }
  return schedule;
}

std::vector<double> make_bandwidths(Bandwidth model, int n_peers,
                                    int resource_max) {
  if (n_peers < 1) throw std::invalid_argument("n_peers must be at least 1");
  std::vector<double> bw(n_peers, 0.0);
  switch (model) {
    case Bandwidth::uniform:
      std::fill(bw.begin(), bw.end(), static_cast<double>(resource_max));
      break;
    case Bandwidth::type1:
      for (int p = 0; p < n_peers; ++p)
        bw[p] = p < (n_peers + 1) / 2 ? 10.0 : 20.0;
      break;
    case Bandwidth::type2:
      for (int p = 0; p < n_peers; ++p)
        bw[p] = 10.0 * (1 + (static_cast<std::int64_t>(p) * 10) / n_peers);
      break;
  }
  return bw;
}

int draw_resource_size(rng::Stream& rng, int resource_min, int resource_max) {
  if (resource_min < 1 || resource_max < resource_min)
    throw std::invalid_argument("bad resource size range");
  return rng.uniform_int(resource_min, resource_max);
}

std::vector<PeerId> sample_responders(std::span<const PeerId> eligible,
                                      double fraction, rng::Stream& rng) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw std::invalid_argument("responder fraction must lie in (0, 1]");
  if (eligible.empty()) return {};
  const std::size_t want = ceil_fraction(fraction, eligible.size());
  std::vector<PeerId> pool(eligible.begin(), eligible.end());
  for (std::size_t k = 0; k < want; ++k)
    std::swap(pool[k], pool[k + rng.next_below(pool.size() - k)]);
  pool.resize(want);
  return pool;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const int n = config.n_peers;
  const Alpha alpha(config.alpha);
  const double threshold = alpha.initial_index();
  const auto coop = metrics::PeerClass::cooperative;

  auto population = rng::derive_stream(config.seed, kPopulationStream);
  auto workload = rng::derive_stream(config.seed, kWorkloadStream);
  const auto schedule = BehaviorSchedule::make(
      config.model, n, config.fr_fraction, config.total_transactions,
      population);
  const auto bandwidths =
      make_bandwidths(config.bandwidth, n, config.resource_max);

  std::vector<PeerId> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  const auto assignment =
      overlay::assign_managers(ids, rng::derive_seed(config.seed, kOverlayStream));

  SbciVector x = init_indices(n, alpha);
  std::vector<PeerLedger> ledgers(n, PeerLedger{threshold, 0.0});

  ExperimentResult res;
  res.totals.upload = Eigen::VectorXd::Zero(n);
  res.totals.download = Eigen::VectorXd::Zero(n);

  std::vector<Transfer> pending;
  std::uint64_t slot = 0;
  std::uint64_t epoch = 0;
  std::uint64_t epoch_transfers = 0;
  std::uint64_t epoch_rejections = 0;

  auto flush_epoch = [&] {
    auto outcome = overlay::process_epoch(pending, assignment, ledgers, x, alpha);
    x = std::move(outcome.indices);
    outcome.messages.epoch = epoch;
    res.messages_total.report_msgs += outcome.messages.report_msgs;
    res.messages_total.query_msgs += outcome.messages.query_msgs;
    EpochReport report;
    report.epoch = epoch;
    report.transfers = epoch_transfers;
    report.rejections = epoch_rejections;
    report.messages = outcome.messages;
    report.aad = metrics::aad(res.totals);
    report.coop_rejection_pct = metrics::cooperative_rejection_rate(res.tally).pct;
    res.epochs.push_back(report);
    pending.clear();
    epoch_transfers = 0;
    epoch_rejections = 0;
    ++epoch;
  };

  auto record_transfer = [&](PeerId uploader, PeerId downloader, double amount) {
    if (x(downloader) == 0.0) ++res.zero_index_transfers;
    pending.push_back(Transfer{uploader, downloader, amount});
    res.log.push_back(overlay::LogEntry{epoch, uploader, downloader, amount});
    res.totals.upload(uploader) += amount;
    res.totals.download(downloader) += amount;
    ++res.transfers;
    ++epoch_transfers;
  };

  auto cooperative_except = [&](std::uint64_t at_slot,
                                std::span<const PeerId> excluded) {
    std::vector<PeerId> out;
    out.reserve(n);
    for (PeerId p = 0; p < n; ++p) {
      if (schedule.free_riding(p, at_slot)) continue;
      if (std::find(excluded.begin(), excluded.end(), p) != excluded.end())
        continue;
      out.push_back(p);
    }
    return out;
  };

  if (config.policy == Policy::greedy) {
    while (slot < config.total_transactions) {
      const auto requester = static_cast<PeerId>(workload.next_below(n));
      const auto req_class = schedule.class_at(requester, slot);
      const PeerId self[] = {requester};
      const auto eligible = cooperative_except(slot, self);
      const auto responders =
          sample_responders(eligible, config.responder_fraction, workload);
      ++res.tally.total_requests;
      if (responders.empty()) {
        ++res.unserved;
      } else {
        ++res.tally.requested(req_class, coop);
        if (x(requester) < threshold) {
          ++res.tally.rejected(req_class, coop);
          ++epoch_rejections;
        } else {
          std::vector<selection::UploadOffer> offers;
          offers.reserve(responders.size());
          for (PeerId p : responders)
            offers.push_back({p, x(p), bandwidths[p]});
          const PeerId source = selection::select_source_greedy(offers);
          const int amount = draw_resource_size(workload, config.resource_min,
                                                config.resource_max);
          record_transfer(source, requester, static_cast<double>(amount));
        }
      }
      ++slot;
      if (slot % config.epoch_size == 0) flush_epoch();
    }
  } else {
    // Pairing rounds: a batch of requesters and a batch of responders meet
    // at the resource manager. Batches never straddle an epoch boundary.
    while (slot < config.total_transactions) {
      const std::uint64_t room = std::min(
          config.epoch_size - slot % config.epoch_size,
          config.total_transactions - slot);
      const std::uint64_t batch =
          std::min<std::uint64_t>(ceil_fraction(config.responder_fraction, n), room);
      auto order = shuffled_ids(n, workload);
      order.resize(batch);
      const auto& requesters = order;

      const auto eligible = cooperative_except(slot, requesters);
      const auto responders =
          sample_responders(eligible, config.responder_fraction, workload);
      res.tally.total_requests += batch;
      if (responders.empty()) {
        res.unserved += batch;
      } else {
        std::vector<selection::Requester> admissible;
        for (PeerId r : requesters) {
          const auto req_class = schedule.class_at(r, slot);
          ++res.tally.requested(req_class, coop);
          if (x(r) < threshold) {
            ++res.tally.rejected(req_class, coop);
            ++epoch_rejections;
          } else {
            admissible.push_back({r, x(r)});
          }
        }
        std::vector<selection::UploadOffer> offers;
        offers.reserve(responders.size());
        for (PeerId p : responders) offers.push_back({p, x(p), bandwidths[p]});

        std::vector<matching::PreferenceList> uploader_prefs;
        uploader_prefs.reserve(offers.size());
        const auto wish =
            selection::build_uploader_preferences(admissible, {threshold});
        for (const auto& offer : offers)
          uploader_prefs.push_back({offer.id, wish});
        std::vector<matching::PreferenceList> downloader_prefs;
        downloader_prefs.reserve(admissible.size());
        const auto ranking = selection::build_downloader_preferences(offers);
        for (const auto& req : admissible)
          downloader_prefs.push_back({req.id, ranking});

        const auto pairs =
            selection::resource_manager_pair(uploader_prefs, downloader_prefs);
        for (const auto& [uploader, downloader] : pairs) {
          const int drawn = draw_resource_size(workload, config.resource_min,
                                               config.resource_max);
          record_transfer(uploader, downloader,
                          std::min(static_cast<double>(drawn), bandwidths[uploader]));
        }
        res.unserved += admissible.size() - pairs.size();
      }
      slot += batch;
      if (slot % config.epoch_size == 0) flush_epoch();
    }
  }
  if (slot % config.epoch_size != 0) flush_epoch();

  res.indices = std::move(x);
  res.ledgers = std::move(ledgers);
  res.final_class.reserve(n);
  for (PeerId p = 0; p < n; ++p)
    res.final_class.push_back(schedule.class_at(p, config.total_transactions));
  return res;
}

const char* to_string(Model model) {
  switch (model) {
    case Model::simple: return "simple";
    case Model::adaptive: return "adaptive";
    case Model::extreme: return "extreme";
  }
  return "?";
}

const char* to_string(Bandwidth bandwidth) {
  switch (bandwidth) {
    case Bandwidth::uniform: return "uniform";
    case Bandwidth::type1: return "type1";
    case Bandwidth::type2: return "type2";
  }
  return "?";
}

const char* to_string(Policy policy) {
  switch (policy) {
    case Policy::greedy: return "greedy";
    case Policy::stable_marriage: return "stable-marriage";
  }
  return "?";
}

}  // namespace sbci::sim
