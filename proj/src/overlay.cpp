#include "sbci/overlay.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "sbci/format.hpp"
#include "sbci/rng.hpp"

namespace sbci::overlay {

namespace {

std::uint64_t peer_hash(PeerId peer, std::uint64_t seed) {
  return rng::splitmix64(rng::splitmix64(seed) ^
                         static_cast<std::uint64_t>(peer));
}

}  // namespace

PeerId ManagerAssignment::manager_of(PeerId peer) const {
  auto it = manager.find(peer);
  if (it == manager.end())
    throw std::invalid_argument("peer has no index manager");
  return it->second;
}

std::map<PeerId, std::vector<PeerId>> ManagerAssignment::daughters_by_manager()
    const {
  std::map<PeerId, std::vector<PeerId>> grouped;
  for (const auto& [daughter, mgr] : manager) grouped[mgr].push_back(daughter);
  for (auto& [mgr, daughters] : grouped)
    std::sort(daughters.begin(), daughters.end());
  return grouped;
}

ManagerAssignment assign_managers(std::span<const PeerId> peer_ids,
                                  std::uint64_t seed) {
  if (peer_ids.empty()) throw std::invalid_argument("no peers to assign");
  ManagerAssignment out;
  out.seed = seed;
  out.peers.assign(peer_ids.begin(), peer_ids.end());
  std::sort(out.peers.begin(), out.peers.end());
  if (std::adjacent_find(out.peers.begin(), out.peers.end()) != out.peers.end())
    throw std::invalid_argument("duplicate peer id");
  const std::uint64_t n = out.peers.size();
  for (PeerId peer : out.peers)
    out.manager.emplace(peer, out.peers[peer_hash(peer, seed) % n]);
  return out;
}

void handle_departure(ManagerAssignment& assignment, PeerId leaving) {
  auto pos = std::find(assignment.peers.begin(), assignment.peers.end(), leaving);
  if (pos == assignment.peers.end())
    throw std::invalid_argument("departing peer is not a member");
  assignment.peers.erase(pos);
  if (assignment.peers.empty()) {
    assignment.manager.clear();
    return;
  }
  // Successor in hash order among the remaining peers: smallest hash
  // strictly greater than the departed peer's, wrapping to the overall
  // smallest hash. Hash ties break to the lower id.
  const std::uint64_t key = peer_hash(leaving, assignment.seed);
  PeerId after = -1, lowest = -1;
  std::uint64_t after_hash = 0, lowest_hash = 0;
  for (PeerId peer : assignment.peers) {
    const std::uint64_t h = peer_hash(peer, assignment.seed);
    if (h > key && (after < 0 || h < after_hash || (h == after_hash && peer < after))) {
      after = peer;
      after_hash = h;
    }
    if (lowest < 0 || h < lowest_hash || (h == lowest_hash && peer < lowest)) {
      lowest = peer;
      lowest_hash = h;
    }
  }
  const PeerId successor = after >= 0 ? after : lowest;
  assignment.manager.erase(leaving);
  for (auto& [daughter, mgr] : assignment.manager)
    if (mgr == leaving) mgr = successor;
}

EpochOutcome process_epoch(std::span<const Transfer> transfers,
                           const ManagerAssignment& assignment,
                           std::span<PeerLedger> ledgers,
                           const SbciVector& x_prev, Alpha alpha) {
  const Eigen::Index n = x_prev.size();
  if (static_cast<Eigen::Index>(ledgers.size()) != n)
    throw std::invalid_argument("ledger list length does not match peer count");
  if (static_cast<Eigen::Index>(assignment.peers.size()) != n)
    throw std::invalid_argument("assignment does not cover the peer set");
  for (Eigen::Index i = 0; i < n; ++i)
    if (assignment.peers[i] != static_cast<PeerId>(i))
      throw std::invalid_argument("assignment peers must be 0..n-1");

  // Each side's value report travels to the counterpart's manager.
  MessageCounters messages;
  messages.report_msgs = 2 * static_cast<std::uint64_t>(transfers.size());

  // One index fetch per (daughter, distinct counterpart) pair this epoch.
  std::vector<std::set<PeerId>> counterparts(n);
  for (const Transfer& t : transfers) {
    if (t.uploader < 0 || t.uploader >= n || t.downloader < 0 ||
        t.downloader >= n)
      throw std::invalid_argument("transfer references unknown peer id");
    if (!(t.amount > 0.0))
      throw std::invalid_argument("transfer amount must be positive");
    counterparts[t.uploader].insert(t.downloader);
    counterparts[t.downloader].insert(t.uploader);
  }
  for (const auto& set : counterparts)
    messages.query_msgs += set.size();

  // Managers update their daughters from the previous-epoch vector; the
  // per-peer kernel is the same one epoch_update uses, so the plane stays
  // bit-identical to the batch computation.
  const SparseShareMatrix shares(n, transfers);
  SbciVector next(n);
  for (const auto& [mgr, daughters] : assignment.daughters_by_manager()) {
    for (PeerId daughter : daughters)
      next(daughter) =
          epoch_update_peer(daughter, shares, x_prev, ledgers[daughter], alpha);
  }
  return EpochOutcome{std::move(next), messages};
}

std::map<PeerId, std::size_t> storage_footprint(
    const ManagerAssignment& assignment, std::span<const PeerLedger> ledgers) {
  (void)ledgers;  // two scalars each, enforced at compile time
  std::map<PeerId, std::size_t> scalars;
  for (const auto& [mgr, daughters] : assignment.daughters_by_manager())
    scalars[mgr] = 2 * daughters.size();
  return scalars;
}

void write_transaction_log(std::ostream& out,
                           std::span<const LogEntry> entries) {
  for (const LogEntry& e : entries)
    out << e.epoch << ',' << e.uploader << ',' << e.downloader << ','
        << format_double(e.amount) << '\n';
}

std::vector<LogEntry> read_transaction_log(std::istream& in) {
  std::vector<LogEntry> entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string epoch, uploader, downloader, amount;
    if (!std::getline(fields, epoch, ',') ||
        !std::getline(fields, uploader, ',') ||
        !std::getline(fields, downloader, ',') ||
        !std::getline(fields, amount))
      throw std::runtime_error("malformed transaction log line " +
                               std::to_string(lineno));
    LogEntry e;
    double parsed = 0.0;
    try {
      e.epoch = std::stoull(epoch);
      e.uploader = std::stoi(uploader);
      e.downloader = std::stoi(downloader);
    } catch (const std::exception&) {
      throw std::runtime_error("malformed transaction log line " +
                               std::to_string(lineno));
    }
    if (!parse_double(amount, parsed))
      throw std::runtime_error("malformed transaction log line " +
                               std::to_string(lineno));
    e.amount = parsed;
    entries.push_back(e);
  }
  return entries;
}

}  // namespace sbci::overlay
