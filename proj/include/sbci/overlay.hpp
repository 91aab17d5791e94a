#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <unordered_map>
#include <vector>

#include "sbci/core.hpp"

namespace sbci::overlay {

// Which peer keeps each peer's ledger. Total: every peer has exactly one
// index manager; a peer may manage several daughters, including itself.
// Real DHT routing is out of scope; lookup is a seeded hash.
struct ManagerAssignment {
  std::uint64_t seed = 0;
  std::vector<PeerId> peers;                    // current membership, ascending
  std::unordered_map<PeerId, PeerId> manager;   // daughter -> manager

  PeerId manager_of(PeerId peer) const;
  // Daughters grouped per manager, both levels in ascending id order.
  std::map<PeerId, std::vector<PeerId>> daughters_by_manager() const;
};

ManagerAssignment assign_managers(std::span<const PeerId> peer_ids,
                                  std::uint64_t seed);

// Churn rule: when `leaving` departs, every daughter it managed is handed
// to the next remaining peer in hash order and its own ledger entry is
// dropped. Indices of the handed-over daughters persist with the ledger.
void handle_departure(ManagerAssignment& assignment, PeerId leaving);

struct MessageCounters {
  std::uint64_t report_msgs = 0;  // transaction-value reports, 2 per transfer
  std::uint64_t query_msgs = 0;   // index fetches between managers
  std::uint64_t epoch = 0;
};

struct EpochOutcome {
  SbciVector indices;
  MessageCounters messages;
};

// One epoch of the distributed index plane: route each transfer's value to
// both parties' managers, fetch every counterpart index once per
// (daughter, counterpart) pair, then update each daughter from the
// previous-epoch vector. The returned vector is bit-identical to
// epoch_update on the aggregated share matrix. Requires the assignment to
// cover exactly peers 0..n-1 where n = x_prev.size().
EpochOutcome process_epoch(std::span<const Transfer> transfers,
                           const ManagerAssignment& assignment,
                           std::span<PeerLedger> ledgers,
                           const SbciVector& x_prev, Alpha alpha);

// Scalars persisted per manager: two per daughter, nothing else.
std::map<PeerId, std::size_t> storage_footprint(
    const ManagerAssignment& assignment, std::span<const PeerLedger> ledgers);

// Line-oriented epoch transaction log: `epoch,uploader,downloader,amount`.
// Amounts render in shortest round-trip decimal form, so a read-back is
// bit-exact.
struct LogEntry {
  std::uint64_t epoch = 0;
  PeerId uploader = 0;
  PeerId downloader = 0;
  double amount = 0.0;
};

void write_transaction_log(std::ostream& out, std::span<const LogEntry> entries);
std::vector<LogEntry> read_transaction_log(std::istream& in);

}  // namespace sbci::overlay
