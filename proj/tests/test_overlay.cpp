#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

#include "sbci/overlay.hpp"
#include "sbci/rng.hpp"
#include "support.hpp"

using namespace sbci;
using namespace sbci::overlay;

namespace {

std::vector<PeerId> iota_ids(int n) {
  std::vector<PeerId> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  return ids;
}

std::vector<Transfer> fig1_epoch0() {
  return {{0, 1, 100}, {0, 2, 200}, {1, 4, 100}, {2, 1, 100},
          {2, 3, 200}, {3, 0, 100}, {4, 0, 200}, {4, 3, 100}};
}

}  // namespace

TEST_CASE("assign_managers is deterministic and total") {
  const auto ids = iota_ids(50);
  const auto a = assign_managers(ids, 7);
  const auto b = assign_managers(ids, 7);
  CHECK(a.manager == b.manager);
  const auto c = assign_managers(ids, 8);
  CHECK(a.manager != c.manager);  // different seed, different placement
  for (PeerId p : ids) {
    const PeerId mgr = a.manager_of(p);
    CHECK(mgr >= 0);
    CHECK(mgr < 50);
  }
  std::size_t daughters = 0;
  for (const auto& [mgr, list] : a.daughters_by_manager())
    daughters += list.size();
  CHECK(daughters == 50);
}

TEST_CASE("a single peer manages itself") {
  const auto a = assign_managers(std::vector<PeerId>{0}, 123);
  CHECK(a.manager_of(0) == 0);
}

TEST_CASE("hashed assignment keeps the load logarithmic") {
  const auto ids = iota_ids(1000);
  const auto a = assign_managers(ids, 42);
  std::size_t heaviest = 0;
  for (const auto& [mgr, list] : a.daughters_by_manager())
    heaviest = std::max(heaviest, list.size());
  // Balls-into-bins baseline, frozen after measurement: 2 ln(1000) ~ 13.8.
  CHECK(heaviest <= static_cast<std::size_t>(2.0 * std::log(1000.0)));
}

TEST_CASE("departure hands daughters to the hash successor") {
  const auto ids = iota_ids(20);
  auto a = assign_managers(ids, 11);
  auto before = a.daughters_by_manager();
  PeerId heavy = before.begin()->first;
  for (const auto& [mgr, list] : before)
    if (list.size() > before[heavy].size()) heavy = mgr;

  auto moved = a;
  handle_departure(moved, heavy);
  CHECK(moved.peers.size() == 19);
  CHECK(moved.manager.count(heavy) == 0);
  std::set<PeerId> successors;
  for (PeerId d : before[heavy]) {
    if (d == heavy) continue;
    CHECK(moved.manager_of(d) != heavy);
    successors.insert(moved.manager_of(d));
  }
  CHECK(successors.size() <= 1);  // all hand to the same next manager
  // still total over the remaining peers
  std::size_t daughters = 0;
  for (const auto& [mgr, list] : moved.daughters_by_manager())
    daughters += list.size();
  CHECK(daughters == 19);

  auto again = a;
  handle_departure(again, heavy);
  CHECK(again.manager == moved.manager);
}

TEST_CASE("process_epoch reproduces the worked example") {
  const Alpha alpha(0.9);
  const auto assignment = assign_managers(iota_ids(5), 0);
  std::vector<PeerLedger> ledgers(5, PeerLedger{alpha.initial_index(), 0.0});
  SbciVector x = init_indices(5, alpha);

  const auto first = process_epoch(fig1_epoch0(), assignment, ledgers, x, alpha);
  const double x1[] = {0.4737, 0.3103, 0.5745, 0.2308, 0.7297};
  for (int i = 0; i < 5; ++i) CHECK(std::abs(first.indices(i) - x1[i]) < 1e-4);
  CHECK(first.messages.report_msgs == 16);

  const std::vector<Transfer> second = {{3, 0, 100}};
  const auto outcome =
      process_epoch(second, assignment, ledgers, first.indices, alpha);
  const double x2[] = {0.4060, 0.3103, 0.5745, 0.3846, 0.7297};
  for (int i = 0; i < 5; ++i)
    CHECK(std::abs(outcome.indices(i) - x2[i]) < 1e-4);
  CHECK(outcome.messages.report_msgs == 2);
  CHECK(outcome.messages.query_msgs == 2);
}

TEST_CASE("empty epoch changes nothing and sends nothing") {
  const Alpha alpha(0.6);
  const auto assignment = assign_managers(iota_ids(4), 1);
  std::vector<PeerLedger> ledgers(4, PeerLedger{0.3, 77.0});
  SbciVector x(4);
  x << 0.1, 0.2, 0.3, 0.4;
  const auto outcome =
      process_epoch(std::vector<Transfer>{}, assignment, ledgers, x, alpha);
  for (int i = 0; i < 4; ++i) {
    CHECK(outcome.indices(i) == x(i));
    CHECK(ledgers[i].total_transacted == 77.0);
  }
  CHECK(outcome.messages.report_msgs == 0);
  CHECK(outcome.messages.query_msgs == 0);
}

TEST_CASE("overlay indices equal the batch update bit for bit") {
  rng::Stream rng(888);
  for (int it = 0; it < 60; ++it) {
    const int n = 2 + static_cast<int>(rng.next_below(30));
    const Alpha alpha(0.9);
    const auto assignment = assign_managers(iota_ids(n), rng.next());
    std::vector<PeerLedger> overlay_ledgers(n, PeerLedger{alpha.initial_index(), 0.0});
    std::vector<PeerLedger> core_ledgers = overlay_ledgers;
    SbciVector x_overlay = init_indices(n, alpha);
    SbciVector x_core = x_overlay;
    for (int epoch = 0; epoch < 5; ++epoch) {
      std::vector<Transfer> transfers;
      const int count = static_cast<int>(rng.next_below(4 * n));
      for (int t = 0; t < count; ++t) {
        int i = static_cast<int>(rng.next_below(n));
        int j = static_cast<int>(rng.next_below(n));
        if (i == j) j = (j + 1) % n;
        transfers.push_back({i, j, static_cast<double>(rng.uniform_int(1, 255))});
      }
      const auto outcome =
          process_epoch(transfers, assignment, overlay_ledgers, x_overlay, alpha);
      x_overlay = outcome.indices;
      x_core = epoch_update(make_share_matrix(n, transfers), x_core,
                            core_ledgers, alpha);
      for (int i = 0; i < n; ++i) {
        CHECK(x_overlay(i) == x_core(i));
        CHECK(overlay_ledgers[i].total_transacted ==
              core_ledgers[i].total_transacted);
      }
      CHECK(outcome.messages.report_msgs == 2 * transfers.size());
      CHECK(outcome.messages.query_msgs <= 2 * transfers.size());
    }
  }
}

TEST_CASE("storage is two scalars per daughter") {
  ManagerAssignment a;
  a.peers = {0, 1, 2, 3};
  a.manager = {{0, 2}, {1, 2}, {2, 2}, {3, 3}};
  std::vector<PeerLedger> ledgers(4);
  const auto footprint = storage_footprint(a, ledgers);
  CHECK(footprint.at(2) == 6);
  CHECK(footprint.at(3) == 2);
  CHECK(footprint.count(0) == 0);  // no daughters, no state

  const auto big = assign_managers(iota_ids(1000), 5);
  std::vector<PeerLedger> big_ledgers(1000);
  std::size_t total = 0;
  for (const auto& [mgr, scalars] : storage_footprint(big, big_ledgers))
    total += scalars;
  CHECK(total == 2000);
}

TEST_CASE("transaction log round-trips bit-exactly") {
  std::vector<LogEntry> entries = {
      {0, 3, 0, 100.0},
      {1, 0, 4, 0.1},
      {2, 1, 2, 1.0 / 3.0},
      {7, 2, 1, 1e-9},
      {7, 4, 3, 254.99999999999997},
  };
  std::stringstream stream;
  write_transaction_log(stream, entries);
  const auto read = read_transaction_log(stream);
  REQUIRE(read.size() == entries.size());
  for (std::size_t k = 0; k < entries.size(); ++k) {
    CHECK(read[k].epoch == entries[k].epoch);
    CHECK(read[k].uploader == entries[k].uploader);
    CHECK(read[k].downloader == entries[k].downloader);
    CHECK(read[k].amount == entries[k].amount);
  }
  // a second write produces identical bytes
  std::stringstream second;
  write_transaction_log(second, read);
  CHECK(stream.str() == second.str());

  std::stringstream bad("1,2,3\n");
  CHECK_THROWS_AS(read_transaction_log(bad), std::runtime_error);
}

TEST_CASE("process_epoch validates its inputs") {
  const Alpha alpha(0.9);
  const auto assignment = assign_managers(iota_ids(3), 0);
  std::vector<PeerLedger> ledgers(3);
  const SbciVector x = init_indices(3, alpha);
  const std::vector<Transfer> unknown = {{0, 5, 10}};
  CHECK_THROWS_AS(process_epoch(unknown, assignment, ledgers, x, alpha),
                  std::invalid_argument);
  const std::vector<Transfer> nonpositive = {{0, 1, 0}};
  CHECK_THROWS_AS(process_epoch(nonpositive, assignment, ledgers, x, alpha),
                  std::invalid_argument);
}
