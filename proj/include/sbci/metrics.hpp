#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>

#include "sbci/core.hpp"

namespace sbci::metrics {

enum class PeerClass { cooperative = 0, free_rider = 1 };

// Lifetime uploaded and downloaded units per peer. Global sums are equal
// because every transfer credits one uploader and one downloader alike.
struct PeerTotals {
  Eigen::VectorXd upload;
  Eigen::VectorXd download;
};

// Screening outcomes keyed by (requester class, screener class). A request
// is counted once per round in `requests`; rejected ones additionally in
// `rejections`. Rounds with nobody to screen count only toward
// `total_requests`.
struct RejectionTally {
  std::array<std::array<std::uint64_t, 2>, 2> rejections{};
  std::array<std::array<std::uint64_t, 2>, 2> requests{};
  std::uint64_t total_requests = 0;

  std::uint64_t& rejected(PeerClass requester, PeerClass screener) {
    return rejections[static_cast<int>(requester)][static_cast<int>(screener)];
  }
  std::uint64_t& requested(PeerClass requester, PeerClass screener) {
    return requests[static_cast<int>(requester)][static_cast<int>(screener)];
  }
};

// Average absolute deviation of each peer's upload/download ratio from 1.
// Zero means perfectly balanced volume at every peer. Peers that never
// transacted contribute 0; a peer with uploads but no downloads
// contributes the capped term 1.
double aad(const PeerTotals& totals);

struct RejectionRate {
  double pct = 0.0;
  bool defined = false;  // false when no cooperative-vs-cooperative requests happened
};

// Percentage of cooperative peers' requests screened out by other
// cooperative peers. Free-rider rejections never enter either side.
RejectionRate cooperative_rejection_rate(const RejectionTally& tally);

// One `peer_id,class,upload,download` row per peer, ascending id, after a
// header line.
void export_scatter(std::ostream& out, const PeerTotals& totals,
                    std::span<const PeerClass> classes);

}  // namespace sbci::metrics
