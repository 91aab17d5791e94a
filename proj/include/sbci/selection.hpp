#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sbci/core.hpp"
#include "sbci/matching.hpp"

namespace sbci::selection {

// Admission cutoff: requesters with an index strictly below `threshold`
// are turned away. A fresh peer sits exactly at alpha/(1+alpha) and is
// therefore admissible.
struct ThresholdPolicy {
  double threshold = 0.0;
};

struct UploadOffer {
  PeerId id = 0;
  double sbci = 0.0;
  double bandwidth = 0.0;  // units per epoch, > 0
};

struct Requester {
  PeerId id = 0;
  double sbci = 0.0;
};

// Cheapest source to download from: minimum index, ties to the lowest id.
PeerId select_source_greedy(std::span<const UploadOffer> responders);

// Most deserving requester at or above the threshold; empty when every
// requester falls below it (reject all).
std::optional<PeerId> select_downloader_greedy(
    std::span<const Requester> requesters, ThresholdPolicy policy);

// Downloader's ranking over uploaders: higher bandwidth first, then the
// cheaper (lower) index, then the lower id.
std::vector<PeerId> build_downloader_preferences(
    std::span<const UploadOffer> offers);

// Uploader's ranking over requesters: below-threshold peers dropped, the
// rest by descending index, ties to the lower id. May be empty.
std::vector<PeerId> build_uploader_preferences(
    std::span<const Requester> requesters, ThresholdPolicy policy);

// Pair uploaders with downloaders at the resource manager. Downloaders
// propose, so the pairing is the downloader-optimal stable matching.
// Returns (uploader, downloader) pairs sorted by uploader id.
std::vector<std::pair<PeerId, PeerId>> resource_manager_pair(
    const std::vector<matching::PreferenceList>& uploader_prefs,
    const std::vector<matching::PreferenceList>& downloader_prefs);

}  // namespace sbci::selection
