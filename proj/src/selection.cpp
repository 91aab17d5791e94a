#include "sbci/selection.hpp"

#include <algorithm>
#include <stdexcept>

namespace sbci::selection {

PeerId select_source_greedy(std::span<const UploadOffer> responders) {
  if (responders.empty())
    throw std::invalid_argument("no responders to select from");
  const UploadOffer* best = &responders[0];
  for (const UploadOffer& r : responders.subspan(1)) {
    if (r.sbci < best->sbci || (r.sbci == best->sbci && r.id < best->id))
      best = &r;
  }
  return best->id;
}

std::optional<PeerId> select_downloader_greedy(
    std::span<const Requester> requesters, ThresholdPolicy policy) {
  if (requesters.empty())
    throw std::invalid_argument("no requesters to select from");
  const Requester* best = nullptr;
  for (const Requester& r : requesters) {
    if (r.sbci < policy.threshold) continue;
    if (!best || r.sbci > best->sbci || (r.sbci == best->sbci && r.id < best->id))
      best = &r;
  }
  if (!best) return std::nullopt;
  return best->id;
}

std::vector<PeerId> build_downloader_preferences(
    std::span<const UploadOffer> offers) {
  if (offers.empty()) throw std::invalid_argument("no offers to rank");
  std::vector<UploadOffer> sorted(offers.begin(), offers.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const UploadOffer& a, const UploadOffer& b) {
              if (a.bandwidth != b.bandwidth) return a.bandwidth > b.bandwidth;
              if (a.sbci != b.sbci) return a.sbci < b.sbci;
              return a.id < b.id;
            });
  std::vector<PeerId> order;
  order.reserve(sorted.size());
  for (const UploadOffer& o : sorted) order.push_back(o.id);
  return order;
}

std::vector<PeerId> build_uploader_preferences(
    std::span<const Requester> requesters, ThresholdPolicy policy) {
  std::vector<Requester> kept;
  for (const Requester& r : requesters)
    if (r.sbci >= policy.threshold) kept.push_back(r);
  std::sort(kept.begin(), kept.end(), [](const Requester& a, const Requester& b) {
    if (a.sbci != b.sbci) return a.sbci > b.sbci;
    return a.id < b.id;
  });
  std::vector<PeerId> order;
  order.reserve(kept.size());
  for (const Requester& r : kept) order.push_back(r.id);
  return order;
}

std::vector<std::pair<PeerId, PeerId>> resource_manager_pair(
    const std::vector<matching::PreferenceList>& uploader_prefs,
    const std::vector<matching::PreferenceList>& downloader_prefs) {
  matching::PreferenceProfile profile;
  profile.proposers = downloader_prefs;
  profile.acceptors = uploader_prefs;
  const matching::Matching m = matching::stable_match(profile);
  std::vector<std::pair<PeerId, PeerId>> pairs;
  pairs.reserve(m.pairs.size());
  for (const auto& [downloader, uploader] : m.pairs)
    pairs.emplace_back(uploader, downloader);
  std::sort(pairs.begin(), pairs.end());
  return pairs;
}

}  // namespace sbci::selection
