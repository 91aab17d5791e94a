#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "sbci/core.hpp"

namespace sbci::matching {

// Strict ordered ranking over the opposite side. Ids absent from the
// ranking are unacceptable to `id`.
struct PreferenceList {
  PeerId id = 0;
  std::vector<PeerId> ranking;
};

// Two-sided preference input. Lists may be partial and the sides may have
// unequal cardinality; unmatched peers simply wait for a later round.
struct PreferenceProfile {
  std::vector<PreferenceList> proposers;
  std::vector<PreferenceList> acceptors;
};

struct Matching {
  std::vector<std::pair<PeerId, PeerId>> pairs;  // (proposer, acceptor), by proposer
  std::vector<PeerId> unmatched_proposers;
  std::vector<PeerId> unmatched_acceptors;
};

struct MatchStats {
  std::size_t proposals = 0;
};

// Deferred-acceptance matching with the proposing side favored: the result
// is stable and every proposer gets its best partner over all stable
// matchings. Deterministic for a given input order. Throws
// std::invalid_argument on duplicate or unknown ids in the profile.
Matching stable_match(const PreferenceProfile& profile,
                      MatchStats* stats = nullptr);

// All blocking pairs of `m` under `profile`: mutually acceptable pairs
// where both peers strictly prefer each other over their assignment (or
// are unmatched). Empty result means `m` is stable.
std::vector<std::pair<PeerId, PeerId>> verify_stability(
    const PreferenceProfile& profile, const Matching& m);

}  // namespace sbci::matching
