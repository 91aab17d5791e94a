#pragma once

// Test-only oracles and generators. The reference implementations here are
// deliberately straight-line and share no code with the library paths they
// check.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <vector>

#include "sbci/core.hpp"
#include "sbci/matching.hpp"
#include "sbci/rng.hpp"

namespace support {

// ---------------------------------------------------------------------------
// Straight-line recomputation of the per-epoch index update. Keeps its own
// lifetime totals. Plain ascending loops throughout.
inline Eigen::VectorXd reference_epoch_update(const Eigen::MatrixXd& shares,
                                              const Eigen::VectorXd& x,
                                              std::vector<double>& totals,
                                              double alpha) {
  const Eigen::Index n = x.size();
  Eigen::VectorXd next(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double up_score = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) up_score += shares(i, j) * x(j);
    double up_raw = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) up_raw += shares(i, j);
    double down_score = 0.0;
    double down_raw = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      down_score += shares(j, i) * x(j);
      down_raw += shares(j, i);
    }
    const double activity = up_score + down_raw;
    if (activity == 0.0) {
      next(i) = x(i);
      continue;
    }
    const double delta = up_raw + down_raw;
    const double beta = delta / (totals[static_cast<std::size_t>(i)] + delta);
    totals[static_cast<std::size_t>(i)] += delta;
    const double denom = alpha * down_score + (1.0 - alpha) * down_raw;
    next(i) = (1.0 - beta) * x(i) + beta * (up_score / (up_score + denom));
  }
  return next;
}

// ---------------------------------------------------------------------------
// Exhaustive stable-matching oracle for small profiles.

struct BruteForceResult {
  std::vector<std::vector<std::pair<int, int>>> stable;  // every stable matching
  std::vector<std::pair<int, int>> proposer_optimal;
  bool optimal_unique = false;
};

namespace detail {

constexpr int kNoRank = std::numeric_limits<int>::max();

struct RankedProfile {
  std::vector<int> prop_ids, acc_ids;
  std::vector<std::vector<int>> prop_rank;  // [p][a]
  std::vector<std::vector<int>> acc_rank;   // [a][p]
};

inline RankedProfile rank_profile(const sbci::matching::PreferenceProfile& profile) {
  RankedProfile r;
  std::map<int, int> pidx, aidx;
  for (const auto& p : profile.proposers) {
    pidx[p.id] = static_cast<int>(r.prop_ids.size());
    r.prop_ids.push_back(p.id);
  }
  for (const auto& a : profile.acceptors) {
    aidx[a.id] = static_cast<int>(r.acc_ids.size());
    r.acc_ids.push_back(a.id);
  }
  r.prop_rank.assign(r.prop_ids.size(), std::vector<int>(r.acc_ids.size(), kNoRank));
  r.acc_rank.assign(r.acc_ids.size(), std::vector<int>(r.prop_ids.size(), kNoRank));
  for (std::size_t p = 0; p < profile.proposers.size(); ++p)
    for (std::size_t pos = 0; pos < profile.proposers[p].ranking.size(); ++pos)
      r.prop_rank[p][aidx.at(profile.proposers[p].ranking[pos])] =
          static_cast<int>(pos);
  for (std::size_t a = 0; a < profile.acceptors.size(); ++a)
    for (std::size_t pos = 0; pos < profile.acceptors[a].ranking.size(); ++pos)
      r.acc_rank[a][pidx.at(profile.acceptors[a].ranking[pos])] =
          static_cast<int>(pos);
  return r;
}

inline bool brute_stable(const RankedProfile& r, const std::vector<int>& partner) {
  const int np = static_cast<int>(r.prop_ids.size());
  const int na = static_cast<int>(r.acc_ids.size());
  std::vector<int> holder(na, -1);
  for (int p = 0; p < np; ++p)
    if (partner[p] >= 0) holder[partner[p]] = p;
  for (int p = 0; p < np; ++p) {
    for (int a = 0; a < na; ++a) {
      if (r.prop_rank[p][a] == kNoRank || r.acc_rank[a][p] == kNoRank) continue;
      const bool p_better =
          partner[p] < 0 || r.prop_rank[p][a] < r.prop_rank[p][partner[p]];
      const bool a_better =
          holder[a] < 0 || r.acc_rank[a][p] < r.acc_rank[a][holder[a]];
      if (p_better && a_better) return false;
    }
  }
  return true;
}

inline void enumerate(const RankedProfile& r, std::vector<int>& partner,
                      std::vector<bool>& used, std::size_t p,
                      BruteForceResult& out) {
  if (p == partner.size()) {
    if (brute_stable(r, partner)) {
      std::vector<std::pair<int, int>> pairs;
      for (std::size_t q = 0; q < partner.size(); ++q)
        if (partner[q] >= 0)
          pairs.emplace_back(r.prop_ids[q], r.acc_ids[partner[q]]);
      std::sort(pairs.begin(), pairs.end());
      out.stable.push_back(std::move(pairs));
    }
    return;
  }
  partner[p] = -1;
  enumerate(r, partner, used, p + 1, out);
  for (std::size_t a = 0; a < r.acc_rank.size(); ++a) {
    if (used[a]) continue;
    if (r.prop_rank[p][a] == kNoRank || r.acc_rank[a][p] == kNoRank) continue;
    partner[p] = static_cast<int>(a);
    used[a] = true;
    enumerate(r, partner, used, p + 1, out);
    used[a] = false;
    partner[p] = -1;
  }
}

}  // namespace detail

// Every stable matching plus the proposer-optimal one (each proposer gets
// its weakly best stable partner). Sizes beyond ~6 a side get slow.
inline BruteForceResult brute_force_stable(
    const sbci::matching::PreferenceProfile& profile) {
  const auto ranked = detail::rank_profile(profile);
  BruteForceResult out;
  std::vector<int> partner(ranked.prop_ids.size(), -1);
  std::vector<bool> used(ranked.acc_ids.size(), false);
  detail::enumerate(ranked, partner, used, 0, out);

  // Best achievable rank per proposer over all stable matchings; the
  // proposer-optimal matching attains all of them at once.
  const int np = static_cast<int>(ranked.prop_ids.size());
  std::vector<int> best(np, detail::kNoRank);
  for (const auto& m : out.stable) {
    std::vector<int> rank_of(np, detail::kNoRank);
    for (const auto& [pid, aid] : m) {
      const int p = static_cast<int>(
          std::find(ranked.prop_ids.begin(), ranked.prop_ids.end(), pid) -
          ranked.prop_ids.begin());
      const int a = static_cast<int>(
          std::find(ranked.acc_ids.begin(), ranked.acc_ids.end(), aid) -
          ranked.acc_ids.begin());
      rank_of[p] = ranked.prop_rank[p][a];
    }
    for (int p = 0; p < np; ++p) best[p] = std::min(best[p], rank_of[p]);
  }
  int hits = 0;
  for (const auto& m : out.stable) {
    std::vector<int> rank_of(np, detail::kNoRank);
    for (const auto& [pid, aid] : m) {
      const int p = static_cast<int>(
          std::find(ranked.prop_ids.begin(), ranked.prop_ids.end(), pid) -
          ranked.prop_ids.begin());
      const int a = static_cast<int>(
          std::find(ranked.acc_ids.begin(), ranked.acc_ids.end(), aid) -
          ranked.acc_ids.begin());
      rank_of[p] = ranked.prop_rank[p][a];
    }
    if (rank_of == best) {
      out.proposer_optimal = m;
      ++hits;
    }
  }
  out.optimal_unique = hits == 1;
  return out;
}

// ---------------------------------------------------------------------------
// Random profile and share-matrix generators.

inline sbci::matching::PreferenceProfile random_profile(sbci::rng::Stream& rng,
                                                        int max_side,
                                                        bool complete_lists) {
  const int np = 1 + static_cast<int>(rng.next_below(max_side));
  const int na = 1 + static_cast<int>(rng.next_below(max_side));
  sbci::matching::PreferenceProfile profile;
  auto build_side = [&](int count, int base, int opposite_count,
                        int opposite_base) {
    std::vector<sbci::matching::PreferenceList> side;
    for (int k = 0; k < count; ++k) {
      std::vector<int> ranking(opposite_count);
      for (int j = 0; j < opposite_count; ++j) ranking[j] = opposite_base + j;
      for (int j = opposite_count - 1; j > 0; --j)
        std::swap(ranking[j],
                  ranking[rng.next_below(static_cast<std::uint64_t>(j) + 1)]);
      if (!complete_lists)
        ranking.resize(rng.next_below(opposite_count + 1));
      side.push_back({base + k, std::move(ranking)});
    }
    return side;
  };
  profile.proposers = build_side(np, 0, na, 100);
  profile.acceptors = build_side(na, 100, np, 0);
  return profile;
}

// Zero-diagonal nonnegative matrix with integer amounts on random edges.
inline Eigen::MatrixXd random_share_matrix(int n, int max_edges,
                                           sbci::rng::Stream& rng) {
  Eigen::MatrixXd shares = Eigen::MatrixXd::Zero(n, n);
  if (n < 2) return shares;
  const int edges = static_cast<int>(rng.next_below(max_edges + 1));
  for (int e = 0; e < edges; ++e) {
    const int i = static_cast<int>(rng.next_below(n));
    int j = static_cast<int>(rng.next_below(n));
    if (j == i) j = (j + 1) % n;
    shares(i, j) += static_cast<double>(rng.uniform_int(1, 255));
  }
  return shares;
}

// Balanced matrix: per-peer upload equals download. Built from random
// cycles; `cover_all` threads one cycle through every peer.
inline Eigen::MatrixXd random_balanced_matrix(int n, int cycles,
                                              sbci::rng::Stream& rng,
                                              bool cover_all) {
  Eigen::MatrixXd shares = Eigen::MatrixXd::Zero(n, n);
  auto add_cycle = [&](const std::vector<int>& nodes) {
    const double amount = static_cast<double>(rng.uniform_int(1, 255));
    for (std::size_t k = 0; k < nodes.size(); ++k)
      shares(nodes[k], nodes[(k + 1) % nodes.size()]) += amount;
  };
  std::vector<int> everyone(n);
  for (int i = 0; i < n; ++i) everyone[i] = i;
  if (cover_all && n >= 2) {
    for (int j = n - 1; j > 0; --j)
      std::swap(everyone[j],
                everyone[rng.next_below(static_cast<std::uint64_t>(j) + 1)]);
    add_cycle(everyone);
  }
  for (int c = 0; c < cycles && n >= 2; ++c) {
    const int len = 2 + static_cast<int>(rng.next_below(std::min(n, 5) - 1));
    std::vector<int> nodes(everyone);
    for (int j = 0; j < len; ++j) {
      const int pick =
          j + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n - j)));
      std::swap(nodes[j], nodes[pick]);
    }
    nodes.resize(len);
    add_cycle(nodes);
  }
  return shares;
}

}  // namespace support
