#include "sbci/matching.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace sbci::matching {

namespace {

constexpr int kUnacceptable = std::numeric_limits<int>::max();

std::unordered_map<PeerId, int> index_side(
    const std::vector<PreferenceList>& side, const char* what) {
  std::unordered_map<PeerId, int> index;
  index.reserve(side.size());
  for (int k = 0; k < static_cast<int>(side.size()); ++k) {
    if (!index.emplace(side[k].id, k).second)
      throw std::invalid_argument(std::string("duplicate id on ") + what);
  }
  return index;
}

// rank[k][opp] = position of opposite-side member `opp` in k's ranking,
// kUnacceptable when unlisted.
std::vector<std::vector<int>> rank_table(
    const std::vector<PreferenceList>& side,
    const std::unordered_map<PeerId, int>& opposite, const char* what) {
  std::vector<std::vector<int>> rank(side.size(),
                                     std::vector<int>(opposite.size(), kUnacceptable));
  for (std::size_t k = 0; k < side.size(); ++k) {
    for (std::size_t pos = 0; pos < side[k].ranking.size(); ++pos) {
      auto it = opposite.find(side[k].ranking[pos]);
      if (it == opposite.end())
        throw std::invalid_argument(std::string("unknown id in ") + what +
                                    " preference list");
      if (rank[k][it->second] != kUnacceptable)
        throw std::invalid_argument(std::string("duplicate entry in ") + what +
                                    " preference list");
      rank[k][it->second] = static_cast<int>(pos);
    }
  }
  return rank;
}

}  // namespace

Matching stable_match(const PreferenceProfile& profile, MatchStats* stats) {
  const auto& proposers = profile.proposers;
  const auto& acceptors = profile.acceptors;
  const auto prop_index = index_side(proposers, "proposer side");
  const auto acc_index = index_side(acceptors, "acceptor side");
  const auto acc_rank = rank_table(acceptors, prop_index, "acceptor");
  // Also validates proposer lists.
  rank_table(proposers, acc_index, "proposer");

  const int np = static_cast<int>(proposers.size());
  std::vector<int> next_choice(np, 0);
  std::vector<int> engaged_to(np, -1);             // proposer -> acceptor index
  std::vector<int> holds(acceptors.size(), -1);    // acceptor -> proposer index
  std::deque<int> free;
  for (int p = 0; p < np; ++p) free.push_back(p);

  std::size_t proposals = 0;
  while (!free.empty()) {
    const int p = free.front();
    const auto& wish = proposers[p].ranking;
    if (next_choice[p] >= static_cast<int>(wish.size())) {
      free.pop_front();  // exhausted, stays unmatched
      continue;
    }
    const int a = acc_index.at(wish[next_choice[p]++]);
    ++proposals;
    if (acc_rank[a][p] == kUnacceptable) continue;  // a never takes p
    const int rival = holds[a];
    if (rival < 0) {
      holds[a] = p;
      engaged_to[p] = a;
      free.pop_front();
    } else if (acc_rank[a][p] < acc_rank[a][rival]) {
      holds[a] = p;
      engaged_to[p] = a;
      free.pop_front();
      engaged_to[rival] = -1;
      free.push_back(rival);
    }
  }
  if (stats) stats->proposals = proposals;

  Matching result;
  for (int p = 0; p < np; ++p) {
    if (engaged_to[p] >= 0)
      result.pairs.emplace_back(proposers[p].id, acceptors[engaged_to[p]].id);
    else
      result.unmatched_proposers.push_back(proposers[p].id);
  }
  for (std::size_t a = 0; a < acceptors.size(); ++a)
    if (holds[a] < 0) result.unmatched_acceptors.push_back(acceptors[a].id);
  std::sort(result.pairs.begin(), result.pairs.end());
  std::sort(result.unmatched_proposers.begin(), result.unmatched_proposers.end());
  std::sort(result.unmatched_acceptors.begin(), result.unmatched_acceptors.end());
  return result;
}

std::vector<std::pair<PeerId, PeerId>> verify_stability(
    const PreferenceProfile& profile, const Matching& m) {
  const auto& proposers = profile.proposers;
  const auto& acceptors = profile.acceptors;
  const auto prop_index = index_side(proposers, "proposer side");
  const auto acc_index = index_side(acceptors, "acceptor side");
  const auto acc_rank = rank_table(acceptors, prop_index, "acceptor");
  const auto prop_rank = rank_table(proposers, acc_index, "proposer");

  std::vector<int> partner_of_prop(proposers.size(), -1);
  std::vector<int> partner_of_acc(acceptors.size(), -1);
  for (const auto& [pid, aid] : m.pairs) {
    auto pit = prop_index.find(pid);
    auto ait = acc_index.find(aid);
    if (pit == prop_index.end() || ait == acc_index.end())
      throw std::invalid_argument("matching references id outside profile");
    partner_of_prop[pit->second] = ait->second;
    partner_of_acc[ait->second] = pit->second;
  }

  std::vector<std::pair<PeerId, PeerId>> blocking;
  for (std::size_t p = 0; p < proposers.size(); ++p) {
    for (std::size_t a = 0; a < acceptors.size(); ++a) {
      if (prop_rank[p][a] == kUnacceptable || acc_rank[a][p] == kUnacceptable)
        continue;
      const int pa = partner_of_prop[p];
      const int ap = partner_of_acc[a];
      const bool p_wants = pa < 0 || prop_rank[p][a] < prop_rank[p][pa];
      const bool a_wants = ap < 0 || acc_rank[a][p] < acc_rank[a][ap];
      if (p_wants && a_wants)
        blocking.emplace_back(proposers[p].id, acceptors[a].id);
    }
  }
  std::sort(blocking.begin(), blocking.end());
  return blocking;
}

}  // namespace sbci::matching
