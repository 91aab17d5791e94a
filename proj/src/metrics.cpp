#include "sbci/metrics.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "sbci/format.hpp"

namespace sbci::metrics {

double aad(const PeerTotals& totals) {
  const Eigen::Index n = totals.upload.size();
  if (totals.download.size() != n)
    throw std::invalid_argument("upload/download vectors differ in length");
  if (n == 0) return 0.0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double up = totals.upload(i);
    const double down = totals.download(i);
    if (down == 0.0) {
      acc += up == 0.0 ? 0.0 : 1.0;  // never transacted vs. capped ratio
      continue;
    }
    acc += std::abs(1.0 - up / down);
  }
  return acc / static_cast<double>(n);
}

RejectionRate cooperative_rejection_rate(const RejectionTally& tally) {
  const auto coop = static_cast<int>(PeerClass::cooperative);
  const std::uint64_t asked = tally.requests[coop][coop];
  if (asked == 0) return RejectionRate{0.0, false};
  const std::uint64_t turned_away = tally.rejections[coop][coop];
  return RejectionRate{100.0 * static_cast<double>(turned_away) /
                           static_cast<double>(asked),
                       true};
}

void export_scatter(std::ostream& out, const PeerTotals& totals,
                    std::span<const PeerClass> classes) {
  const Eigen::Index n = totals.upload.size();
  if (totals.download.size() != n ||
      static_cast<Eigen::Index>(classes.size()) != n)
    throw std::invalid_argument("scatter inputs differ in length");
  out << "peer_id,class,upload,download\n";
  for (Eigen::Index i = 0; i < n; ++i) {
    out << i << ','
        << (classes[i] == PeerClass::free_rider ? "free-rider" : "cooperative")
        << ',' << format_double(totals.upload(i)) << ','
        << format_double(totals.download(i)) << '\n';
  }
}

}  // namespace sbci::metrics
