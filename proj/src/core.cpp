#include "sbci/core.hpp"

#include <map>
#include <utility>

namespace sbci {

namespace {

// Aggregate duplicate (uploader, downloader) cells in list order, so the
// sparse build sums exactly like repeated `+=` on a dense matrix.
std::vector<Eigen::Triplet<double>> merge_transfers(
    Eigen::Index n, std::span<const Transfer> transfers) {
  std::map<std::pair<PeerId, PeerId>, double> cells;
  for (const Transfer& t : transfers) {
    if (t.uploader < 0 || t.uploader >= n || t.downloader < 0 ||
        t.downloader >= n)
      throw std::invalid_argument("transfer references unknown peer id");
    if (t.uploader == t.downloader)
      throw std::invalid_argument("self-transfer is not allowed");
    if (!(t.amount > 0.0))
      throw std::invalid_argument("transfer amount must be positive");
    cells[{t.uploader, t.downloader}] += t.amount;
  }
  std::vector<Eigen::Triplet<double>> out;
  out.reserve(cells.size());
  for (const auto& [key, amount] : cells)
    out.emplace_back(key.first, key.second, amount);
  return out;
}

template <typename Shares>
double update_peer_impl(Eigen::Index i, const Shares& shares,
                        const SbciVector& x_prev, PeerLedger& ledger,
                        Alpha alpha) {
  const double beta = compute_beta(i, shares, x_prev, ledger);
  if (beta == 0.0) {
    ledger.sbci = x_prev(i);
    return x_prev(i);
  }
  const double up = upload_score(i, shares, x_prev);
  const double down = weighted_download_score(i, shares, x_prev, alpha);
  // beta > 0 requires upload_score > 0 or a raw download, and a raw
  // download forces down > 0, so this cannot trigger for valid shares.
  if (up + down == 0.0)
    throw std::logic_error("positive beta with zero epoch activity");
  ledger.total_transacted += upload_total(i, shares) + download_total(i, shares);
  const double next = (1.0 - beta) * x_prev(i) + beta * (up / (up + down));
  ledger.sbci = next;
  return next;
}

template <typename Shares>
SbciVector epoch_update_impl(const Shares& shares, const SbciVector& x_prev,
                             std::span<PeerLedger> ledgers, Alpha alpha) {
  const Eigen::Index n = x_prev.size();
  if (static_cast<Eigen::Index>(ledgers.size()) != n)
    throw std::invalid_argument("ledger list length does not match peer count");
  SbciVector next(n);
  for (Eigen::Index i = 0; i < n; ++i)
    next(i) = epoch_update_peer(i, shares, x_prev, ledgers[i], alpha);
  return next;
}

template <typename Shares>
double compute_beta_impl(Eigen::Index i, const Shares& shares,
                         const SbciVector& indices, const PeerLedger& ledger) {
  const double downloaded = download_total(i, shares);
  const double activity = upload_score(i, shares, indices) + downloaded;
  if (activity == 0.0) return 0.0;
  const double delta = upload_total(i, shares) + downloaded;
  return delta / (ledger.total_transacted + delta);
}

}  // namespace

SparseShareMatrix::SparseShareMatrix(Eigen::Index n,
                                     std::span<const Transfer> transfers)
    : uploads_(n, n), downloads_(n, n) {
  if (n < 1) throw std::invalid_argument("peer count must be at least 1");
  const auto cells = merge_transfers(n, transfers);
  uploads_.setFromTriplets(cells.begin(), cells.end());
  std::vector<Eigen::Triplet<double>> swapped;
  swapped.reserve(cells.size());
  for (const auto& c : cells) swapped.emplace_back(c.col(), c.row(), c.value());
  downloads_.setFromTriplets(swapped.begin(), swapped.end());
}

SbciVector init_indices(Eigen::Index n, Alpha alpha) {
  if (n < 1) throw std::invalid_argument("peer count must be at least 1");
  return SbciVector::Constant(n, alpha.initial_index());
}

double upload_score(Eigen::Index i, const SparseShareMatrix& shares,
                    const SbciVector& indices) {
  detail::check_dims(i, shares.size(), shares.size(), indices.size());
  double acc = 0.0;
  for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(
           shares.uploads(), i);
       it; ++it)
    acc += it.value() * indices(it.col());
  return acc;
}

double weighted_download_score(Eigen::Index i, const SparseShareMatrix& shares,
                               const SbciVector& indices, Alpha alpha) {
  detail::check_dims(i, shares.size(), shares.size(), indices.size());
  double scored = 0.0;
  double raw = 0.0;
  for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(
           shares.downloads(), i);
       it; ++it) {
    scored += it.value() * indices(it.col());
    raw += it.value();
  }
  return alpha.value() * scored + (1.0 - alpha.value()) * raw;
}

double upload_total(Eigen::Index i, const SparseShareMatrix& shares) {
  detail::check_dims(i, shares.size(), shares.size(), shares.size());
  double acc = 0.0;
  for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(
           shares.uploads(), i);
       it; ++it)
    acc += it.value();
  return acc;
}

double download_total(Eigen::Index i, const SparseShareMatrix& shares) {
  detail::check_dims(i, shares.size(), shares.size(), shares.size());
  double acc = 0.0;
  for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(
           shares.downloads(), i);
       it; ++it)
    acc += it.value();
  return acc;
}

double compute_beta(Eigen::Index i, const ShareMatrix& shares,
                    const SbciVector& indices, const PeerLedger& ledger) {
  return compute_beta_impl(i, shares, indices, ledger);
}

double compute_beta(Eigen::Index i, const SparseShareMatrix& shares,
                    const SbciVector& indices, const PeerLedger& ledger) {
  return compute_beta_impl(i, shares, indices, ledger);
}

BetaVector compute_betas(const ShareMatrix& shares, const SbciVector& indices,
                         std::span<const PeerLedger> ledgers) {
  const Eigen::Index n = indices.size();
  if (static_cast<Eigen::Index>(ledgers.size()) != n)
    throw std::invalid_argument("ledger list length does not match peer count");
  BetaVector betas(n);
  for (Eigen::Index i = 0; i < n; ++i)
    betas(i) = compute_beta(i, shares, indices, ledgers[i]);
  return betas;
}

double epoch_update_peer(Eigen::Index i, const ShareMatrix& shares,
                         const SbciVector& x_prev, PeerLedger& ledger,
                         Alpha alpha) {
  return update_peer_impl(i, shares, x_prev, ledger, alpha);
}

double epoch_update_peer(Eigen::Index i, const SparseShareMatrix& shares,
                         const SbciVector& x_prev, PeerLedger& ledger,
                         Alpha alpha) {
  return update_peer_impl(i, shares, x_prev, ledger, alpha);
}

SbciVector epoch_update(const ShareMatrix& shares, const SbciVector& x_prev,
                        std::span<PeerLedger> ledgers, Alpha alpha) {
  detail::check_dims(0, shares.rows(), shares.cols(), x_prev.size());
  return epoch_update_impl(shares, x_prev, ledgers, alpha);
}

SbciVector epoch_update(const SparseShareMatrix& shares,
                        const SbciVector& x_prev, std::span<PeerLedger> ledgers,
                        Alpha alpha) {
  detail::check_dims(0, shares.size(), shares.size(), x_prev.size());
  return epoch_update_impl(shares, x_prev, ledgers, alpha);
}

std::optional<double> bias_ratio(Eigen::Index i, const ShareMatrix& shares,
                                 const SbciVector& indices) {
  const double up = upload_score(i, shares, indices);
  double down = 0.0;
  for (Eigen::Index j = 0; j < shares.rows(); ++j)
    down += shares(j, i) * indices(j);
  if (down == 0.0) return std::nullopt;
  return up / down;
}

ShareMatrix make_share_matrix(Eigen::Index n,
                              std::span<const Transfer> transfers) {
  if (n < 1) throw std::invalid_argument("peer count must be at least 1");
  ShareMatrix shares = ShareMatrix::Zero(n, n);
  for (const Transfer& t : transfers) {
    if (t.uploader < 0 || t.uploader >= n || t.downloader < 0 ||
        t.downloader >= n)
      throw std::invalid_argument("transfer references unknown peer id");
    if (t.uploader == t.downloader)
      throw std::invalid_argument("self-transfer is not allowed");
    if (!(t.amount > 0.0))
      throw std::invalid_argument("transfer amount must be positive");
    shares(t.uploader, t.downloader) += t.amount;
  }
  return shares;
}

bool is_valid_share_matrix(const ShareMatrix& shares) {
  if (shares.rows() != shares.cols()) return false;
  for (Eigen::Index i = 0; i < shares.rows(); ++i) {
    if (shares(i, i) != 0.0) return false;
    for (Eigen::Index j = 0; j < shares.cols(); ++j)
      if (!(shares(i, j) >= 0.0)) return false;
  }
  return true;
}

}  // namespace sbci
