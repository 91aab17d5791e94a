#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace sbci {

using PeerId = int;

// Entry (i, j) holds the units peer i uploaded to peer j during one epoch.
// Entries are nonnegative and the diagonal is zero (no self-transfer).
using ShareMatrix = Eigen::MatrixXd;

// One contribution index per peer, each in [0, 1].
using SbciVector = Eigen::VectorXd;

using BetaVector = Eigen::VectorXd;

// Mixing constant in the open interval (0, 1). It weights index-scored
// downloads against raw downloaded volume in the update denominator, and
// fixes both the initial index and the admission threshold at
// value / (1 + value).
class Alpha {
 public:
  explicit Alpha(double value) : value_(value) {
    if (!(value > 0.0 && value < 1.0))
      throw std::invalid_argument("alpha must lie in (0, 1)");
  }
  double value() const { return value_; }
  double initial_index() const { return value_ / (1.0 + value_); }

 private:
  double value_;
};

// Everything an index manager persists per daughter peer: the current
// index and the lifetime transacted volume. Nothing else is stored.
struct PeerLedger {
  double sbci = 0.0;
  double total_transacted = 0.0;
};
static_assert(sizeof(PeerLedger) == 2 * sizeof(double),
              "per-daughter state is exactly two scalars");

// One transfer: `uploader` sent `amount` units to `downloader`.
struct Transfer {
  PeerId uploader = 0;
  PeerId downloader = 0;
  double amount = 0.0;
};

// Per-epoch shares in compressed form, built from a transfer list.
// Keeps the matrix and its transpose so both upload and download scans
// walk counterpart ids in ascending order. All score functions below
// produce doubles bit-identical to their dense counterparts because the
// skipped entries are exact zeros.
class SparseShareMatrix {
 public:
  SparseShareMatrix(Eigen::Index n, std::span<const Transfer> transfers);
  SparseShareMatrix(Eigen::Index n, std::initializer_list<Transfer> transfers)
      : SparseShareMatrix(
            n, std::span<const Transfer>(transfers.begin(), transfers.size())) {}

  Eigen::Index size() const { return uploads_.rows(); }
  const Eigen::SparseMatrix<double, Eigen::RowMajor>& uploads() const {
    return uploads_;
  }
  // Transposed shares: row i lists who uploaded to peer i.
  const Eigen::SparseMatrix<double, Eigen::RowMajor>& downloads() const {
    return downloads_;
  }

 private:
  Eigen::SparseMatrix<double, Eigen::RowMajor> uploads_;
  Eigen::SparseMatrix<double, Eigen::RowMajor> downloads_;
};

namespace detail {

inline void check_dims(Eigen::Index i, Eigen::Index rows, Eigen::Index cols,
                       Eigen::Index indices) {
  if (rows != cols) throw std::invalid_argument("share matrix must be square");
  if (indices != rows)
    throw std::invalid_argument("index vector length does not match share matrix");
  if (i < 0 || i >= rows) throw std::invalid_argument("peer id out of range");
}

}  // namespace detail

// Initial index vector: every peer starts at alpha / (1 + alpha).
SbciVector init_indices(Eigen::Index n, Alpha alpha);

// Index-weighted upload of peer i this epoch: sum_j S(i,j) * x(j).
// Accumulates in ascending j so dense, sparse and reference loops agree
// bit for bit.
template <typename DerivedS, typename DerivedX>
double upload_score(Eigen::Index i, const Eigen::MatrixBase<DerivedS>& shares,
                    const Eigen::MatrixBase<DerivedX>& indices) {
  detail::check_dims(i, shares.rows(), shares.cols(), indices.size());
  double acc = 0.0;
  for (Eigen::Index j = 0; j < shares.cols(); ++j)
    acc += shares(i, j) * indices(j);
  return acc;
}
double upload_score(Eigen::Index i, const SparseShareMatrix& shares,
                    const SbciVector& indices);

// Update denominator for peer i:
//   alpha * sum_j S(j,i) * x(j) + (1 - alpha) * sum_j S(j,i).
// Strictly positive whenever peer i downloaded anything this epoch.
template <typename DerivedS, typename DerivedX>
double weighted_download_score(Eigen::Index i,
                               const Eigen::MatrixBase<DerivedS>& shares,
                               const Eigen::MatrixBase<DerivedX>& indices,
                               Alpha alpha) {
  detail::check_dims(i, shares.rows(), shares.cols(), indices.size());
  double scored = 0.0;
  double raw = 0.0;
  for (Eigen::Index j = 0; j < shares.rows(); ++j) {
    scored += shares(j, i) * indices(j);
    raw += shares(j, i);
  }
  return alpha.value() * scored + (1.0 - alpha.value()) * raw;
}
double weighted_download_score(Eigen::Index i, const SparseShareMatrix& shares,
                               const SbciVector& indices, Alpha alpha);

// Units peer i uploaded / downloaded this epoch (row and column sums).
template <typename DerivedS>
double upload_total(Eigen::Index i, const Eigen::MatrixBase<DerivedS>& shares) {
  detail::check_dims(i, shares.rows(), shares.cols(), shares.rows());
  double acc = 0.0;
  for (Eigen::Index j = 0; j < shares.cols(); ++j) acc += shares(i, j);
  return acc;
}
double upload_total(Eigen::Index i, const SparseShareMatrix& shares);

template <typename DerivedS>
double download_total(Eigen::Index i, const Eigen::MatrixBase<DerivedS>& shares) {
  detail::check_dims(i, shares.rows(), shares.cols(), shares.rows());
  double acc = 0.0;
  for (Eigen::Index j = 0; j < shares.rows(); ++j) acc += shares(j, i);
  return acc;
}
double download_total(Eigen::Index i, const SparseShareMatrix& shares);

// Fraction of peer i's lifetime volume contributed by this epoch:
//   0 when the activity measure (upload_score + raw download) is zero,
//   else delta / (ledger.total_transacted + delta)
// with delta = upload_total + download_total. Equals 1 on a peer's first
// active epoch. The ledger is read, never written.
double compute_beta(Eigen::Index i, const ShareMatrix& shares,
                    const SbciVector& indices, const PeerLedger& ledger);
double compute_beta(Eigen::Index i, const SparseShareMatrix& shares,
                    const SbciVector& indices, const PeerLedger& ledger);

BetaVector compute_betas(const ShareMatrix& shares, const SbciVector& indices,
                         std::span<const PeerLedger> ledgers);

// Single-peer update step shared by the batch update and the manager
// overlay, so both planes produce identical doubles:
//   x_i' = (1 - beta) * x_i + beta * u / (u + d)
// where u is upload_score and d is weighted_download_score. When beta is
// zero the fractional term is never evaluated and x_i is returned
// unchanged. Bumps the ledger total and stores the new index in it.
double epoch_update_peer(Eigen::Index i, const ShareMatrix& shares,
                         const SbciVector& x_prev, PeerLedger& ledger,
                         Alpha alpha);
double epoch_update_peer(Eigen::Index i, const SparseShareMatrix& shares,
                         const SbciVector& x_prev, PeerLedger& ledger,
                         Alpha alpha);

// Full-epoch update over all peers. Every output lies in [0, 1]; inactive
// peers keep their previous index bit-exactly.
SbciVector epoch_update(const ShareMatrix& shares, const SbciVector& x_prev,
                        std::span<PeerLedger> ledgers, Alpha alpha);
SbciVector epoch_update(const SparseShareMatrix& shares,
                        const SbciVector& x_prev,
                        std::span<PeerLedger> ledgers, Alpha alpha);

// Ratio of index-weighted upload to index-weighted download. Kept for
// diagnostics only; the epoch update never evaluates it. Empty when the
// denominator vanishes.
std::optional<double> bias_ratio(Eigen::Index i, const ShareMatrix& shares,
                                 const SbciVector& indices);

// Dense epoch matrix from a transfer list; amounts for repeated
// (uploader, downloader) pairs accumulate in list order.
ShareMatrix make_share_matrix(Eigen::Index n, std::span<const Transfer> transfers);
inline ShareMatrix make_share_matrix(Eigen::Index n,
                                     std::initializer_list<Transfer> transfers) {
  return make_share_matrix(
      n, std::span<const Transfer>(transfers.begin(), transfers.size()));
}

// True when all entries are nonnegative and the diagonal is zero.
bool is_valid_share_matrix(const ShareMatrix& shares);

}  // namespace sbci
