#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <vector>

namespace specgraph {

/// N replicate series, each T x p (rows are timepoints).
struct TimeSeriesPanel {
  std::vector<Eigen::MatrixXd> replicates;
  bool mean_centered = false;

  int num_replicates() const { return static_cast<int>(replicates.size()); }
  int series_length() const {
    return replicates.empty() ? 0 : static_cast<int>(replicates[0].rows());
  }
  int dim() const {
    return replicates.empty() ? 0 : static_cast<int>(replicates[0].cols());
  }

  /// Throws InputError on ragged replicates or non-finite values.
  void validate() const;
};

/// Per-replicate, per-dimension mean removal.
TimeSeriesPanel mean_center(TimeSeriesPanel panel);

/// One Hermitian PSD sufficient statistic over a contiguous Fourier-index
/// range. `dof` is the effective observation count behind `stat`; `weight`
/// is the multiplicity of this entry in score reductions (2 after
/// conjugate-pair folding, 1 otherwise).
struct SpectralEntry {
  int freq_lo = 0;
  int freq_hi = 0;  // inclusive
  double dof = 0.0;
  int weight = 1;
  Eigen::MatrixXcd stat;
};

struct SpectralStatistics {
  int series_length = 0;   // T
  int num_replicates = 0;  // N
  int dim = 0;             // p
  std::vector<SpectralEntry> entries;
  std::vector<int> excluded_frequencies;

  /// Sum of weight * dof; the likelihood's pi-constant multiplier.
  double total_dof() const;
  double min_dof() const;

  /// True when entries are exactly the retained frequencies, one each,
  /// unfolded -- the shape daniell_smooth and piecewise_bin expect.
  bool is_per_frequency() const;
};

/// Paper-normalized DFT: d_k = (1/T) sum_t x_t exp(-i 2 pi k t / T),
/// column-wise over a T x p real series. O(T log T).
Eigen::MatrixXcd dft_coefficients(const Eigen::MatrixXd& series);

struct PeriodogramOptions {
  bool require_centered = true;
  bool drop_dc = true;  // exclude frequency k = 0
};

/// Sum of per-replicate DFT outer products at each retained frequency;
/// dof = N per entry.
SpectralStatistics aggregate_periodogram(const TimeSeriesPanel& panel,
                                         const PeriodogramOptions& options = {});

/// Moving-average smoother of half-width m over the retained-frequency
/// circle; output dof = N * (2m + 1) per entry.
SpectralStatistics daniell_smooth(const SpectralStatistics& stats,
                                  int half_width);

/// Split one series into `num_segments` consecutive replicates of length
/// floor(T / M); trailing remainder samples are discarded.
TimeSeriesPanel bartlett_split(const Eigen::MatrixXd& series,
                               int num_segments);

/// Partition [0, 2 pi) into M equal intervals and pool periodograms per
/// interval; empty bins are dropped.
SpectralStatistics piecewise_bin(const SpectralStatistics& stats,
                                 int num_bins);

/// Collapse conjugate-symmetric per-frequency statistics to the half
/// spectrum: entries k in [1, floor(T/2)], weight 2 except Nyquist. Scores
/// computed on the folded stats match the full range.
SpectralStatistics fold_conjugate_pairs(const SpectralStatistics& stats);

std::string stats_to_json(const SpectralStatistics& stats);
SpectralStatistics stats_from_json(const std::string& text);

/// Compact binary cache: 16-byte magic, version byte, then little-endian
/// 64-bit floats with interleaved re/im, row-major.
void write_stats_cache(const std::filesystem::path& path,
                       const SpectralStatistics& stats);
SpectralStatistics read_stats_cache(const std::filesystem::path& path);

}  // namespace specgraph
