#include "specgraph/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstring>
#include <fstream>
#include <mutex>

#include <nlohmann/json.hpp>

#include "specgraph/errors.hpp"

namespace specgraph {

namespace {

// FFTW's planner is not thread-safe; executing a plan on its own buffers is.
std::mutex fftw_planner_mutex;

constexpr char kCacheMagic[16] = {'S', 'P', 'E', 'C', 'G', 'R', 'A', 'P',
                                  'H', '-', 'S', 'T', 'A', 'T', 'S', '\0'};
constexpr unsigned char kCacheVersion = 1;

void check_finite(const Eigen::MatrixXd& m, const char* what) {
  if (!m.allFinite()) {
    throw InputError("spectral", std::string("non-finite values in ") + what);
  }
}

// Retained Fourier indices in ascending order.
std::vector<int> retained_indices(const SpectralStatistics& stats) {
  std::vector<int> out;
  out.reserve(stats.entries.size());
  for (const auto& e : stats.entries) out.push_back(e.freq_lo);
  return out;
}

void require_per_frequency(const SpectralStatistics& stats, const char* op) {
  if (!stats.is_per_frequency()) {
    throw InputError("spectral", std::string(op) +
                                     " expects unsmoothed per-frequency "
                                     "statistics");
  }
}

}  // namespace

void TimeSeriesPanel::validate() const {
  if (replicates.empty()) {
    throw InputError("spectral", "panel has no replicates");
  }
  const auto rows = replicates[0].rows();
  const auto cols = replicates[0].cols();
  for (const auto& rep : replicates) {
    if (rep.rows() != rows || rep.cols() != cols) {
      throw InputError("spectral", "replicates differ in shape");
    }
    check_finite(rep, "panel");
  }
}

TimeSeriesPanel mean_center(TimeSeriesPanel panel) {
  panel.validate();
  for (auto& rep : panel.replicates) {
    rep.rowwise() -= rep.colwise().mean();
  }
  panel.mean_centered = true;
  return panel;
}

double SpectralStatistics::total_dof() const {
  double total = 0.0;
  for (const auto& e : entries) total += e.weight * e.dof;
  return total;
}

double SpectralStatistics::min_dof() const {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& e : entries) lo = std::min(lo, e.dof);
  return lo;
}

bool SpectralStatistics::is_per_frequency() const {
  if (entries.empty()) return false;
  int prev = -1;
  for (const auto& e : entries) {
    if (e.freq_lo != e.freq_hi || e.weight != 1) return false;
    if (e.freq_lo <= prev) return false;
    prev = e.freq_lo;
  }
  return true;
}

Eigen::MatrixXcd dft_coefficients(const Eigen::MatrixXd& series) {
  const int T = static_cast<int>(series.rows());
  const int p = static_cast<int>(series.cols());
  if (T < 2) throw InputError("spectral", "series length must be >= 2");
  check_finite(series, "series");

  std::vector<std::complex<double>> in(T), out(T);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex);
    plan = fftw_plan_dft_1d(T, reinterpret_cast<fftw_complex*>(in.data()),
                            reinterpret_cast<fftw_complex*>(out.data()),
                            FFTW_FORWARD, FFTW_ESTIMATE);
  }

  Eigen::MatrixXcd coeffs(T, p);
  for (int c = 0; c < p; ++c) {
    for (int t = 0; t < T; ++t) in[t] = {series(t, c), 0.0};
    fftw_execute(plan);
    for (int k = 0; k < T; ++k) coeffs(k, c) = out[k] / static_cast<double>(T);
  }

  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex);
    fftw_destroy_plan(plan);
  }
  return coeffs;
}

SpectralStatistics aggregate_periodogram(const TimeSeriesPanel& panel,
                                         const PeriodogramOptions& options) {
  panel.validate();
  if (panel.series_length() < 2) {
    throw InputError("spectral", "series length must be >= 2");
  }
  if (options.require_centered && !panel.mean_centered) {
    throw InputError("spectral",
                     "panel must be mean-centered before the periodogram "
                     "(or pass require_centered=false explicitly)");
  }

  const int T = panel.series_length();
  const int p = panel.dim();
  const int N = panel.num_replicates();
  const int k_first = options.drop_dc ? 1 : 0;

  SpectralStatistics stats;
  stats.series_length = T;
  stats.num_replicates = N;
  stats.dim = p;
  if (options.drop_dc) stats.excluded_frequencies.push_back(0);

  stats.entries.resize(T - k_first);
  for (int k = k_first; k < T; ++k) {
    auto& entry = stats.entries[k - k_first];
    entry.freq_lo = entry.freq_hi = k;
    entry.dof = N;
    entry.weight = 1;
    entry.stat = Eigen::MatrixXcd::Zero(p, p);
  }

  for (const auto& rep : panel.replicates) {
    const Eigen::MatrixXcd coeffs = dft_coefficients(rep);
    for (int k = k_first; k < T; ++k) {
      const Eigen::VectorXcd d = coeffs.row(k).transpose();
      stats.entries[k - k_first].stat.noalias() += d * d.adjoint();
    }
  }
  return stats;
}

SpectralStatistics daniell_smooth(const SpectralStatistics& stats,
                                  int half_width) {
  require_per_frequency(stats, "daniell_smooth");
  if (half_width < 0) throw ConfigError("spectral", "negative Daniell width");
  const int n = static_cast<int>(stats.entries.size());
  const int window = 2 * half_width + 1;
  if (window > n) {
    throw ConfigError("spectral",
                      "Daniell window " + std::to_string(window) +
                          " exceeds the " + std::to_string(n) +
                          " retained frequencies");
  }

  SpectralStatistics out = stats;
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(stats.dim, stats.dim);
    for (int j = -half_width; j <= half_width; ++j) {
      // circular wrap over the retained-frequency circle
      const int idx = ((i + j) % n + n) % n;
      sum += stats.entries[idx].stat;
    }
    out.entries[i].stat = std::move(sum);
    out.entries[i].dof = stats.entries[i].dof * window;
  }
  return out;
}

TimeSeriesPanel bartlett_split(const Eigen::MatrixXd& series,
                               int num_segments) {
  const int T = static_cast<int>(series.rows());
  if (num_segments < 1 || 2 * num_segments > T) {
    throw ConfigError("spectral",
                      "Bartlett split count must satisfy 1 <= M <= T/2");
  }
  check_finite(series, "series");
  const int seg_len = T / num_segments;
  TimeSeriesPanel panel;
  panel.replicates.reserve(num_segments);
  for (int s = 0; s < num_segments; ++s) {
    panel.replicates.push_back(series.middleRows(s * seg_len, seg_len));
  }
  panel.mean_centered = false;
  return panel;
}

SpectralStatistics piecewise_bin(const SpectralStatistics& stats,
                                 int num_bins) {
  require_per_frequency(stats, "piecewise_bin");
  if (num_bins < 1) throw ConfigError("spectral", "bin count must be >= 1");

  const int T = stats.series_length;
  SpectralStatistics out;
  out.series_length = T;
  out.num_replicates = stats.num_replicates;
  out.dim = stats.dim;
  out.excluded_frequencies = stats.excluded_frequencies;

  // lambda_k = 2 pi k / T lands in bin j (1-based) iff
  // ceil((j-1) T / M) <= k < ceil(j T / M).
  std::size_t cursor = 0;
  const auto retained = retained_indices(stats);
  for (int j = 1; j <= num_bins; ++j) {
    const auto hi =
        static_cast<int>((static_cast<long long>(j) * T + num_bins - 1) /
                         num_bins);
    SpectralEntry entry;
    entry.stat = Eigen::MatrixXcd::Zero(stats.dim, stats.dim);
    bool first = true;
    while (cursor < retained.size() && retained[cursor] < hi) {
      const auto& src = stats.entries[cursor];
      if (first) {
        entry.freq_lo = src.freq_lo;
        first = false;
      }
      entry.freq_hi = src.freq_hi;
      entry.stat += src.stat;
      entry.dof += src.dof;
      ++cursor;
    }
    if (!first) out.entries.push_back(std::move(entry));
  }
  return out;
}

SpectralStatistics fold_conjugate_pairs(const SpectralStatistics& stats) {
  require_per_frequency(stats, "fold_conjugate_pairs");
  const int T = stats.series_length;
  const int n = static_cast<int>(stats.entries.size());
  if (n != T - 1 || stats.entries.front().freq_lo != 1) {
    throw InputError("spectral",
                     "conjugate folding expects the full retained range "
                     "k = 1..T-1 with k = 0 excluded");
  }

  SpectralStatistics out;
  out.series_length = T;
  out.num_replicates = stats.num_replicates;
  out.dim = stats.dim;
  out.excluded_frequencies = stats.excluded_frequencies;

  const int half = T / 2;
  for (int k = 1; k <= half; ++k) {
    SpectralEntry entry = stats.entries[k - 1];
    const bool nyquist = (2 * k == T);
    if (!nyquist) {
      const auto& mirror = stats.entries[T - k - 1].stat;
      const double scale = std::max(1.0, entry.stat.norm());
      if ((mirror.conjugate() - entry.stat).norm() > 1e-8 * scale) {
        throw NumericalError("spectral",
                             "statistics are not conjugate-symmetric at k=" +
                                 std::to_string(k) +
                                 "; folding requires real input data");
      }
      entry.weight = 2;
    }
    out.entries.push_back(std::move(entry));
  }
  return out;
}

namespace {

nlohmann::json matrix_to_json(const Eigen::MatrixXcd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back({m(r, c).real(), m(r, c).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXcd matrix_from_json(const nlohmann::json& rows) {
  const auto nr = rows.size();
  const auto nc = nr == 0 ? 0 : rows[0].size();
  Eigen::MatrixXcd m(nr, nc);
  for (std::size_t r = 0; r < nr; ++r) {
    for (std::size_t c = 0; c < nc; ++c) {
      m(r, c) = {rows[r][c][0].get<double>(), rows[r][c][1].get<double>()};
    }
  }
  return m;
}

}  // namespace

std::string stats_to_json(const SpectralStatistics& stats) {
  nlohmann::json j;
  j["T"] = stats.series_length;
  j["N"] = stats.num_replicates;
  j["p"] = stats.dim;
  j["excluded_frequencies"] = stats.excluded_frequencies;
  j["entries"] = nlohmann::json::array();
  for (const auto& e : stats.entries) {
    j["entries"].push_back({{"range", {e.freq_lo, e.freq_hi}},
                            {"dof", e.dof},
                            {"weight", e.weight},
                            {"stat", matrix_to_json(e.stat)}});
  }
  return j.dump();
}

SpectralStatistics stats_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("spectral", std::string("bad statistics JSON: ") + e.what());
  }
  SpectralStatistics stats;
  stats.series_length = j.at("T").get<int>();
  stats.num_replicates = j.at("N").get<int>();
  stats.dim = j.at("p").get<int>();
  stats.excluded_frequencies =
      j.at("excluded_frequencies").get<std::vector<int>>();
  for (const auto& je : j.at("entries")) {
    SpectralEntry e;
    e.freq_lo = je.at("range")[0].get<int>();
    e.freq_hi = je.at("range")[1].get<int>();
    e.dof = je.at("dof").get<double>();
    e.weight = je.at("weight").get<int>();
    e.stat = matrix_from_json(je.at("stat"));
    stats.entries.push_back(std::move(e));
  }
  return stats;
}

namespace {

template <typename T>
void write_pod(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
  T value;
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw InputError("spectral", "truncated statistics cache");
  return value;
}

}  // namespace

void write_stats_cache(const std::filesystem::path& path,
                       const SpectralStatistics& stats) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw InputError("spectral", "cannot open " + path.string() + " for write");
  }
  out.write(kCacheMagic, sizeof(kCacheMagic));
  write_pod(out, kCacheVersion);
  write_pod<std::uint32_t>(out, stats.series_length);
  write_pod<std::uint32_t>(out, stats.num_replicates);
  write_pod<std::uint32_t>(out, stats.dim);
  write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(stats.entries.size()));
  write_pod<std::uint32_t>(
      out, static_cast<std::uint32_t>(stats.excluded_frequencies.size()));
  for (int k : stats.excluded_frequencies) write_pod<std::int32_t>(out, k);
  for (const auto& e : stats.entries) {
    write_pod<std::int32_t>(out, e.freq_lo);
    write_pod<std::int32_t>(out, e.freq_hi);
    write_pod<double>(out, e.dof);
    write_pod<std::int32_t>(out, e.weight);
    for (Eigen::Index r = 0; r < e.stat.rows(); ++r) {
      for (Eigen::Index c = 0; c < e.stat.cols(); ++c) {
        write_pod<double>(out, e.stat(r, c).real());
        write_pod<double>(out, e.stat(r, c).imag());
      }
    }
  }
}

SpectralStatistics read_stats_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("spectral", "cannot open " + path.string());
  char magic[16];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kCacheMagic, sizeof(magic)) != 0) {
    throw InputError("spectral", path.string() + " is not a statistics cache");
  }
  if (read_pod<unsigned char>(in) != kCacheVersion) {
    throw InputError("spectral", "unsupported statistics cache version");
  }
  SpectralStatistics stats;
  stats.series_length = read_pod<std::uint32_t>(in);
  stats.num_replicates = read_pod<std::uint32_t>(in);
  stats.dim = read_pod<std::uint32_t>(in);
  const auto n_entries = read_pod<std::uint32_t>(in);
  const auto n_excluded = read_pod<std::uint32_t>(in);
  for (std::uint32_t i = 0; i < n_excluded; ++i) {
    stats.excluded_frequencies.push_back(read_pod<std::int32_t>(in));
  }
  for (std::uint32_t i = 0; i < n_entries; ++i) {
    SpectralEntry e;
    e.freq_lo = read_pod<std::int32_t>(in);
    e.freq_hi = read_pod<std::int32_t>(in);
    e.dof = read_pod<double>(in);
    e.weight = read_pod<std::int32_t>(in);
    e.stat.resize(stats.dim, stats.dim);
    for (int r = 0; r < stats.dim; ++r) {
      for (int c = 0; c < stats.dim; ++c) {
        const double re = read_pod<double>(in);
        const double im = read_pod<double>(in);
        e.stat(r, c) = {re, im};
      }
    }
    stats.entries.push_back(std::move(e));
  }
  return stats;
}

}  // namespace specgraph
