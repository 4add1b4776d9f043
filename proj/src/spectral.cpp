#include "htsr/spectral.hpp"

#include "htsr/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace htsr {
namespace {

constexpr double kNegativeClamp = -1e-12;

double zero_tolerance(const Spectrum& s) {
  const double scale =
      static_cast<double>(std::max(s.N, s.M)) * std::numeric_limits<double>::epsilon();
  return s.lambda_max() * scale * scale;
}

std::vector<double> masses_on(const LogHistogram& h, std::span<const double> edges) {
  const std::vector<double> src = h.masses();
  if (std::equal(h.bin_edges.begin(), h.bin_edges.end(), edges.begin(), edges.end())) {
    return src;
  }
  std::vector<double> out(edges.size() - 1, 0.0);
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (src[i] == 0.0) continue;
    const double lo = h.bin_edges[i];
    const double hi = h.bin_edges[i + 1];
    for (std::size_t j = 0; j + 1 < edges.size(); ++j) {
      const double overlap = std::min(hi, edges[j + 1]) - std::max(lo, edges[j]);
      if (overlap > 0.0) out[j] += src[i] * overlap / (hi - lo);
    }
  }
  return out;
}

double jsd_from_masses(std::vector<double> p, std::vector<double> q) {
  double sp = 0.0, sq = 0.0;
  for (double v : p) sp += v;
  for (double v : q) sq += v;
  if (!(sp > 0.0) || !(sq > 0.0)) fail(ErrorCode::kEmptySpectrum, "empty histogram");
  double jsd = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    // Ordered so that swapping the arguments gives the same bits.
    const double pi = std::min(p[i] / sp, q[i] / sq);
    const double qi = std::max(p[i] / sp, q[i] / sq);
    const double mi = 0.5 * (pi + qi);
    double term = 0.0;
    if (pi > 0.0) term += pi * std::log2(pi / mi);
    if (qi > 0.0) term += qi * std::log2(qi / mi);
    jsd += 0.5 * term;
  }
  return std::clamp(jsd, 0.0, 1.0);
}

std::vector<double> linear_edges(double lo, double hi, int bins) {
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  std::vector<double> edges(static_cast<std::size_t>(bins) + 1);
  const double width = (hi - lo) / bins;
  for (int i = 0; i <= bins; ++i) edges[static_cast<std::size_t>(i)] = lo + width * i;
  edges.back() = hi;
  return edges;
}

}  // namespace

std::vector<double> Spectrum::positive() const {
  const double tol = zero_tolerance(*this);
  std::vector<double> out;
  for (double v : eigenvalues) {
    if (v > tol) out.push_back(v);
  }
  return out;
}

double Spectrum::lambda_min_positive() const {
  const double tol = zero_tolerance(*this);
  for (double v : eigenvalues) {
    if (v > tol) return v;
  }
  return 0.0;
}

std::int64_t Spectrum::zero_count() const {
  const double tol = zero_tolerance(*this);
  return std::count_if(eigenvalues.begin(), eigenvalues.end(),
                       [tol](double v) { return v <= tol; });
}

Spectrum make_spectrum(std::vector<double> eigenvalues, std::int64_t N, std::int64_t M,
                       std::string source_name, Normalization normalization) {
  for (double& v : eigenvalues) {
    if (!std::isfinite(v)) fail(ErrorCode::kNumeric, "non-finite eigenvalue");
    if (v < 0.0) {
      if (v < kNegativeClamp) {
        fail(ErrorCode::kNumeric, "negative eigenvalue " + std::to_string(v));
      }
      v = 0.0;
    }
  }
  std::sort(eigenvalues.begin(), eigenvalues.end());
  Spectrum s;
  s.eigenvalues = std::move(eigenvalues);
  s.N = N;
  s.M = M;
  s.Q = M > 0 ? static_cast<double>(N) / static_cast<double>(M) : 1.0;
  s.source_name = std::move(source_name);
  s.normalization = normalization;
  return s;
}

Spectrum eigenspectrum(const WeightMatrix& w) {
  if (w.n_rows() < w.n_cols()) {
    fail(ErrorCode::kData, "matrix '" + w.name + "' is not oriented (N < M)");
  }
  if (!w.values.allFinite()) fail(ErrorCode::kNumeric, "non-finite entries in '" + w.name + "'");
  Eigen::BDCSVD<Matrix> svd(w.values);
  const Eigen::VectorXd& sv = svd.singularValues();
  if (!sv.allFinite()) fail(ErrorCode::kNumeric, "SVD failed for '" + w.name + "'");
  const double n = static_cast<double>(w.n_rows());
  std::vector<double> ev(static_cast<std::size_t>(sv.size()));
  for (Eigen::Index i = 0; i < sv.size(); ++i) ev[static_cast<std::size_t>(i)] = sv(i) * sv(i) / n;
  return make_spectrum(std::move(ev), w.n_rows(), w.n_cols(), w.name, w.normalization);
}

Spectrum scaled(const Spectrum& s, double c, Normalization tag) {
  if (!(c > 0.0)) fail(ErrorCode::kDomain, "scale factor must be positive");
  Spectrum out = s;
  for (double& v : out.eigenvalues) v *= c;
  out.normalization = tag;
  return out;
}

Spectrum normalize_trace_m(const Spectrum& s) {
  double sum = 0.0;
  for (double v : s.eigenvalues) sum += v;
  if (!(sum > 0.0)) fail(ErrorCode::kDegenerateMatrix, "cannot trace-m normalize a zero spectrum");
  return scaled(s, static_cast<double>(s.eigenvalues.size()) / sum, Normalization::kTraceM);
}

std::vector<double> LogHistogram::masses() const {
  std::vector<double> out(densities.size());
  for (std::size_t i = 0; i < densities.size(); ++i) out[i] = densities[i] * width(i);
  return out;
}

LogHistogram log_histogram_on_grid(const Spectrum& s, std::span<const double> ln_edges) {
  if (ln_edges.size() < 2) fail(ErrorCode::kDomain, "need at least one bin");
  const std::size_t bins = ln_edges.size() - 1;
  LogHistogram h;
  h.bin_edges.assign(ln_edges.begin(), ln_edges.end());
  std::vector<double> counts(bins, 0.0);
  const std::vector<double> pos = s.positive();
  h.zero_count = static_cast<std::int64_t>(s.eigenvalues.size() - pos.size());
  double in_range = 0.0;
  for (double v : pos) {
    const double x = std::log(v);
    if (x < ln_edges.front() || x > ln_edges.back()) {
      if (x < ln_edges.front()) ++h.below_lower;
      continue;
    }
    // upper_bound gives the half-open [a, b) assignment; the last edge is closed.
    auto it = std::upper_bound(ln_edges.begin(), ln_edges.end(), x);
    std::size_t bin = static_cast<std::size_t>(std::distance(ln_edges.begin(), it));
    bin = bin == 0 ? 0 : std::min(bin - 1, bins - 1);
    counts[bin] += 1.0;
    in_range += 1.0;
  }
  const double total = static_cast<double>(s.eigenvalues.size());
  h.densities.resize(bins);
  for (std::size_t i = 0; i < bins; ++i) h.densities[i] = counts[i] / (total * h.width(i));
  h.total_mass = in_range / total;
  return h;
}

LogHistogram log_histogram(const Spectrum& s, int bins, std::optional<double> lower) {
  if (bins < 2) fail(ErrorCode::kDomain, "log_histogram needs bins >= 2");
  const std::vector<double> pos = s.positive();
  if (pos.empty()) fail(ErrorCode::kEmptySpectrum, "spectrum '" + s.source_name + "' is all zero");
  double lo = pos.front();
  if (lower && *lower > lo) lo = *lower;
  const double hi = pos.back();
  if (lo > hi) fail(ErrorCode::kEmptySpectrum, "lower bound exceeds lambda_max");
  const std::vector<double> edges = linear_edges(std::log(lo), std::log(hi), bins);
  return log_histogram_on_grid(s, edges);
}

double jensen_shannon(const LogHistogram& a, const LogHistogram& b) {
  if (a.bins() == 0 || b.bins() == 0) fail(ErrorCode::kEmptySpectrum, "empty histogram");
  if (std::equal(a.bin_edges.begin(), a.bin_edges.end(), b.bin_edges.begin(),
                 b.bin_edges.end())) {
    return jsd_from_masses(a.masses(), b.masses());
  }
  const double lo = std::min(a.bin_edges.front(), b.bin_edges.front());
  const double hi = std::max(a.bin_edges.back(), b.bin_edges.back());
  const int bins = static_cast<int>(std::max(a.bins(), b.bins()));
  const std::vector<double> edges = linear_edges(lo, hi, bins);
  return jsd_from_masses(masses_on(a, edges), masses_on(b, edges));
}

double jensen_shannon(const Spectrum& a, const Spectrum& b, int bins) {
  if (bins < 1) fail(ErrorCode::kDomain, "jensen_shannon needs bins >= 1");
  const std::vector<double> pa = a.positive();
  const std::vector<double> pb = b.positive();
  if (pa.empty() || pb.empty()) fail(ErrorCode::kEmptySpectrum, "cannot compare an all-zero spectrum");
  const double lo = std::log(std::min(pa.front(), pb.front()));
  const double hi = std::log(std::max(pa.back(), pb.back()));
  const std::vector<double> edges = linear_edges(lo, hi, bins);
  return jsd_from_masses(log_histogram_on_grid(a, edges).masses(),
                         log_histogram_on_grid(b, edges).masses());
}

}  // namespace htsr
