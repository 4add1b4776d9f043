#pragma once

// Per-layer and per-model reports and their JSON / CSV forms.

#include "htsr/erg_ecs.hpp"
#include "htsr/htsr_metrics.hpp"
#include "htsr/plfit.hpp"
#include "htsr/quality.hpp"
#include "htsr/traps.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace htsr {

inline constexpr int kSchemaVersion = 1;
std::string_view tool_version();

struct WarningCode {
  std::string_view code;
  std::string_view meaning;
};

/// Every warning code a report can carry.
std::span<const WarningCode> warning_codes();

/// The table above as aligned text, for --help.
std::string warning_help();

struct SpectrumSummary {
  std::int64_t N = 0;
  std::int64_t M = 0;
  double Q = 1.0;
  double lambda_max = 0.0;
  double lambda_min_positive = 0.0;
  std::int64_t zero_count = 0;
};

struct LayerReport {
  std::string name;
  bool transposed = false;
  Normalization normalization = Normalization::kNone;
  std::uint64_t seed = 0;  // base of every seed used for this layer
  SpectrumSummary spectrum;
  std::optional<PowerLawFit> fit;
  LayerMetrics metrics;
  std::optional<ErgResult> erg;  // always on the trace-m spectrum
  std::optional<PowerLawFit> erg_fit;  // the fit Delta lambda_min is taken against
  std::optional<EcsGap> gap;
  std::optional<TrapReport> traps;
  std::vector<QualityReport> quality;
  std::string quality_tail;  // "ecs", "pl" or empty
  bool averaged = false;
  std::vector<std::string> warnings;
};

struct AnalyzeConfig {
  std::optional<Normalization> normalize;  // unset: none
  bool detx = false;
  int randomize = 10;  // trap-detection seeds, 0 disables
  std::vector<std::string> quality;  // model ids
  std::uint64_t seed = 0;
  std::string format = "json";  // json, csv, both
  std::optional<std::filesystem::path> plot_data;
  std::int64_t min_evals = 8;
  bool cumulant_raw_lambda = false;  // series at lambda instead of lambda / M~
  unsigned threads = 0;  // 0: hardware concurrency
};

struct ModelAverages {
  std::optional<double> alpha;
  std::optional<double> alpha_hat;
  std::optional<double> log_spectral_norm;
  std::int64_t layers_averaged = 0;
};

struct ModelReport {
  std::string bundle;
  AnalyzeConfig config;
  std::vector<LayerReport> layers;
  ModelAverages averages;
};

/// Recomputes the mean-mode averages over layers flagged `averaged`.
ModelAverages compute_averages(std::span<const LayerReport> layers);

nlohmann::ordered_json to_json(const LayerReport& layer);

/// Deterministic part of the report: everything except run metadata.
nlohmann::ordered_json report_body(const ModelReport& report);

/// {"schema_version", "body", "run": {"timestamp", ...}}.
nlohmann::ordered_json report_document(const ModelReport& report, std::string_view timestamp);

/// One header row plus one row per layer.
void write_csv(std::ostream& out, const ModelReport& report);

/// xmin scan, ECS curve and log-histogram with PL overlay, one CSV each per
/// layer, file names prefixed by the layer index.
void write_plot_data(const std::filesystem::path& dir, const ModelReport& report,
                     std::span<const Spectrum> spectra);

}  // namespace htsr
