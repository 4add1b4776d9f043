#pragma once

// The three CLI subcommands as library calls. Each returns the process exit
// code: 0 success, 2 data / parameter errors, 3 numeric failures.

#include "htsr/error.hpp"
#include "htsr/report.hpp"
#include "htsr/spectral.hpp"

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>

namespace htsr {

inline constexpr int kExitOk = 0;
inline constexpr int kExitData = 2;
inline constexpr int kExitNumeric = 3;

/// Maps an error code to the exit code it produces.
int exit_code_for(ErrorCode code);

/// Full analysis of one layer. `index` only feeds seed derivation.
LayerReport analyze_layer(const WeightMatrix& w, const AnalyzeConfig& config, std::size_t index,
                          Spectrum* spectrum_out = nullptr);

/// Analyzes every layer (in parallel, assembled in manifest order).
ModelReport analyze_bundle(const std::filesystem::path& bundle, const AnalyzeConfig& config,
                           std::vector<Spectrum>* spectra_out = nullptr);

/// Writes report.json and/or report.csv (and plot data) into out_dir.
int run_analyze(const std::filesystem::path& bundle, const std::filesystem::path& out_dir,
                const AnalyzeConfig& config, std::ostream& err);

struct SynthConfig {
  std::string kind;  // gaussian, pareto, imp
  std::int64_t n = 1000;
  std::int64_t m = 1000;
  double sigma = 1.0;
  double mu = 1.0;
  double x_m = 1.0;
  double q = 2.0;
  std::uint64_t seed = 0;
  int layers = 1;
  DType dtype = DType::kF64;
};

/// Layer i uses derive_seed(seed, i).
std::vector<WeightMatrix> synthesize(const SynthConfig& config);

int run_synth(const SynthConfig& config, const std::filesystem::path& out_bundle,
              std::ostream& err);

struct ReproduceConfig {
  std::string figure;  // alpha-vs-mu, kappa-vs-alpha, detx-gap
  std::uint64_t seed = 0;
  int seeds = 5;
  std::int64_t m = 0;  // 0: the figure's default size
};

int run_reproduce(const ReproduceConfig& config, const std::filesystem::path& out_csv,
                  std::ostream& err);

}  // namespace htsr
