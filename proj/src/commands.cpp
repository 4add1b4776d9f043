#include "htsr/commands.hpp"

#include "htsr/error.hpp"
#include "htsr/experiments.hpp"
#include "htsr/rmt_models.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

namespace htsr {
namespace {

void warn(LayerReport& r, std::string_view code) {
  if (std::find(r.warnings.begin(), r.warnings.end(), code) == r.warnings.end()) {
    r.warnings.emplace_back(code);
  }
}

// Layer-local failures that become warnings. Anything else propagates.
bool is_local(const Error& e) {
  switch (e.code()) {
    case ErrorCode::kTooFewEigenvalues:
    case ErrorCode::kDegenerateSpectrum:
    case ErrorCode::kDegenerateMatrix:
    case ErrorCode::kEmptySpectrum:
    case ErrorCode::kDomain:
    case ErrorCode::kInfiniteAlpha:
    case ErrorCode::kEmptyEcs:
      return true;
    default:
      return false;
  }
}

std::optional<PowerLawFit> try_fit(const Spectrum& s, const AnalyzeConfig& c) {
  FitOptions options;
  options.min_eigenvalues = c.min_evals;
  try {
    return fit_pl(s, options);
  } catch (const Error& e) {
    if (!is_local(e)) throw;
    return std::nullopt;
  }
}

std::vector<std::string> expand_quality(const std::vector<std::string>& requested) {
  static const std::vector<std::string> kAll{"discrete", "fc", "imp", "lw", "cumulant"};
  std::vector<std::string> out;
  for (const auto& q : requested) {
    if (q == "all") return kAll;
    if (std::find(kAll.begin(), kAll.end(), q) == kAll.end()) {
      fail(ErrorCode::kData, "unknown quality model '" + q + "'");
    }
    if (std::find(out.begin(), out.end(), q) == out.end()) out.push_back(q);
  }
  // Canonical order so the report does not depend on flag order.
  std::vector<std::string> ordered;
  for (const auto& m : kAll) {
    if (std::find(out.begin(), out.end(), m) != out.end()) ordered.push_back(m);
  }
  return ordered;
}

void add_quality(LayerReport& r, const AnalyzeConfig& c, const std::vector<double>& tail) {
  const bool has_alpha = r.fit.has_value();
  const double alpha = has_alpha ? r.fit->alpha : NAN;
  for (const auto& model : expand_quality(c.quality)) {
    try {
      if (model == "discrete") {
        r.quality.push_back(q2_discrete(tail));
      } else if (tail.empty()) {
        warn(r, "quality-empty-tail");
      } else if (model == "fc") {
        r.quality.push_back(q2_free_cauchy(tail, alpha));
      } else if (model == "imp") {
        // kappa from the fitted exponent through alpha = 2 kappa.
        if (!has_alpha) {
          warn(r, "quality-domain");
          continue;
        }
        r.quality.push_back(q2_imp(0.5 * alpha, tail, *std::min_element(tail.begin(), tail.end())));
      } else if (model == "lw") {
        if (!has_alpha) {
          warn(r, "quality-domain");
          continue;
        }
        r.quality.push_back(q2_levy_wigner(alpha, *std::max_element(tail.begin(), tail.end())));
      } else {
        CumulantSeriesOptions options;
        options.scale_by_tail_size = !c.cumulant_raw_lambda;
        r.quality.push_back(
            q2_cumulant_series(tail, static_cast<std::int64_t>(tail.size()), options));
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDomain) throw;
      warn(r, "quality-domain");
      continue;
    }
    for (const auto& w : r.quality.back().warnings) warn(r, w);
  }
}

std::vector<double> tail_from(const Spectrum& s, double threshold) {
  std::vector<double> tail;
  for (double v : s.eigenvalues) {
    if (v >= threshold && v > 0.0) tail.push_back(v);
  }
  return tail;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

unsigned pool_size(unsigned requested, std::size_t jobs) {
  unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::clamp<std::size_t>(n, 1, std::max<std::size_t>(jobs, 1)));
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNumeric:
    case ErrorCode::kSingularSpectrum:
      return kExitNumeric;
    default:
      return kExitData;
  }
}

LayerReport analyze_layer(const WeightMatrix& input, const AnalyzeConfig& c, std::size_t index,
                          Spectrum* spectrum_out) {
  LayerReport r;
  const WeightMatrix w = orient(input);
  r.name = input.name;
  r.transposed = input.transposed || w.transposed;
  r.normalization = c.normalize.value_or(Normalization::kNone);
  r.seed = derive_seed(c.seed, index);

  std::optional<WeightMatrix> normalized;
  if (r.normalization == Normalization::kTraceM) {
    try {
      normalized = normalize(w, Normalization::kTraceM);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegenerateMatrix) throw;
      r.normalization = Normalization::kNone;
    }
  }
  const WeightMatrix& wn = normalized ? *normalized : w;
  const Spectrum s = eigenspectrum(wn);
  r.spectrum = {s.N, s.M, s.Q, s.lambda_max(), s.lambda_min_positive(), s.zero_count()};

  r.fit = try_fit(s, c);
  if (!r.fit) warn(r, "fit-refused");
  const bool fit_ok = r.fit && is_good_fit(*r.fit);
  if (r.fit && !fit_ok) warn(r, "poor-fit");
  if (r.fit) {
    r.metrics.alpha = r.fit->alpha;
    r.metrics.d_ks = r.fit->d_ks;
  }
  if (s.lambda_max() > 0.0) {
    r.metrics.log_spectral_norm = log_spectral_norm(s.lambda_max());
    if (r.fit) r.metrics.alpha_hat = alpha_hat(r.fit->alpha, s.lambda_max());
  } else {
    warn(r, "zero-spectrum");
  }
  r.metrics.universality = classify(r.fit ? r.fit->alpha : 0.0, fit_ok, s);

  try {
    r.metrics.rand_distance = rand_distance(wn, derive_seed(r.seed, 0));
  } catch (const Error& e) {
    if (!is_local(e)) throw;
    warn(r, "rand-distance-failed");
  }

  if (c.randomize > 0) {
    std::vector<std::uint64_t> seeds;
    for (int i = 0; i < c.randomize; ++i) seeds.push_back(derive_seed(r.seed, 1 + static_cast<std::uint64_t>(i)));
    try {
      r.traps = detect_traps(wn, seeds);
      if (r.traps->has_trap) warn(r, "correlation-trap");
      if (r.traps->heavy_tail_caveat) warn(r, "trap-heavy-tail-caveat");
    } catch (const Error& e) {
      if (!is_local(e)) throw;
      warn(r, "trap-failed");
    }
  }

  std::vector<double> tail;
  if (c.detx) {
    try {
      const Spectrum tm = s.normalization == Normalization::kTraceM ? s : normalize_trace_m(s);
      r.erg = detx_lambda_min(tm, DetxOptions{true});
      if (!r.erg->crossed) warn(r, "detx-no-crossing");
      r.erg_fit = s.normalization == Normalization::kTraceM ? r.fit : try_fit(tm, c);
      if (r.erg_fit) {
        r.gap = delta_lambda_min(*r.erg_fit, *r.erg);
      } else {
        warn(r, "gap-unavailable");
      }
      tail = tail_from(tm, r.erg->lambda_min_detx);
      r.quality_tail = "ecs";
    } catch (const Error& e) {
      if (!is_local(e)) throw;
      warn(r, "detx-failed");
    }
  }
  if (!c.quality.empty()) {
    if (r.quality_tail.empty() && r.fit) {
      tail = tail_from(s, r.fit->xmin);
      r.quality_tail = "pl";
    }
    if (r.quality_tail.empty()) {
      warn(r, "quality-no-tail");
    } else {
      add_quality(r, c, tail);
    }
  }

  r.averaged = s.M >= kMinAveragedM;
  if (!r.averaged) warn(r, "layer-too-small");
  if (spectrum_out) *spectrum_out = s;
  return r;
}

ModelReport analyze_bundle(const std::filesystem::path& bundle, const AnalyzeConfig& c,
                           std::vector<Spectrum>* spectra_out) {
  const std::vector<WeightMatrix> layers = load_bundle(bundle);
  if (layers.empty()) fail(ErrorCode::kData, "bundle " + bundle.string() + " has no layers");
  expand_quality(c.quality);  // reject unknown models before any work

  ModelReport report;
  report.bundle = bundle.filename().empty() ? bundle.parent_path().filename().string()
                                            : bundle.filename().string();
  report.config = c;
  report.layers.resize(layers.size());
  std::vector<Spectrum> spectra(layers.size());
  std::vector<std::exception_ptr> errors(layers.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < layers.size(); i = next++) {
      try {
        report.layers[i] = analyze_layer(layers[i], c, i, &spectra[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> workers;
    const unsigned n = pool_size(c.threads, layers.size());
    for (unsigned t = 1; t < n; ++t) workers.emplace_back(work);
    work();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  report.averages = compute_averages(report.layers);
  if (spectra_out) *spectra_out = std::move(spectra);
  return report;
}

int run_analyze(const std::filesystem::path& bundle, const std::filesystem::path& out_dir,
                const AnalyzeConfig& c, std::ostream& err) {
  try {
    if (c.format != "json" && c.format != "csv" && c.format != "both") {
      fail(ErrorCode::kData, "unknown format '" + c.format + "'");
    }
    std::vector<Spectrum> spectra;
    const ModelReport report = analyze_bundle(bundle, c, &spectra);
    std::filesystem::create_directories(out_dir);
    if (c.format != "csv") {
      std::ofstream out(out_dir / "report.json");
      if (!out) fail(ErrorCode::kFormat, "cannot write report.json");
      out << report_document(report, utc_timestamp()).dump(2) << '\n';
    }
    if (c.format != "json") {
      std::ofstream out(out_dir / "report.csv");
      if (!out) fail(ErrorCode::kFormat, "cannot write report.csv");
      write_csv(out, report);
    }
    if (c.plot_data) write_plot_data(*c.plot_data, report, spectra);
    return kExitOk;
  } catch (const Error& e) {
    err << "htsr-diag analyze: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "htsr-diag analyze: " << e.what() << '\n';
    return kExitNumeric;
  }
}

std::vector<WeightMatrix> synthesize(const SynthConfig& c) {
  if (c.layers < 1) fail(ErrorCode::kData, "--layers must be >= 1");
  std::vector<WeightMatrix> out;
  for (int i = 0; i < c.layers; ++i) {
    const std::uint64_t seed = derive_seed(c.seed, static_cast<std::uint64_t>(i));
    WeightMatrix w;
    if (c.kind == "gaussian") {
      if (c.n < c.m || c.m < 2) fail(ErrorCode::kData, "gaussian needs n >= m >= 2");
      if (!(c.sigma > 0.0)) fail(ErrorCode::kData, "gaussian needs sigma > 0");
      w = sample_gaussian(c.n, c.m, c.sigma, seed);
    } else if (c.kind == "pareto") {
      if (c.n < 1 || c.m < 1) fail(ErrorCode::kData, "pareto needs positive n and m");
      if (!(c.mu > 0.0) || !(c.x_m > 0.0)) fail(ErrorCode::kData, "pareto needs mu > 0, x_m > 0");
      w = sample_pareto(c.n, c.m, c.mu, c.x_m, seed);
    } else if (c.kind == "imp") {
      if (!(c.q > 1.0) || c.m < 8) fail(ErrorCode::kData, "imp needs q > 1 and m >= 8");
      const Spectrum s = sample_imp_spectrum(c.m, c.q, seed);
      // Diagonal realization: W_ii = sqrt(N lambda_i) gives X = diag(lambda).
      w.values = Matrix::Zero(s.N, s.M);
      for (std::int64_t j = 0; j < s.M; ++j) {
        w.values(j, j) = std::sqrt(static_cast<double>(s.N) * s.eigenvalues[static_cast<std::size_t>(s.M - 1 - j)]);
      }
    } else {
      fail(ErrorCode::kData, "unknown synth kind '" + c.kind + "'");
    }
    w.name = "synth/" + c.kind + "/" + std::to_string(i);
    out.push_back(std::move(w));
  }
  return out;
}

int run_synth(const SynthConfig& c, const std::filesystem::path& out_bundle, std::ostream& err) {
  try {
    const std::vector<WeightMatrix> layers = synthesize(c);
    write_bundle(out_bundle, layers, c.dtype);
    return kExitOk;
  } catch (const Error& e) {
    err << "htsr-diag synth: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "htsr-diag synth: " << e.what() << '\n';
    return kExitNumeric;
  }
}

int run_reproduce(const ReproduceConfig& c, const std::filesystem::path& out_csv,
                  std::ostream& err) {
  try {
    if (c.seeds < 1) fail(ErrorCode::kData, "--seeds must be >= 1");
    if (c.figure != "alpha-vs-mu" && c.figure != "kappa-vs-alpha" && c.figure != "detx-gap") {
      fail(ErrorCode::kData, "unknown figure '" + c.figure + "'");
    }
    if (!out_csv.parent_path().empty()) std::filesystem::create_directories(out_csv.parent_path());
    std::ofstream out(out_csv);
    if (!out) fail(ErrorCode::kFormat, "cannot write " + out_csv.string());
    out << std::setprecision(17);
    out << "figure,parameter,Q,seed,alpha,xmin,d_ks,tail_count,lambda_min_detx,"
           "delta_lambda_min,spacing\n";
    auto opt = [](const std::optional<double>& v) {
      std::ostringstream os;
      if (v) os << std::setprecision(17) << *v;
      return os.str();
    };
    auto trial_row = [&](const AlphaTrial& t) {
      out << c.figure << ',' << t.parameter << ',' << t.Q << ',' << t.seed << ','
          << (t.fit ? opt(t.fit->alpha) : "") << ',' << (t.fit ? opt(t.fit->xmin) : "") << ','
          << (t.fit ? opt(t.fit->d_ks) : "") << ','
          << (t.fit ? std::to_string(t.fit->tail_count) : "") << ',' << opt(t.lambda_min_detx)
          << ',' << opt(t.delta_lambda_min) << ",\n";
    };
    if (c.figure == "alpha-vs-mu") {
      const std::int64_t m = c.m ? c.m : 500;
      for (double q : {1.0, 2.0}) {
        for (double mu : {1.0, 2.0, 3.0, 4.0, 5.0}) {
          for (int i = 0; i < c.seeds; ++i) {
            const auto n = static_cast<std::int64_t>(std::llround(q * static_cast<double>(m)));
            trial_row(pareto_alpha_trial(n, m, mu, derive_seed(c.seed, static_cast<std::uint64_t>(i)), true));
          }
        }
      }
    } else if (c.figure == "kappa-vs-alpha") {
      const std::int64_t m = c.m ? c.m : 500;
      for (double kappa : {0.25, 0.5, 0.75, 1.0}) {
        for (int i = 0; i < c.seeds; ++i) {
          trial_row(imp_alpha_trial(m, kappa, derive_seed(c.seed, static_cast<std::uint64_t>(i)), true));
        }
      }
    } else if (c.figure == "detx-gap") {
      const std::int64_t m = c.m ? c.m : 1000;
      for (int i = 0; i < c.seeds; ++i) {
        const DetxGapTrial t =
            detx_gap_trial(m, kIdealTailSize, derive_seed(c.seed, static_cast<std::uint64_t>(i)));
        out << c.figure << ',' << kIdealTailSize << ",2," << t.seed << ',' << t.alpha << ','
            << t.lambda_min_pl << ",,," << t.lambda_min_detx << ',' << t.delta_lambda_min << ','
            << t.spacing << '\n';
      }
    } else {
      fail(ErrorCode::kData, "unknown figure '" + c.figure + "'");
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "htsr-diag reproduce: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "htsr-diag reproduce: " << e.what() << '\n';
    return kExitNumeric;
  }
}

}  // namespace htsr
