#include "htsr/report.hpp"

#include "htsr/error.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#ifndef HTSR_VERSION
#define HTSR_VERSION "0.0.0"
#endif

namespace htsr {
namespace {

using Json = nlohmann::ordered_json;

constexpr std::array kWarnings{
    WarningCode{"fit-refused", "too few positive eigenvalues or no usable tail; fit fields are null"},
    WarningCode{"poor-fit", "power-law KS distance above 0.1"},
    WarningCode{"zero-spectrum", "lambda_max is zero; scale metrics are null"},
    WarningCode{"rand-distance-failed", "randomized ESD could not be compared"},
    WarningCode{"trap-failed", "trap detection could not run (e.g. all-zero matrix)"},
    WarningCode{"correlation-trap", "randomized ESD has spikes above lambda_plus + Delta_TW"},
    WarningCode{"trap-heavy-tail-caveat", "randomized ESD is itself heavy tailed; MP null unreliable"},
    WarningCode{"detx-failed", "no positive eigenvalues for the trace-log scan"},
    WarningCode{"detx-no-crossing", "cumulative log sum never changes sign; no unity-product tail"},
    WarningCode{"gap-unavailable", "Delta lambda_min needs a fit on the trace-m spectrum"},
    WarningCode{"quality-no-tail", "quality requested but neither an ECS nor a PL tail exists"},
    WarningCode{"quality-domain", "a quality model's parameters fell outside its domain"},
    WarningCode{"quality-nonpositive", "q2 <= 0 so log_q is null"},
    WarningCode{"quality-empty-tail", "quality tail is empty; q2 = 0"},
    WarningCode{"layer-too-small", "M < 8; excluded from model averages"},
    WarningCode{"non-finite", "a numeric field was not finite and is reported as null"},
};

Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json num(const std::optional<double>& v) { return v ? num(*v) : Json(nullptr); }

Json fit_json(const PowerLawFit& f, bool with_scan) {
  Json j;
  j["alpha"] = num(f.alpha);
  j["xmin"] = num(f.xmin);
  j["xmax"] = num(f.xmax);
  j["d_ks"] = num(f.d_ks);
  j["tail_count"] = f.tail_count;
  j["normalization"] = to_string(f.normalization);
  if (with_scan) j["scan_points"] = f.scan.size();
  return j;
}

Json quality_json(const QualityReport& q) {
  Json j;
  j["model_id"] = q.model_id;
  j["q2"] = num(q.q2);
  j["log_q"] = num(q.log_q);
  j["tail_size"] = q.tail_size;
  j["lambda_min_ecs"] = num(q.lambda_min_ecs);
  j["alpha"] = num(q.alpha);
  Json g = Json::array();
  for (double v : q.per_eigen_g) g.push_back(num(v));
  j["per_eigen_g"] = std::move(g);
  j["warnings"] = q.warnings;
  return j;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_num(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return {};
  std::ostringstream os;
  os << std::setprecision(17) << *v;
  return os.str();
}

std::string file_stem(std::size_t index, const std::string& name) {
  std::ostringstream os;
  os << std::setw(4) << std::setfill('0') << index << '_';
  for (char c : name) {
    const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    os << (keep ? c : '_');
  }
  return os.str();
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) fail(ErrorCode::kFormat, "cannot write " + p.string());
  out << std::setprecision(17);
  return out;
}

}  // namespace

std::string_view tool_version() { return HTSR_VERSION; }

std::span<const WarningCode> warning_codes() { return kWarnings; }

std::string warning_help() {
  std::ostringstream os;
  os << "Warning codes:\n";
  for (const auto& w : kWarnings) {
    os << "  " << std::left << std::setw(24) << w.code << w.meaning << '\n';
  }
  return os.str();
}

ModelAverages compute_averages(std::span<const LayerReport> layers) {
  std::vector<double> alpha, alpha_hat, lsn;
  ModelAverages a;
  for (const auto& l : layers) {
    if (!l.averaged) continue;
    ++a.layers_averaged;
    if (l.metrics.alpha) alpha.push_back(*l.metrics.alpha);
    if (l.metrics.alpha_hat) alpha_hat.push_back(*l.metrics.alpha_hat);
    if (l.metrics.log_spectral_norm) lsn.push_back(*l.metrics.log_spectral_norm);
  }
  if (!alpha.empty()) a.alpha = model_average(alpha, AverageMode::kMean);
  if (!alpha_hat.empty()) a.alpha_hat = model_average(alpha_hat, AverageMode::kMean);
  if (!lsn.empty()) a.log_spectral_norm = model_average(lsn, AverageMode::kMean);
  return a;
}

Json to_json(const LayerReport& l) {
  Json j;
  j["name"] = l.name;
  j["transposed"] = l.transposed;
  j["normalization"] = to_string(l.normalization);
  j["seed"] = l.seed;
  j["spectrum"] = {{"N", l.spectrum.N},
                   {"M", l.spectrum.M},
                   {"Q", num(l.spectrum.Q)},
                   {"lambda_max", num(l.spectrum.lambda_max)},
                   {"lambda_min_positive", num(l.spectrum.lambda_min_positive)},
                   {"zero_count", l.spectrum.zero_count}};
  j["fit"] = l.fit ? fit_json(*l.fit, true) : Json(nullptr);
  j["metrics"] = {{"alpha", num(l.metrics.alpha)},
                  {"log_spectral_norm", num(l.metrics.log_spectral_norm)},
                  {"alpha_hat", num(l.metrics.alpha_hat)},
                  {"d_ks", num(l.metrics.d_ks)},
                  {"rand_distance", num(l.metrics.rand_distance)},
                  {"universality", to_string(l.metrics.universality)}};
  if (l.erg) {
    j["erg"] = {{"lambda_min_detx", num(l.erg->lambda_min_detx)},
                {"residual", num(l.erg->residual)},
                {"tail_count", l.erg->tail_count},
                {"crossed", l.erg->crossed},
                {"normalization", to_string(l.erg->normalization)},
                {"curve_points", l.erg->curve.size()}};
  } else {
    j["erg"] = nullptr;
  }
  if (l.gap) {
    j["gap"] = {{"delta_lambda_min", num(l.gap->delta_lambda_min)},
                {"lambda_min_pl", num(l.erg_fit ? l.erg_fit->xmin : NAN)},
                {"alpha", num(l.erg_fit ? l.erg_fit->alpha : NAN)}};
  } else {
    j["gap"] = nullptr;
  }
  if (l.traps) {
    const TrapReport& t = *l.traps;
    Json eig = Json::array();
    for (double v : t.trap_eigenvalues) eig.push_back(num(v));
    j["traps"] = {{"sigma2_hat", num(t.sigma2_hat)},
                  {"lambda_plus", num(t.lambda_plus)},
                  {"delta_tw", num(t.delta_tw)},
                  {"trap_eigenvalues", std::move(eig)},
                  {"has_trap", t.has_trap},
                  {"num_seeds", t.num_seeds},
                  {"detection_fraction", num(t.detection_fraction)},
                  {"heavy_tail_caveat", t.heavy_tail_caveat},
                  {"randomized_alpha", t.randomized_alpha > 0.0 ? num(t.randomized_alpha) : Json(nullptr)}};
  } else {
    j["traps"] = nullptr;
  }
  Json q = Json::object();
  for (const auto& r : l.quality) q[r.model_id] = quality_json(r);
  j["quality"] = std::move(q);
  j["quality_tail"] = l.quality_tail.empty() ? Json(nullptr) : Json(l.quality_tail);
  j["averaged"] = l.averaged;
  j["warnings"] = l.warnings;
  return j;
}

Json report_body(const ModelReport& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["tool_version"] = tool_version();
  j["bundle"] = r.bundle;
  const AnalyzeConfig& c = r.config;
  j["config"] = {{"normalize", to_string(c.normalize.value_or(Normalization::kNone))},
                 {"detx", c.detx},
                 {"detx_normalization", "trace-m"},
                 {"randomize", c.randomize},
                 {"quality", c.quality},
                 {"seed", c.seed},
                 {"min_evals", c.min_evals},
                 {"cumulant_raw_lambda", c.cumulant_raw_lambda}};
  j["seeds"] = {{"base", c.seed}, {"derivation", "splitmix64(base, layer_index)"}};
  Json layers = Json::array();
  for (const auto& l : r.layers) layers.push_back(to_json(l));
  j["layers"] = std::move(layers);
  j["averages"] = {{"mode", "mean"},
                   {"alpha", num(r.averages.alpha)},
                   {"alpha_hat", num(r.averages.alpha_hat)},
                   {"log_spectral_norm", num(r.averages.log_spectral_norm)},
                   {"layers_averaged", r.averages.layers_averaged}};
  return j;
}

Json report_document(const ModelReport& r, std::string_view timestamp) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["body"] = report_body(r);
  j["run"] = {{"timestamp", timestamp}};
  return j;
}

void write_csv(std::ostream& out, const ModelReport& r) {
  out << "name,N,M,Q,normalization,lambda_max,alpha,xmin,tail_count,d_ks,alpha_hat,"
         "log_spectral_norm,rand_distance,universality,lambda_min_detx,delta_lambda_min,"
         "has_trap,detection_fraction,averaged,warnings\n";
  for (const auto& l : r.layers) {
    std::string warnings;
    for (const auto& w : l.warnings) warnings += (warnings.empty() ? "" : ";") + w;
    out << csv_field(l.name) << ',' << l.spectrum.N << ',' << l.spectrum.M << ','
        << csv_num(l.spectrum.Q) << ',' << to_string(l.normalization) << ','
        << csv_num(l.spectrum.lambda_max) << ',' << csv_num(l.metrics.alpha) << ','
        << (l.fit ? csv_num(l.fit->xmin) : "") << ','
        << (l.fit ? std::to_string(l.fit->tail_count) : "") << ',' << csv_num(l.metrics.d_ks)
        << ',' << csv_num(l.metrics.alpha_hat) << ',' << csv_num(l.metrics.log_spectral_norm)
        << ',' << csv_num(l.metrics.rand_distance) << ',' << to_string(l.metrics.universality)
        << ',' << (l.erg ? csv_num(l.erg->lambda_min_detx) : "") << ','
        << (l.gap ? csv_num(l.gap->delta_lambda_min) : "") << ','
        << (l.traps ? (l.traps->has_trap ? "true" : "false") : "") << ','
        << (l.traps ? csv_num(l.traps->detection_fraction) : "") << ','
        << (l.averaged ? "true" : "false") << ',' << csv_field(warnings) << '\n';
  }
}

void write_plot_data(const std::filesystem::path& dir, const ModelReport& r,
                     std::span<const Spectrum> spectra) {
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < r.layers.size(); ++i) {
    const LayerReport& l = r.layers[i];
    const std::string stem = file_stem(i, l.name);
    if (l.fit) {
      auto out = open_out(dir / (stem + "_xmin_scan.csv"));
      out << "xmin,alpha,d_ks\n";
      for (const auto& p : l.fit->scan) out << p.xmin << ',' << p.alpha << ',' << p.d_ks << '\n';
    }
    if (l.erg) {
      auto out = open_out(dir / (stem + "_ecs_curve.csv"));
      out << "k,lambda,cumulative_log,in_ecs\n";
      for (std::size_t k = 0; k < l.erg->curve.size(); ++k) {
        const auto& p = l.erg->curve[k];
        out << k + 1 << ',' << p.lambda << ',' << p.cumulative_log << ','
            << (static_cast<std::int64_t>(k) < l.erg->tail_count ? 1 : 0) << '\n';
      }
    }
    if (i < spectra.size() && spectra[i].lambda_max() > 0.0) {
      const Spectrum& s = spectra[i];
      const LogHistogram h = log_histogram(s, 100);
      auto out = open_out(dir / (stem + "_esd.csv"));
      out << "ln_lo,ln_hi,density,pl_density\n";
      for (std::size_t b = 0; b < h.bins(); ++b) {
        out << h.bin_edges[b] << ',' << h.bin_edges[b + 1] << ',' << h.densities[b] << ',';
        // Tail density in ln(lambda): (n_tail / M) (alpha - 1) (lambda / xmin)^(1 - alpha).
        const double centre = 0.5 * (h.bin_edges[b] + h.bin_edges[b + 1]);
        if (l.fit && centre >= std::log(l.fit->xmin)) {
          const double frac = static_cast<double>(l.fit->tail_count) / static_cast<double>(s.M);
          out << frac * (l.fit->alpha - 1.0) *
                     std::exp((1.0 - l.fit->alpha) * (centre - std::log(l.fit->xmin)));
        }
        out << '\n';
      }
    }
  }
}

}  // namespace htsr
