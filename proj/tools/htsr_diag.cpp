// htsr-diag: spectral diagnostics of weight-matrix bundles.

#include "htsr/commands.hpp"
#include "htsr/report.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <map>

int main(int argc, char** argv) {
  CLI::App app{"Data-free spectral diagnostics of neural-network weight matrices"};
  app.set_version_flag("--version", std::string(htsr::tool_version()));
  app.footer("Exit codes: 0 success, 2 data or parameter error, 3 numeric failure.\n\n" +
             htsr::warning_help());
  app.require_subcommand(1);

  htsr::AnalyzeConfig analyze;
  std::string bundle;
  std::string out_dir = ".";
  std::string normalize;
  std::string plot_dir;
  auto* cmd_analyze = app.add_subcommand("analyze", "Analyze every layer of a bundle");
  cmd_analyze->add_option("bundle", bundle, "Bundle directory (manifest.json + layer files)")
      ->required();
  cmd_analyze->add_option("-o,--out", out_dir, "Directory for report.json / report.csv");
  cmd_analyze->add_option("--normalize", normalize, "none or trace-m (detx always uses trace-m)")
      ->check(CLI::IsMember({"none", "trace-m"}));
  cmd_analyze->add_flag("--detx", analyze.detx, "Trace-log tail selection and Delta lambda_min");
  cmd_analyze->add_option("--randomize", analyze.randomize, "Trap-detection seeds (0 disables)")
      ->check(CLI::NonNegativeNumber);
  cmd_analyze
      ->add_option("--quality", analyze.quality, "discrete, fc, imp, lw, cumulant or all")
      ->check(CLI::IsMember({"discrete", "fc", "imp", "lw", "cumulant", "all"}));
  cmd_analyze->add_flag("--cumulant-raw-lambda", analyze.cumulant_raw_lambda,
                        "Evaluate the cumulant series at lambda instead of lambda / M~");
  cmd_analyze->add_option("--seed", analyze.seed, "Base seed");
  cmd_analyze->add_option("--format", analyze.format, "json, csv or both")
      ->check(CLI::IsMember({"json", "csv", "both"}));
  cmd_analyze->add_option("--plot-data", plot_dir, "Directory for per-layer plot CSVs");
  cmd_analyze->add_option("--min-evals", analyze.min_evals, "Positive eigenvalues needed to fit")
      ->check(CLI::PositiveNumber);
  cmd_analyze->add_option("--threads", analyze.threads, "Worker threads (0: all cores)");

  htsr::SynthConfig synth;
  std::string synth_out;
  std::string dtype = "f64";
  auto* cmd_synth = app.add_subcommand("synth", "Write a bundle of seeded random matrices");
  cmd_synth->add_option("kind", synth.kind, "gaussian, pareto or imp")
      ->required()
      ->check(CLI::IsMember({"gaussian", "pareto", "imp"}));
  cmd_synth->add_option("-o,--out", synth_out, "Output bundle directory")->required();
  cmd_synth->add_option("--n", synth.n, "Rows");
  cmd_synth->add_option("--m", synth.m, "Columns (imp: eigenvalue count)");
  cmd_synth->add_option("--sigma", synth.sigma, "Gaussian standard deviation");
  cmd_synth->add_option("--mu", synth.mu, "Pareto tail exponent");
  cmd_synth->add_option("--xm", synth.x_m, "Pareto scale");
  cmd_synth->add_option("--q", synth.q, "Inverse-MP aspect ratio (kappa = (q - 1) / 2)");
  cmd_synth->add_option("--seed", synth.seed, "Base seed");
  cmd_synth->add_option("--layers", synth.layers, "Number of layers");
  cmd_synth->add_option("--dtype", dtype, "f32 or f64")->check(CLI::IsMember({"f32", "f64"}));

  htsr::ReproduceConfig reproduce;
  std::string reproduce_out;
  auto* cmd_reproduce = app.add_subcommand("reproduce", "Run a synthetic sweep and write a CSV");
  cmd_reproduce->add_option("figure", reproduce.figure, "alpha-vs-mu, kappa-vs-alpha or detx-gap")
      ->required()
      ->check(CLI::IsMember({"alpha-vs-mu", "kappa-vs-alpha", "detx-gap"}));
  cmd_reproduce->add_option("-o,--out", reproduce_out, "Output CSV")->required();
  cmd_reproduce->add_option("--seed", reproduce.seed, "Base seed");
  cmd_reproduce->add_option("--seeds", reproduce.seeds, "Seeds per parameter value");
  cmd_reproduce->add_option("--m", reproduce.m, "Matrix size M (0: figure default)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : htsr::kExitData;
  }

  if (cmd_analyze->parsed()) {
    if (!normalize.empty()) analyze.normalize = htsr::parse_normalization(normalize);
    if (!plot_dir.empty()) analyze.plot_data = plot_dir;
    return htsr::run_analyze(bundle, out_dir, analyze, std::cerr);
  }
  if (cmd_synth->parsed()) {
    synth.dtype = dtype == "f32" ? htsr::DType::kF32 : htsr::DType::kF64;
    return htsr::run_synth(synth, synth_out, std::cerr);
  }
  return htsr::run_reproduce(reproduce, reproduce_out, std::cerr);
}
