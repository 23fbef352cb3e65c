#include "layersep/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "layersep/error.hpp"

namespace layersep::cli {

namespace {

std::vector<Measure> expand(MeasureChoice choice) {
  switch (choice) {
    case MeasureChoice::Csm: return {Measure::Csm};
    case MeasureChoice::Si: return {Measure::Si};
    case MeasureChoice::Hm: return {Measure::Hm};
    case MeasureChoice::All: return {Measure::Csm, Measure::Si, Measure::Hm};
  }
  return {};
}

// Writes `payload` to the configured output file or to `out`.
void emit(const CliConfig& config, std::ostream& out, const std::string& payload,
          bool binary = false) {
  if (config.output_path.empty()) {
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "writing to standard output failed");
    return;
  }
  std::ofstream f(config.output_path,
                  binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
  if (!f) throw Error(ErrorCode::IoError, "cannot create " + config.output_path);
  f.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  f.close();
  if (!f) throw Error(ErrorCode::IoError, "failed writing " + config.output_path);
}

NeighborOptions neighbor_options(const CliConfig& config) {
  NeighborOptions opts;
  opts.threads = config.threads;
  return opts;
}

int run_compute(const CliConfig& config, std::ostream& out) {
  const LayerStack stack = read_dump_file(config.input_path);
  const auto measures = expand(config.measure);
  const auto reports = sweep_all(stack, measures, neighbor_options(config));
  emit(config, out, write_report(reports, config.format));
  return kExitOk;
}

int run_recommend(const CliConfig& config, std::ostream& out) {
  const LayerStack stack = read_dump_file(config.input_path);
  const auto measures = expand(config.measure);
  const auto reports = sweep_all(stack, measures, neighbor_options(config));
  std::vector<Recommendation> recs;
  recs.reserve(reports.size());
  for (const auto& r : reports) recs.push_back(recommend(r));
  emit(config, out, write_recommendation_report(reports, recs, config.format));
  return kExitOk;
}

int run_correlate(const CliConfig& config, std::ostream& out) {
  std::ifstream acc_file(config.acc_path);
  if (!acc_file) throw Error(ErrorCode::IoError, "cannot open " + config.acc_path);
  const AccuracyCurve acc = read_accuracy_csv(acc_file, config.acc_units);
  const LayerStack stack = read_dump_file(config.input_path);
  const auto measures = expand(config.measure);
  const auto reports = sweep_all(stack, measures, neighbor_options(config));
  std::vector<CorrelationResult> results;
  for (const auto& r : reports) {
    try {
      results.push_back({r.measure, correlate(r, acc)});
    } catch (const Error& e) {
      throw Error(e.code(), std::string(to_string(r.measure)) + ": " + e.what());
    }
  }
  emit(config, out, write_correlations(stack.dataset_name(), results, config.format));
  return kExitOk;
}

int run_sample(const CliConfig& config, std::ostream& out) {
  const LayerStack stack = read_dump_file(config.input_path);
  const LayerStack sampled = subsample(stack, *config.fraction, config.seed);
  const auto bytes = encode_dump(sampled);
  emit(config, out,
       std::string(reinterpret_cast<const char*>(bytes.data()), bytes.size()),
       /*binary=*/true);
  return kExitOk;
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidFraction:
      return kExitUsage;
    case ErrorCode::TooFewPoints:
    case ErrorCode::EmptyClass:
    case ErrorCode::DegenerateData:
    case ErrorCode::ConstantSeries:
    case ErrorCode::SentinelPresent:
    case ErrorCode::EmptyClassAfterSampling:
      return kExitDegenerate;
    default:
      return kExitInputFormat;
  }
}

std::optional<CliConfig> parse_args(int argc, const char* const* argv,
                                    std::ostream& out, std::ostream& err,
                                    int& exit_code) {
  CLI::App app{"Per-layer class separability analysis and truncation advice",
               "layersep"};
  app.require_subcommand(1);

  CliConfig cfg;
  std::string measure = "csm";
  std::string format = "json";
  std::string units = "fraction";
  double fraction = 0.0;

  const std::map<std::string, MeasureChoice> measure_map{
      {"csm", MeasureChoice::Csm}, {"si", MeasureChoice::Si},
      {"hm", MeasureChoice::Hm}, {"all", MeasureChoice::All}};

  auto add_common = [&](CLI::App* sub, bool with_measure) {
    sub->add_option("-i,--input", cfg.input_path, "LSD1 layer dump")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("-o,--output", cfg.output_path,
                    "Output file (default: standard output)");
    sub->add_option("--threads", cfg.threads, "Worker threads (0 = auto)");
    if (with_measure) {
      sub->add_option("-m,--measure", measure, "csm, si, hm or all")
          ->check(CLI::IsMember({"csm", "si", "hm", "all"}));
      sub->add_option("-f,--format", format, "json or csv")
          ->check(CLI::IsMember({"json", "csv"}));
    }
  };

  auto* compute = app.add_subcommand("compute", "Separability value per layer");
  add_common(compute, true);
  auto* rec = app.add_subcommand("recommend", "Layer with maximum separability");
  add_common(rec, true);
  auto* corr = app.add_subcommand("correlate",
                                  "Pearson correlation with an accuracy curve");
  add_common(corr, true);
  corr->add_option("-a,--acc,--acc-path", cfg.acc_path,
                   "CSV with header layer,accuracy")
      ->required()
      ->check(CLI::ExistingFile);
  corr->add_option("--acc-units", units, "percent or fraction")
      ->check(CLI::IsMember({"percent", "fraction"}));
  auto* sample = app.add_subcommand("sample", "Uniform row subsample of a dump");
  add_common(sample, false);
  sample->add_option("--fraction", fraction, "Fraction of rows in (0, 1]")
      ->required();
  sample->add_option("--seed", cfg.seed, "Random seed");

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    exit_code = code == 0 ? kExitOk : kExitUsage;
    return std::nullopt;
  }

  if (compute->parsed()) cfg.subcommand = Subcommand::Compute;
  if (rec->parsed()) cfg.subcommand = Subcommand::Recommend;
  if (corr->parsed()) cfg.subcommand = Subcommand::Correlate;
  if (sample->parsed()) {
    cfg.subcommand = Subcommand::Sample;
    cfg.fraction = fraction;
  }
  cfg.measure = measure_map.at(measure);
  cfg.format = format == "csv" ? ReportFormat::Csv : ReportFormat::Json;
  cfg.acc_units = units == "percent" ? AccuracyUnits::Percent : AccuracyUnits::Fraction;
  exit_code = kExitOk;
  return cfg;
}

int run(const CliConfig& config, std::ostream& out, std::ostream& err) {
  if (config.subcommand == Subcommand::Sample && !config.fraction) {
    err << "error: sample requires --fraction\n";
    return kExitUsage;
  }
  if (config.subcommand != Subcommand::Sample && config.fraction) {
    err << "error: --fraction is only valid for sample\n";
    return kExitUsage;
  }
  if ((config.subcommand == Subcommand::Correlate) == config.acc_path.empty()) {
    err << "error: --acc is required for correlate and only valid there\n";
    return kExitUsage;
  }
  try {
    switch (config.subcommand) {
      case Subcommand::Compute: return run_compute(config, out);
      case Subcommand::Recommend: return run_recommend(config, out);
      case Subcommand::Correlate: return run_correlate(config, out);
      case Subcommand::Sample: return run_sample(config, out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputFormat;
  }
  return kExitUsage;
}

int main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err) {
  int code = kExitOk;
  const auto config = parse_args(argc, argv, out, err, code);
  if (!config) return code;
  return run(*config, out, err);
}

}  // namespace layersep::cli
