#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "layersep/analysis.hpp"
#include "layersep/error.hpp"
#include "layersep/dumpio.hpp"
#include "layersep/measures.hpp"

namespace layersep::cli {

enum class Subcommand { Compute, Recommend, Correlate, Sample };

enum class MeasureChoice { Csm, Si, Hm, All };

struct CliConfig {
  Subcommand subcommand = Subcommand::Compute;
  std::string input_path;
  std::string output_path;  // empty = standard output
  MeasureChoice measure = MeasureChoice::Csm;
  ReportFormat format = ReportFormat::Json;
  std::optional<double> fraction;
  std::uint64_t seed = 42;
  std::string acc_path;
  AccuracyUnits acc_units = AccuracyUnits::Fraction;
  unsigned threads = 0;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInputFormat = 3;
inline constexpr int kExitDegenerate = 4;

/// Parses argv into a config. On failure or --help, returns nullopt and sets
/// `exit_code` (0 for help, kExitUsage otherwise) after printing to out/err.
std::optional<CliConfig> parse_args(int argc, const char* const* argv,
                                    std::ostream& out, std::ostream& err,
                                    int& exit_code);

/// Runs one subcommand. Data goes to `out` (or the output file), diagnostics
/// to `err`.
int run(const CliConfig& config, std::ostream& out, std::ostream& err);

/// parse_args followed by run.
int main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err);

int exit_code_for(ErrorCode code);

}  // namespace layersep::cli
