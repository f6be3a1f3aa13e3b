#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "weakmeas/protocols.hpp"
#include "weakmeas/stats.hpp"

namespace weakmeas::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitParse = 2,
  kExitIo = 3,
  kExitBound = 4,
  kExitUndefinedWeakValue = 5,
  kExitStatisticalMismatch = 6,
};

/// Command-line values that take precedence over the config file.
struct Overrides {
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
};

struct RunOptions {
  std::filesystem::path config;
  /// Defaults to <$WEAKMEAS_OUTPUT_DIR or .>/<config stem>.csv
  std::optional<std::filesystem::path> output;
  Overrides overrides;
};

struct WeakValueOptions {
  std::string pre;
  std::string post;
  std::string direction = "z";
  std::optional<double> epsilon;
  std::optional<std::uint64_t> trials;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct CompareOptions {
  std::filesystem::path config;
  Overrides overrides;
};

/// Rejection threshold on max |z| used by `compare`.
inline constexpr double kCompareMaxZ = 5.0;

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);
int cmd_exact(const std::filesystem::path& config, std::ostream& out, std::ostream& err);
int cmd_weakvalue(const WeakValueOptions& options, std::ostream& out, std::ostream& err);
int cmd_compare(const CompareOptions& options, std::ostream& out, std::ostream& err);

/// `serial,step,pointer,final,mismatch`, one row per trial per step.
void write_run_csv(const RunLog& log, std::ostream& out);
/// `outcome_tuple,final,probability` with 12 decimal digits.
void write_exact_csv(const ProbabilityTable& table, std::ostream& out);
void write_summary(const RunLog& log, std::ostream& out);
void write_report(const ComparisonReport& report, std::ostream& out);

/// "1.000000000000+0.000000000000i"
std::string format_complex(Complex value);
std::string outcome_tuple(const Outcome& outcome);

}  // namespace weakmeas::cli
