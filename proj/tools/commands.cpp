#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ios>

#include "config.hpp"
#include "weakmeas/errors.hpp"
#include "weakmeas/weakvalue.hpp"

namespace weakmeas::cli {

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  std::string s = buf;
  // A value that rounds to zero prints without a sign.
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string interval(const Proportion& p) {
  return fixed(p.value, 4) + "  [" + fixed(p.lower, 4) + ", " + fixed(p.upper, 4) + "]";
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::InvalidConfig:
    case Errc::InvalidCoupling:
    case Errc::InvalidDirection:
    case Errc::BadGrid:
    case Errc::ZeroStrength:
      return kExitParse;
    case Errc::TooManySteps:
      return kExitBound;
    case Errc::OrthogonalPrePost:
      return kExitUndefinedWeakValue;
    default:
      return kExitFailure;
  }
}

void apply(const Overrides& o, ExperimentConfig& config) {
  if (o.trials) config.trials = *o.trials;
  if (o.seed) config.seed = *o.seed;
  if (o.threads) config.threads = *o.threads;
  if (config.trials < 1) throw Error(Errc::InvalidConfig, "key 'trials': must be at least 1");
}

std::filesystem::path default_output(const std::filesystem::path& config) {
  const char* dir = std::getenv("WEAKMEAS_OUTPUT_DIR");
  const std::filesystem::path base = dir != nullptr && *dir != '\0' ? dir : ".";
  return base / (config.stem().string() + ".csv");
}

// Runs `body`, mapping library and I/O failures onto the exit-code taxonomy.
template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

const char* order_name(Order o) {
  return o == Order::PointerFirst ? "pointer-first" : "postselect-first";
}

}  // namespace

std::string format_complex(Complex value) {
  const std::string im = fixed(value.imag(), 12);
  return fixed(value.real(), 12) + (im.front() == '-' ? im : "+" + im) + "i";
}

std::string outcome_tuple(const Outcome& outcome) {
  std::string s;
  for (const PointerOutcome p : outcome.pointers) s += pointer_label(p);
  return s;
}

void write_run_csv(const RunLog& log, std::ostream& out) {
  out << "serial,step,pointer,final,mismatch\n";
  for (const RunRecord& r : log.records) {
    for (std::size_t j = 0; j < r.pointers.size(); ++j) {
      out << r.serial << ',' << (j + 1) << ',' << pointer_label(r.pointers[j]) << ','
          << sign_label(r.final) << ',';
      if (r.mismatch) out << (*r.mismatch ? '1' : '0');
      out << '\n';
    }
  }
}

void write_exact_csv(const ProbabilityTable& table, std::ostream& out) {
  out << "outcome_tuple,final,probability\n";
  for (const auto& [o, p] : table.entries) {
    out << outcome_tuple(o) << ',' << sign_label(o.final) << ',' << fixed(p, 12) << '\n';
  }
}

void write_summary(const RunLog& log, std::ostream& out) {
  const ExperimentConfig& c = log.config;
  out << "trials: " << log.records.size() << "  steps: " << c.steps.size()
      << "  order: " << order_name(c.order) << "  seed: " << c.seed << '\n';

  std::size_t plus = 0;
  for (const RunRecord& r : log.records) plus += r.final == Sign::Plus;
  out << "P(final=+) = " << interval(wilson(plus, log.records.size())) << '\n';

  if (c.steps.size() == 1) {
    out << "mismatch rate = " << interval(mismatch_rate(log)) << '\n';
  } else {
    out << "mismatch rate = n/a (multi-step log)\n";
  }

  const SubEnsemble subs[2] = {subensemble(log, Sign::Plus), subensemble(log, Sign::Minus)};
  for (std::size_t j = 0; j < c.steps.size(); ++j) {
    for (const SubEnsemble& sub : subs) {
      out << "step " << (j + 1) << " | final=" << sign_label(sub.selector) << " (n=" << sub.size()
          << "): ";
      if (sub.empty()) {
        out << "n/a\n";
        continue;
      }
      const MeanEstimate m = pointer_mean(sub, j);
      out << "P(u) = " << interval(conditional_frequency(sub, PointerOutcome::Up, j))
          << "  pointer mean = " << fixed(m.mean, 4) << " +/- " << fixed(m.stderr_mean, 4) << '\n';
    }
  }
}

void write_report(const ComparisonReport& report, std::ostream& out) {
  out << "outcome_tuple,final,count,empirical,exact,z\n";
  for (const OutcomeComparison& row : report.rows) {
    out << outcome_tuple(row.outcome) << ',' << sign_label(row.outcome.final) << ',' << row.count
        << ',' << fixed(row.empirical, 6) << ',' << fixed(row.exact, 6) << ',' << fixed(row.z, 3)
        << '\n';
  }
  out << "trials: " << report.trials << '\n'
      << "max |z| = " << fixed(report.max_abs_z, 3) << '\n'
      << "total variation = " << fixed(report.total_variation, 6) << '\n';
}

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ExperimentConfig config = load_config(options.config);
    apply(options.overrides, config);
    const RunLog log = run(config);

    const std::filesystem::path path = options.output.value_or(default_output(options.config));
    std::ofstream csv(path, std::ios::binary | std::ios::trunc);
    if (!csv) throw std::ios_base::failure("cannot open output '" + path.string() + "'");
    write_run_csv(log, csv);
    csv.close();
    if (!csv) throw std::ios_base::failure("failed writing '" + path.string() + "'");

    write_summary(log, out);
    out << "wrote " << path.string() << '\n';
    return static_cast<int>(kExitOk);
  });
}

int cmd_exact(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig config = load_config(config_path);
    write_exact_csv(exact_distribution(config), out);
    return static_cast<int>(kExitOk);
  });
}

int cmd_weakvalue(const WeakValueOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Ket pre = states::x_plus();
    Ket post = states::z_plus();
    std::optional<BlochDirection> direction;
    try {
      pre = parse_state(options.pre);
      post = parse_state(options.post);
      direction = parse_direction(options.direction);
    } catch (const Error& e) {
      throw Error(Errc::InvalidConfig, e.what());
    }
    const Operator observable = spin_observable(*direction);

    WeakValue wv = [&] {
      try {
        return weak_value(pre, post, observable);
      } catch (const Error& e) {
        if (e.code() == Errc::OrthogonalPrePost) {
          throw Error(Errc::OrthogonalPrePost,
                      "<post|pre> = 0, so the normalized transition amplitude <post|O|pre>/<post|pre> "
                      "has no value; no post-selected sub-ensemble exists");
        }
        throw;
      }
    }();
    out << "exact weak value: " << format_complex(wv.value) << '\n';

    if (options.epsilon.has_value() != options.trials.has_value()) {
      throw Error(Errc::InvalidConfig, "--epsilon and --trials must be given together");
    }
    if (!options.epsilon) return static_cast<int>(kExitOk);

    const UnsharpCoupling coupling = UnsharpCoupling::from_strength(*options.epsilon);
    ExperimentConfig standard = weak_value_experiment(pre, post, *direction, coupling,
                                                      Readout::Standard, *options.trials, options.seed);
    standard.threads = options.threads;
    ExperimentConfig conjugate = standard;
    conjugate.steps.front().readout = Readout::Conjugate;
    conjugate.seed = mix64(options.seed);

    const RunLog standard_log = run(standard);
    const RunLog conjugate_log = run(conjugate);
    const WeakValueEstimate est = estimate_weak_value(standard_log, coupling, &conjugate_log);
    const double eps = coupling.strength();
    const double target_re =
        exact_conditional_pointer_mean(pre, post, observable, coupling, Readout::Standard) / (2 * eps);
    const double target_im =
        -exact_conditional_pointer_mean(pre, post, observable, coupling, Readout::Conjugate) /
        (2 * eps);

    out << "coupling: a = " << fixed(coupling.a(), 6) << ", b = " << fixed(coupling.b(), 6)
        << ", epsilon = " << fixed(eps, 6) << '\n'
        << "post-selected trials: " << est.trials_used << " of " << *options.trials << '\n'
        << "estimate: re = " << fixed(est.re, 6) << " +/- " << fixed(est.stderr_re, 6)
        << ", im = " << fixed(*est.im, 6) << " +/- " << fixed(*est.stderr_im, 6) << '\n'
        << "exact expectation of the estimator: re = " << fixed(target_re, 6)
        << ", im = " << fixed(target_im, 6) << '\n';
    return static_cast<int>(kExitOk);
  });
}

int cmd_compare(const CompareOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ExperimentConfig config = load_config(options.config);
    apply(options.overrides, config);
    const ProbabilityTable exact = exact_distribution(config);
    const ComparisonReport report = compare(run(config), exact);
    write_report(report, out);
    if (report.max_abs_z >= kCompareMaxZ) {
      out << "statistical mismatch: max |z| >= " << fixed(kCompareMaxZ, 1) << '\n';
      return static_cast<int>(kExitStatisticalMismatch);
    }
    return static_cast<int>(kExitOk);
  });
}

}  // namespace weakmeas::cli
