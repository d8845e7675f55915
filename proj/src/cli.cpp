#include "cograd/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cograd/baselines.hpp"
#include "cograd/estimator.hpp"
#include "cograd/montecarlo.hpp"
#include "cograd/null_dist.hpp"
#include "cograd/step_function.hpp"

namespace cograd::cli {
namespace {

using nlohmann::ordered_json;

/// Unreadable or syntactically invalid user input; maps to exit code 2.
class MalformedInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string strip(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(first, last - first + 1));
}

double parse_double(const std::string& text, const std::string& what) {
  double out = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end) {
    throw MalformedInput("cannot parse " + what + " \"" + text + "\" as a number");
  }
  return out;
}

long long parse_integer(const std::string& text, const std::string& what) {
  long long out = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end) {
    throw MalformedInput("cannot parse " + what + " \"" + text + "\" as an integer");
  }
  return out;
}

std::uint64_t parse_u64(const std::string& text, const std::string& what) {
  std::uint64_t out = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end) {
    throw MalformedInput("cannot parse " + what + " \"" + text + "\" as an unsigned integer");
  }
  return out;
}

int null_ceiling_from_env() {
  const char* env = std::getenv("COGRAD_NULL_CEILING");
  if (env == nullptr) return kDefaultNullCeiling;
  const long long value = parse_integer(env, "COGRAD_NULL_CEILING");
  if (value < 2 || value > 20) {
    throw MalformedInput("COGRAD_NULL_CEILING must lie in [2, 20], got " + std::string(env));
  }
  return static_cast<int>(value);
}

// ---------------------------------------------------------------------------
// CSV ingestion
// ---------------------------------------------------------------------------

struct CsvColumns {
  std::vector<std::string> x;
  std::vector<std::string> y;
};

CsvColumns read_xy_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedInput("cannot open \"" + path + "\"");
  CsvColumns cols;
  std::string line;
  std::size_t lineno = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string text = strip(line);
    if (text.empty()) continue;
    if (!saw_header) {
      std::string compact;
      for (const char ch : text) {
        if (ch != ' ' && ch != '\t') compact.push_back(ch);
      }
      if (compact != "x,y") {
        throw MalformedInput(path + ":" + std::to_string(lineno) +
                             ": expected header \"x,y\", got \"" + text + "\"");
      }
      saw_header = true;
      continue;
    }
    const auto comma = text.find(',');
    if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos) {
      throw MalformedInput(path + ":" + std::to_string(lineno) +
                           ": expected exactly two comma-separated fields");
    }
    const std::string xf = strip(text.substr(0, comma));
    const std::string yf = strip(text.substr(comma + 1));
    if (xf.empty() || yf.empty()) {
      throw MalformedInput(path + ":" + std::to_string(lineno) + ": empty field");
    }
    cols.x.push_back(xf);
    cols.y.push_back(yf);
  }
  if (!saw_header) throw MalformedInput(path + ": no header line");
  if (cols.x.size() < 2) throw MalformedInput(path + ": need at least two data rows");
  return cols;
}

template <class Scalar>
Scalar parse_field(const std::string& text);

template <>
Rational parse_field<Rational>(const std::string& text) {
  try {
    return Rational::from_decimal(text);
  } catch (const std::exception& e) {
    throw MalformedInput("cannot parse \"" + text + "\" as a decimal: " + e.what());
  }
}

template <>
double parse_field<double>(const std::string& text) {
  return parse_double(text, "field");
}

template <class Scalar>
SampleT<Scalar> to_sample(const CsvColumns& cols) {
  const int n = static_cast<int>(cols.x.size());
  Vector<Scalar> x(n);
  Vector<Scalar> y(n);
  for (int i = 0; i < n; ++i) {
    x[i] = parse_field<Scalar>(cols.x[i]);
    y[i] = parse_field<Scalar>(cols.y[i]);
  }
  return make_sample(std::move(x), std::move(y));
}

// ---------------------------------------------------------------------------
// JSON helpers
// ---------------------------------------------------------------------------

ordered_json rational_json(const Rational& r) {
  return ordered_json{{"num", r.num()}, {"den", r.den()}};
}

/// Extended real: +/-infinity serialized as the strings "inf"/"-inf".
ordered_json extended_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

void emit(const ordered_json& out) { std::cout << out.dump() << "\n"; }

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------

template <class Scalar>
int do_fit(const CsvColumns& cols, const std::optional<double>& level, int ceiling) {
  const SampleT<Scalar> sample = to_sample<Scalar>(cols);
  const GiniStepFunctionT<Scalar> step = build_step_function(sample);
  const SlopeEstimateT<Scalar> est = point_estimate(step);
  const BaselineFitT<Scalar> base = baseline_fit(sample);

  ordered_json out;
  out["schema_version"] = 1;
  out["n"] = sample.size();
  out["breakpoint_count"] = step.breakpoints.size();
  out["beta_tilde"] = scalar_ops<Scalar>::to_double(est.beta_tilde);
  out["beta_hat"] = scalar_ops<Scalar>::to_double(base.beta_hat);
  out["beta_star"] = scalar_ops<Scalar>::to_double(base.beta_star);
  if (est.zero_plateau) {
    out["zero_plateau"] = {scalar_ops<Scalar>::to_double(est.zero_plateau->first),
                           scalar_ops<Scalar>::to_double(est.zero_plateau->second)};
  } else {
    out["zero_plateau"] = nullptr;
  }

  if (level) {
    if (!(*level > 0.0 && *level < 1.0)) {
      throw MalformedInput("--level must lie strictly between 0 and 1");
    }
    Rational g_star(0);
    std::optional<Rational> achieved;
    const char* source = "exact";
    if (sample.size() <= ceiling) {
      const NullDistribution null = exact_null(sample.size(), ceiling);
      const auto [g, level_reached] = critical_value(null, *level);
      g_star = g;
      achieved = level_reached;
    } else {
      const double z = normal_quantile(0.5 + *level / 2);
      g_star = Rational::from_double(
          std::min(1.0, z * std::sqrt(2.0 / (3.0 * sample.size()))));
      source = "asymptotic_normal";
    }
    const auto [lower, upper] = ci_bounds(step, g_star);
    ordered_json ci;
    ci["lower"] = scalar_ops<Scalar>::to_double(lower);
    ci["upper"] = scalar_ops<Scalar>::to_double(upper);
    ci["g_star"] = rational_json(g_star);
    ci["achieved_level"] = achieved ? rational_json(*achieved) : ordered_json(nullptr);
    ci["target_level"] = *level;
    ci["null_source"] = source;
    out["ci"] = ci;
  } else {
    out["ci"] = nullptr;
  }
  emit(out);
  return 0;
}

// ---------------------------------------------------------------------------
// gtrace
// ---------------------------------------------------------------------------

template <class Scalar>
std::string endpoint_text(const Scalar& value);

template <>
std::string endpoint_text<Rational>(const Rational& value) {
  return value.to_decimal_string();
}

template <>
std::string endpoint_text<double>(const double& value) {
  return ordered_json(value).dump();  // shortest round-trip decimal
}

template <class Scalar>
int do_gtrace(const CsvColumns& cols, bool json_mode) {
  const SampleT<Scalar> sample = to_sample<Scalar>(cols);
  const GiniStepFunctionT<Scalar> step = build_step_function(sample);
  const std::size_t r = step.breakpoints.size();

  std::vector<std::array<std::string, 2>> bounds(r + 1);
  for (std::size_t k = 0; k <= r; ++k) {
    bounds[k][0] = (k == 0) ? "-inf" : endpoint_text<Scalar>(step.breakpoints[k - 1]);
    bounds[k][1] = (k == r) ? "+inf" : endpoint_text<Scalar>(step.breakpoints[k]);
  }

  if (json_mode) {
    ordered_json rows = ordered_json::array();
    for (std::size_t k = 0; k <= r; ++k) {
      const Rational v = step.values[k].reduced();
      rows.push_back(ordered_json{{"interval_left", bounds[k][0]},
                                  {"interval_right", bounds[k][1]},
                                  {"value_num", v.num()},
                                  {"value_den", v.den()}});
    }
    ordered_json out;
    out["schema_version"] = 1;
    out["n"] = sample.size();
    out["rows"] = rows;
    emit(out);
  } else {
    std::cout << "interval_left,interval_right,value_num,value_den\n";
    for (std::size_t k = 0; k <= r; ++k) {
      const Rational v = step.values[k].reduced();
      std::cout << bounds[k][0] << ',' << bounds[k][1] << ',' << v.num() << ',' << v.den()
                << '\n';
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// nulltable
// ---------------------------------------------------------------------------

int do_nulltable(int n, const std::optional<long long>& reps, std::uint64_t seed, bool json_mode,
                 int ceiling) {
  const NullDistribution dist =
      reps ? monte_carlo_null(n, *reps, seed) : exact_null(n, ceiling);
  const bool exact = dist.source == NullDistribution::Source::exact;
  const char* total_name = exact ? "n_factorial" : "reps";

  if (json_mode) {
    ordered_json rows = ordered_json::array();
    for (std::size_t k = 0; k < dist.support.size(); ++k) {
      rows.push_back(ordered_json{{"value_num", dist.support[k].num()},
                                  {"value_den", dist.support[k].den()},
                                  {"count", dist.counts[k]}});
    }
    ordered_json out;
    out["schema_version"] = 1;
    out["n"] = n;
    out["source"] = exact ? "exact" : "monte_carlo";
    out[total_name] = dist.total;
    if (!exact) out["seed"] = dist.seed;
    out["rows"] = rows;
    emit(out);
  } else {
    std::cout << "value_num,value_den,count," << total_name << "\n";
    for (std::size_t k = 0; k < dist.support.size(); ++k) {
      std::cout << dist.support[k].num() << ',' << dist.support[k].den() << ','
                << dist.counts[k] << ',' << dist.total << '\n';
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// are
// ---------------------------------------------------------------------------

int do_are(const std::string& model_name) {
  const DistributionModel model = model_by_name(model_name);
  const EfficiencyReport report = efficiency_report(model, linear_design());
  ordered_json out;
  out["schema_version"] = 1;
  out["model"] = model.label;
  out["C"] = report.C;
  out["B"] = report.B;
  out["sigma2"] = extended_json(report.sigma2);
  out["are_vs_ols"] = extended_json(report.are_vs_ols);
  out["are_vs_theil"] = report.are_vs_theil;
  out["var_tilde_unitT2"] = report.var_tilde;
  emit(out);
  return 0;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

SimulationConfig parse_simulation_config(const std::string& path, int ceiling) {
  std::ifstream in(path);
  if (!in) throw MalformedInput("cannot open \"" + path + "\"");

  SimulationConfig config;
  config.null_ceiling = ceiling;
  bool saw_n = false;
  bool saw_reps = false;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string text = strip(line);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw MalformedInput(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = strip(text.substr(0, eq));
    const std::string value = strip(text.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw MalformedInput(path + ":" + std::to_string(lineno) + ": empty key or value");
    }
    if (key == "model") {
      config.model = value;
    } else if (key == "design") {
      config.design = value;
    } else if (key == "n") {
      config.n = static_cast<int>(parse_integer(value, "n"));
      saw_n = true;
    } else if (key == "reps") {
      config.reps = parse_integer(value, "reps");
      saw_reps = true;
    } else if (key == "beta") {
      config.beta_true = parse_double(value, "beta");
    } else if (key == "alpha") {
      config.alpha_true = parse_double(value, "alpha");
    } else if (key == "seed") {
      config.seed = parse_u64(value, "seed");
    } else if (key == "level") {
      config.target_level = parse_double(value, "level");
      config.compute_ci = true;
    } else if (key == "threads") {
      config.threads = static_cast<int>(parse_integer(value, "threads"));
    } else {
      throw MalformedInput(path + ":" + std::to_string(lineno) + ": unknown key \"" + key +
                           "\"");
    }
  }
  if (!saw_n || !saw_reps) {
    throw MalformedInput(path + ": config must set both n and reps");
  }
  return config;
}

ordered_json stats_json(const EstimatorStats& stats) {
  return ordered_json{{"mean", stats.mean}, {"variance", stats.variance}, {"bias", stats.bias}};
}

int do_simulate(const std::string& path, const std::optional<long long>& reps_override,
                const std::optional<std::uint64_t>& seed_override, int ceiling) {
  SimulationConfig config = parse_simulation_config(path, ceiling);
  if (reps_override) config.reps = *reps_override;
  if (seed_override) config.seed = *seed_override;

  const SimulationReport report = run_simulation(config);

  ordered_json out;
  out["schema_version"] = 1;
  out["model"] = config.model;
  out["design"] = config.design;
  out["n"] = report.n;
  out["reps"] = report.reps;
  out["beta_true"] = config.beta_true;
  out["alpha_true"] = config.alpha_true;
  out["seed"] = report.seed;
  out["threads"] = config.threads;
  out["beta_tilde"] = stats_json(report.beta_tilde);
  out["beta_hat"] = stats_json(report.beta_hat);
  out["beta_star"] = stats_json(report.beta_star);
  // NaN (no asymptotic reference for the design) serializes as null.
  out["variance_ratio_tilde"] = report.variance_ratio_tilde;
  out["null_variance_scaled"] = report.null_variance_scaled;
  if (report.ci) {
    ordered_json ci;
    ci["coverage"] = report.ci->coverage;
    ci["g_star"] = rational_json(report.ci->g_star);
    ci["achieved_level"] = rational_json(report.ci->achieved_level);
    ci["target_level"] = report.ci->target_level;
    out["ci"] = ci;
  } else {
    out["ci"] = nullptr;
  }
  out["runtime_seconds"] = report.runtime_seconds;
  emit(out);
  return 0;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Slope estimation by driving the rank cograduation index to zero"};
  app.require_subcommand(1);

  std::string csv_path;
  std::string model_name;
  std::string config_path;
  std::optional<double> level;
  bool exact_numbers = true;
  bool json_mode = false;
  std::optional<long long> reps;
  std::optional<std::uint64_t> seed;
  int table_n = 0;

  CLI::App* fit = app.add_subcommand("fit", "Estimate the slope from an x,y CSV file");
  fit->add_option("csv", csv_path, "CSV file with header x,y")->required();
  fit->add_option("--level", level, "confidence level in (0,1); adds an interval to the output");
  fit->add_flag("--exact,!--float", exact_numbers,
                "parse decimals exactly (default) or as binary doubles");

  CLI::App* gtrace =
      app.add_subcommand("gtrace", "Emit the full step function of the index as CSV");
  gtrace->add_option("csv", csv_path, "CSV file with header x,y")->required();
  gtrace->add_flag("--exact,!--float", exact_numbers,
                   "parse decimals exactly (default) or as binary doubles");
  gtrace->add_flag("--json", json_mode, "emit JSON instead of CSV");

  CLI::App* nulltable =
      app.add_subcommand("nulltable", "Tabulate the index distribution under indifference");
  nulltable->add_option("n", table_n, "sample size")->required()->check(CLI::Range(2, 1000000));
  nulltable->add_option("--reps", reps,
                        "sample permutations instead of enumerating (Monte Carlo null)");
  nulltable->add_option("--seed", seed, "seed for the Monte Carlo null");
  nulltable->add_flag("--json", json_mode, "emit JSON instead of CSV");

  CLI::App* are = app.add_subcommand(
      "are", "Report asymptotic constants and relative efficiencies for an error model");
  are->add_option("model", model_name, "normal, laplace, cauchy, or uniform")->required();

  CLI::App* simulate =
      app.add_subcommand("simulate", "Run a seeded sampling experiment from a config file");
  simulate->add_option("config", config_path, "key = value config file")->required();
  simulate->add_option("--reps", reps, "override the config's replication count");
  simulate->add_option("--seed", seed, "override the config's seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Fold CLI11's assorted parse-error codes into the usage exit code; keep
    // --help / --version at 0.
    const int code = app.exit(e, std::cerr, std::cerr);
    return code == 0 ? 0 : 2;
  }

  try {
    const int ceiling = null_ceiling_from_env();
    if (fit->parsed()) {
      const CsvColumns cols = read_xy_csv(csv_path);
      return exact_numbers ? do_fit<Rational>(cols, level, ceiling)
                           : do_fit<double>(cols, level, ceiling);
    }
    if (gtrace->parsed()) {
      const CsvColumns cols = read_xy_csv(csv_path);
      return exact_numbers ? do_gtrace<Rational>(cols, json_mode)
                           : do_gtrace<double>(cols, json_mode);
    }
    if (nulltable->parsed()) {
      return do_nulltable(table_n, reps, seed.value_or(0), json_mode, ceiling);
    }
    if (are->parsed()) {
      return do_are(model_name);
    }
    if (simulate->parsed()) {
      return do_simulate(config_path, reps, seed, ceiling);
    }
    std::cerr << "error: no command selected\n";
    return 1;
  } catch (const MalformedInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DuplicateAbscissa& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const LevelUnattainable& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace cograd::cli
