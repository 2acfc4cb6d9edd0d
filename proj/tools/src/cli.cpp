#include "binfit_cli/cli.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "binfit/errors.hpp"
#include "binfit/parallel.hpp"
#include "binfit/synthetic.hpp"

namespace binfit::cli {
namespace {

using nlohmann::json;

// Invocation problems that map to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool parse_yes_no(const std::string& v) {
  const std::string l = lower(v);
  if (l == "y" || l == "yes") return true;
  if (l == "n" || l == "no") return false;
  throw UsageError(fmt::format("expected Y or N, got '{}'", v));
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

std::string num(double v) {
  if (std::isnan(v)) return "NA";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.10g}", v);
}

// ---------------------------------------------------------------------------
// Config file

struct Settings {
  FitConfig fit;
  GeneratorSpec generator;
};

void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                    const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find_if(known.begin(), known.end(), [&](const char* k) { return key == k; }) ==
        known.end()) {
      throw UsageError(fmt::format("config: unknown key '{}' in {}", key, where));
    }
  }
}

std::vector<PowerExponent> parse_grid(const json& j, const std::string& name) {
  std::vector<PowerExponent> grid;
  for (const auto& v : j) {
    const int m = v.get<int>();
    if (m < 0) throw UsageError(fmt::format("config: {} entries must be >= 0 (0 = log)", name));
    grid.push_back(m == 0 ? PowerExponent::log() : PowerExponent::root(m));
  }
  if (grid.empty()) throw UsageError(fmt::format("config: {} is empty", name));
  return grid;
}

double edge_value(const json& v) {
  if (v.is_null()) return kInf;
  if (v.is_string()) {
    const std::string s = lower(v.get<std::string>());
    if (s == "inf" || s == "infinity") return kInf;
    throw UsageError(fmt::format("config: bad bin edge '{}'", v.get<std::string>()));
  }
  return v.get<double>();
}

GeneratingFamily make_family(const std::string& name, const std::map<std::string, double>& p) {
  auto get = [&](const char* key, double fallback) {
    const auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
  };
  auto only = [&](std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : p) {
      if (std::find_if(keys.begin(), keys.end(), [&](const char* x) { return k == x; }) ==
          keys.end()) {
        throw UsageError(fmt::format("generator family '{}' has no parameter '{}'", name, k));
      }
    }
  };
  const std::string l = lower(name);
  if (l == "lognormal") {
    only({"mu", "sigma"});
    const LognormalGen d;
    return LognormalGen{get("mu", d.mu), get("sigma", d.sigma)};
  }
  if (l == "gamma") {
    only({"shape", "scale"});
    const GammaGen d;
    return GammaGen{get("shape", d.shape), get("scale", d.scale)};
  }
  if (l == "weibull") {
    only({"shape", "scale"});
    const WeibullGen d;
    return WeibullGen{get("shape", d.shape), get("scale", d.scale)};
  }
  if (l == "dagum") {
    only({"a", "b", "p"});
    return DagumParams{get("a", 3.0), get("b", 50000.0), get("p", 0.8)};
  }
  throw UsageError(fmt::format("unknown generator family '{}'", name));
}

Settings load_settings(const std::string& path) {
  Settings s;
  if (path.empty()) return s;
  std::ifstream in(path);
  if (!in) throw UsageError(fmt::format("cannot open config file '{}'", path));
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError(fmt::format("{}: {}", path, e.what()));
  }
  try {
    if (!root.is_object()) throw UsageError("config: top level must be an object");
    reject_unknown(root, {"fit", "eligibility", "generator"}, "top level");
    if (root.contains("fit")) {
      const json& f = root["fit"];
      reject_unknown(f,
                     {"max_iterations", "param_tol", "loglik_tol", "restarts", "top_bin_factor",
                      "pn_grid", "pl_grid", "seed"},
                     "fit");
      s.fit.max_iterations = f.value("max_iterations", s.fit.max_iterations);
      s.fit.param_tol = f.value("param_tol", s.fit.param_tol);
      s.fit.loglik_tol = f.value("loglik_tol", s.fit.loglik_tol);
      s.fit.restarts = f.value("restarts", s.fit.restarts);
      s.fit.top_bin_factor = f.value("top_bin_factor", s.fit.top_bin_factor);
      s.fit.seed = f.value("seed", s.fit.seed);
      if (f.contains("pn_grid")) s.fit.pn_grid = parse_grid(f["pn_grid"], "pn_grid");
      if (f.contains("pl_grid")) s.fit.pl_grid = parse_grid(f["pl_grid"], "pl_grid");
    }
    if (root.contains("eligibility")) {
      const json& e = root["eligibility"];
      reject_unknown(e, {"min_total", "min_nonzero_bins"}, "eligibility");
      s.fit.eligibility.min_total = e.value("min_total", s.fit.eligibility.min_total);
      s.fit.eligibility.min_nonzero_bins =
          e.value("min_nonzero_bins", s.fit.eligibility.min_nonzero_bins);
    }
    if (root.contains("generator")) {
      const json& g = root["generator"];
      reject_unknown(g,
                     {"family", "params", "units", "min_size", "max_size", "census_rounding",
                      "scale_jitter", "seed", "bin_edges"},
                     "generator");
      std::map<std::string, double> params;
      if (g.contains("params")) params = g["params"].get<std::map<std::string, double>>();
      s.generator.family = make_family(g.value("family", std::string("lognormal")), params);
      s.generator.n_units = g.value("units", s.generator.n_units);
      s.generator.min_size = g.value("min_size", s.generator.min_size);
      s.generator.max_size = g.value("max_size", s.generator.max_size);
      s.generator.census_rounding = g.value("census_rounding", s.generator.census_rounding);
      s.generator.scale_jitter = g.value("scale_jitter", s.generator.scale_jitter);
      s.generator.seed = g.value("seed", s.generator.seed);
      if (g.contains("bin_edges")) {
        s.generator.bin_edges.clear();
        for (const auto& v : g["bin_edges"]) s.generator.bin_edges.push_back(edge_value(v));
      }
    }
  } catch (const json::exception& e) {
    throw UsageError(fmt::format("{}: {}", path, e.what()));
  }
  try {
    check(s.fit);
  } catch (const DomainError& e) {
    throw UsageError(fmt::format("{}: {}", path, e.what()));
  }
  return s;
}

// ---------------------------------------------------------------------------
// fit

struct FitRow {
  std::string id;
  std::string dist;
  double mu = NAN, sigma = NAN, lambda = NAN, a = NAN, b = NAN, p = NAN, q = NAN;
  MomentSummary moments;
  double loglik = NAN;
  std::string flags;
  std::string error;
};

constexpr const char* kFitHeader =
    "id,_DIST_,mu,sigma,lambda,a,b,p,q,mean,variance,sd,cv,loglik,flags,error";

FitRow make_row(const std::string& id, Estimator estimator, const UnitFit& u) {
  FitRow r;
  r.id = id;
  r.moments = u.moments;
  if (!u.error.empty()) {
    r.dist = to_string(estimator);
    r.error = u.error_kind;
    return r;
  }
  if (!u.fit) {
    r.dist = to_string(estimator);
    return r;
  }
  const FitResult& f = *u.fit;
  r.dist = to_string(f.family);
  r.loglik = f.loglik;
  r.flags = f.flags.to_string();
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, EggParams>) {
          r.mu = p.mu, r.sigma = p.sigma, r.lambda = p.lambda;
        } else if constexpr (std::is_same_v<T, PowerParams>) {
          r.mu = p.mu, r.sigma = p.sigma, r.lambda = p.exponent.lambda();
        } else if constexpr (std::is_same_v<T, DagumParams>) {
          r.a = p.a, r.b = p.b, r.p = p.p;
        } else {
          r.a = p.a, r.b = p.b, r.p = p.p, r.q = p.q;
        }
      },
      f.params);
  return r;
}

void write_row(std::ostream& out, const FitRow& r) {
  out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", csv_field(r.id), r.dist,
                     num(r.mu), num(r.sigma), num(r.lambda), num(r.a), num(r.b), num(r.p),
                     num(r.q), to_string(r.moments.mean), to_string(r.moments.variance),
                     to_string(r.moments.sd), to_string(r.moments.cv), num(r.loglik), r.flags,
                     r.error);
}

void print_table(std::ostream& out, const std::vector<FitRow>& rows) {
  std::size_t w = 2;
  for (const auto& r : rows) w = std::max(w, r.id.size());
  out << fmt::format("{:<{}}  {:<8} {:>14} {:>14} {:>8} {:>14}  {}\n", "id", w, "_DIST_", "mean",
                     "sd", "cv", "loglik", "notes");
  for (const auto& r : rows) {
    out << fmt::format("{:<{}}  {:<8} {:>14} {:>14} {:>8} {:>14}  {}\n", r.id, w, r.dist,
                       to_string(r.moments.mean), to_string(r.moments.sd),
                       r.moments.cv.is_finite() ? fmt::format("{:.4f}", r.moments.cv.value)
                                                : to_string(r.moments.cv),
                       std::isnan(r.loglik) ? std::string("NA") : fmt::format("{:.4f}", r.loglik),
                       r.error.empty() ? r.flags : r.error);
  }
}

std::vector<BinnedSample> load_data(const std::string& path, const ColumnMap& columns) {
  std::ifstream probe(path);
  if (!probe) throw UsageError(fmt::format("cannot open data file '{}'", path));
  try {
    return read_samples(path, columns);
  } catch (const ParseError& e) {
    throw UsageError(fmt::format("{}: {}", path, e.what()));
  } catch (const MissingColumn& e) {
    throw UsageError(fmt::format("{}: {}", path, e.what()));
  }
}

class OutputFile {
 public:
  OutputFile(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (path.empty() || path == "-") return;
    file_.open(path, std::ios::binary);
    if (!file_) throw UsageError(fmt::format("cannot write '{}'", path));
    stream_ = &file_;
  }
  std::ostream& operator*() { return *stream_; }
  bool is_console() const { return !file_.is_open(); }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

struct CommonOptions {
  std::string data;
  ColumnMap columns;
  std::string out;
  std::string print = "N";
  std::string config;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
};

int cmd_fit(const CommonOptions& o, const std::string& model, std::ostream& out,
            std::ostream& err) {
  const auto estimator = parse_estimator(model);
  if (!estimator) throw UsageError(fmt::format("unknown model '{}'", model));
  const bool print = parse_yes_no(o.print);
  Settings settings = load_settings(o.config);
  if (o.seed) settings.fit.seed = *o.seed;
  const std::vector<BinnedSample> samples = load_data(o.data, o.columns);

  std::vector<FitRow> rows(samples.size());
  parallel_for(samples.size(), o.threads, [&](std::size_t i) {
    rows[i] = make_row(samples[i].id, *estimator, estimate(samples[i], *estimator, settings.fit));
  });

  OutputFile file(o.out, out);
  *file << kFitHeader << '\n';
  for (const auto& r : rows) write_row(*file, r);
  if (print) print_table(out, rows);

  std::size_t failed = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].error.empty()) continue;
    ++failed;
    err << fmt::format("{}: {}\n", samples[i].id, rows[i].error);
  }
  if (failed == 0) return kSuccess;
  return failed == rows.size() ? kTotalFailure : kPartialFailure;
}

int cmd_validate(const CommonOptions& o, std::ostream& out, std::ostream& /*err*/) {
  const Settings settings = load_settings(o.config);
  const std::vector<BinnedSample> samples = load_data(o.data, o.columns);
  OutputFile file(o.out, out);
  *file << "id,bins,total,nonzero_bins,valid,eligible,problem\n";
  bool all_ok = true;
  for (const auto& raw : samples) {
    std::string problem;
    bool valid = true, eligible = false;
    BinnedSample s = raw;
    try {
      s = validate(raw);
      eligible = is_eligible(s, settings.fit.eligibility);
      if (!eligible) {
        problem = fmt::format("IneligibleSample: total {} (min {}), {} nonzero bins (min {})",
                              s.total, settings.fit.eligibility.min_total, s.nonzero_bins(),
                              settings.fit.eligibility.min_nonzero_bins);
      }
    } catch (const ValidationError& e) {
      valid = false;
      problem = e.what();
    }
    all_ok = all_ok && valid && eligible;
    *file << fmt::format("{},{},{},{},{},{},{}\n", csv_field(s.id), s.bins.size(), s.total,
                         s.nonzero_bins(), valid ? "Y" : "N", eligible ? "Y" : "N",
                         csv_field(problem));
  }
  return all_ok ? kSuccess : kPartialFailure;
}

struct BenchOptions {
  std::string models = "best";
  std::string scatter;
  std::string family;
  std::string params;
  std::optional<int> units;
  std::optional<std::int64_t> min_size, max_size;
  std::optional<double> jitter;
  std::string rounding;
};

std::map<std::string, double> parse_params(const std::string& text) {
  std::map<std::string, double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError(fmt::format("bad --params entry '{}'", item));
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    try {
      std::size_t used = 0;
      out[key] = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::logic_error&) {
      throw UsageError(fmt::format("bad value in --params entry '{}'", item));
    }
  }
  return out;
}

int cmd_bench(const CommonOptions& o, const BenchOptions& b, std::ostream& out,
              std::ostream& err) {
  std::vector<Estimator> estimators;
  {
    std::stringstream ss(b.models);
    std::string name;
    while (std::getline(ss, name, ',')) {
      if (name.empty()) continue;
      const auto e = parse_estimator(name);
      if (!e) throw UsageError(fmt::format("unknown model '{}'", name));
      estimators.push_back(*e);
    }
  }
  if (estimators.empty()) throw UsageError("no models given");
  const bool print = parse_yes_no(o.print);

  Settings settings = load_settings(o.config);
  GeneratorSpec& spec = settings.generator;
  if (!b.family.empty() || !b.params.empty()) {
    const std::string family = b.family.empty() ? family_name(spec.family) : b.family;
    spec.family = make_family(family, parse_params(b.params));
  }
  if (b.units) spec.n_units = *b.units;
  if (b.min_size) spec.min_size = *b.min_size;
  if (b.max_size) spec.max_size = *b.max_size;
  if (b.jitter) spec.scale_jitter = *b.jitter;
  if (!b.rounding.empty()) spec.census_rounding = parse_yes_no(b.rounding);
  if (o.seed) spec.seed = settings.fit.seed = *o.seed;
  try {
    check(spec);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }

  const BenchmarkResult result =
      run_benchmark(spec, estimators, BenchmarkOptions{settings.fit, o.threads});
  {
    OutputFile file(o.out, out);
    write_metrics(*file, result);
  }
  if (!b.scatter.empty()) {
    OutputFile file(b.scatter, out);
    write_scatter(*file, result);
  }
  if (print || !o.out.empty()) {
    out << fmt::format("{} units from {}, seed {}\n", result.units.size(), family_name(spec.family),
                       spec.seed);
    out << fmt::format("{:<10} {:>10} {:>10} {:>12} {:>12}\n", "model", "bias", "rmsre",
                       "undef_mean", "undef_var");
    for (const auto& run : result.runs) {
      const auto pct = [](const std::optional<double>& v) {
        return v ? fmt::format("{:.2f}%", 100.0 * *v) : std::string("NA");
      };
      out << fmt::format("{:<10} {:>10} {:>10} {:>11.1f}% {:>11.1f}%\n", to_string(run.estimator),
                         pct(run.report.relative_bias), pct(run.report.rmsre),
                         100.0 * run.report.undefined_mean_share,
                         100.0 * run.report.undefined_variance_share);
    }
  }
  (void)err;
  return kSuccess;
}

void add_data_options(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--data", o.data, "Comma-separated input file")->required();
  cmd->add_option("--id", o.columns.id, "Unit id column (omit for a single-unit file)");
  cmd->add_option("--min", o.columns.min, "Bin lower-bound column")->capture_default_str();
  cmd->add_option("--max", o.columns.max, "Bin upper-bound column")->capture_default_str();
  cmd->add_option("--n", o.columns.n, "Count column")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Estimate means and variances from binned data"};
  app.name("binfit");
  app.require_subcommand(1);

  CommonOptions o;
  std::string model = "best";
  BenchOptions b;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", o.out, "Output file (default: console)");
    cmd->add_option("--print", o.print, "Print a console summary (Y/N)")->capture_default_str();
    cmd->add_option("--config", o.config, "JSON file with fit, eligibility and generator settings");
    cmd->add_option("--seed", o.seed, "Random seed");
    cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  };

  CLI::App* fit = app.add_subcommand("fit", "Fit a model to every unit in a file");
  add_data_options(fit, o);
  add_common(fit);
  fit->add_option("--model", model, "EGG, PN, PL, best, dagum, gb2 or midpoint")
      ->capture_default_str();

  CLI::App* validate_cmd = app.add_subcommand("validate", "Check bins and eligibility");
  add_data_options(validate_cmd, o);
  add_common(validate_cmd);

  CLI::App* bench = app.add_subcommand("bench", "Evaluate estimators on synthetic districts");
  add_common(bench);
  bench->add_option("--model", b.models, "Comma-separated models")->capture_default_str();
  bench->add_option("--scatter", b.scatter, "Per-unit scatter output file");
  bench->add_option("--family", b.family, "lognormal, gamma, weibull or dagum");
  bench->add_option("--params", b.params, "Generator parameters, e.g. shape=2,scale=30000");
  bench->add_option("--units", b.units, "Number of synthetic units");
  bench->add_option("--min-size", b.min_size, "Smallest unit size");
  bench->add_option("--max-size", b.max_size, "Largest unit size");
  bench->add_option("--jitter", b.jitter, "Log-sd of the per-unit scale factor");
  bench->add_option("--rounding", b.rounding, "Apply census rounding (Y/N)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "binfit: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (fit->parsed()) return cmd_fit(o, model, out, err);
    if (validate_cmd->parsed()) return cmd_validate(o, out, err);
    return cmd_bench(o, b, out, err);
  } catch (const UsageError& e) {
    err << "binfit: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "binfit: " << error_kind(e) << ": " << e.what() << '\n';
    return kTotalFailure;
  }
}

}  // namespace binfit::cli
