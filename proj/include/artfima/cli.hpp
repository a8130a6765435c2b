#pragma once

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "artfima/acceptance.hpp"
#include "artfima/io.hpp"
#include "artfima/unitroot.hpp"

namespace artfima::cli {

/// Parameter kinds decide the canonical text stored in the config and hashed.
enum class Kind { real, integer, text, reals };

struct Param {
  std::string name;
  Kind kind = Kind::real;
  std::string value;
  std::string help;
  CLI::Option* option = nullptr;
};

/// Parameters of one subcommand, in declaration order.
class Params {
 public:
  void add(CLI::App* app, std::string name, Kind kind, std::string def, std::string help) {
    items_.push_back(std::make_unique<Param>(Param{std::move(name), kind, std::move(def), std::move(help), nullptr}));
    auto& p = *items_.back();
    p.option = app->add_option("--" + p.name, p.value, p.help);
    p.option->default_str(p.value);
  }

  /// Fills values not given on the command line from a config file, then canonicalizes.
  void merge(const io::Config& file) {
    for (const auto& [k, v] : file) {
      auto* p = find(k);
      if (!p) throw invalid_parameter("config: unknown key '" + k + "'");
      if (p->option->count() == 0) p->value = v;
    }
    for (auto& p : items_) p->value = canonical(*p);
  }

  io::Config config() const {
    io::Config c;
    for (const auto& p : items_) c[p->name] = p->value;
    return c;
  }

  double real(const std::string& k) const { return io::parse_double(get(k)); }
  std::uint64_t integer(const std::string& k) const { return parse_integer(k, get(k)); }
  std::size_t size(const std::string& k) const { return static_cast<std::size_t>(integer(k)); }
  const std::string& text(const std::string& k) const { return get(k); }
  std::vector<double> reals(const std::string& k) const {
    std::vector<double> out;
    for (const auto& s : split(get(k))) out.push_back(io::parse_double(s));
    return out;
  }

 private:
  Param* find(const std::string& k) const {
    for (const auto& p : items_)
      if (p->name == k) return p.get();
    return nullptr;
  }
  const std::string& get(const std::string& k) const {
    const auto* p = find(k);
    if (!p) throw error("cli: parameter '" + k + "' is not declared");
    return p->value;
  }
  static std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, ',')) {
      cur.erase(0, cur.find_first_not_of(" \t"));
      cur.erase(cur.find_last_not_of(" \t") + 1);
      if (!cur.empty()) out.push_back(cur);
    }
    return out;
  }
  static std::uint64_t parse_integer(const std::string& k, const std::string& s) {
    std::uint64_t v = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size())
      throw invalid_parameter("--" + k + ": not a non-negative integer: '" + s + "'");
    return v;
  }
  static std::string canonical(const Param& p) {
    switch (p.kind) {
      case Kind::real: return io::format_double(io::parse_double(p.value));
      case Kind::integer: return std::to_string(parse_integer(p.name, p.value));
      case Kind::text: return p.value;
      case Kind::reals: {
        std::string out;
        for (const auto& s : split(p.value)) {
          if (!out.empty()) out += ',';
          out += io::format_double(io::parse_double(s));
        }
        return out;
      }
    }
    return p.value;
  }

  std::vector<std::unique_ptr<Param>> items_;
};

/// Result of a subcommand: a CSV table plus metadata merged into the sidecar.
struct Output {
  std::unique_ptr<io::CsvTable> csv;
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  std::string text;  // printed instead of a table (verify)
  int exit_code = 0;
};

struct Common {
  unsigned workers = default_workers();
  std::string out, config, write_config;
};

struct Command {
  CLI::App* app = nullptr;
  Params params;
  Common common;
  std::function<Output(const Params&, const Common&)> run;
};

// ---------------------------------------------------------------- shared parameter groups

inline void add_model(Command& c, const std::string& d = "0.3", const std::string& lambda = "0.1") {
  c.params.add(c.app, "d", Kind::real, d, "fractional integration order");
  if (!lambda.empty()) c.params.add(c.app, "lambda", Kind::real, lambda, "tempering parameter (>= 0)");
  c.params.add(c.app, "phi", Kind::reals, "", "AR coefficients, comma separated");
  c.params.add(c.app, "theta", Kind::reals, "", "MA coefficients, comma separated");
}

inline ArtfimaModel model_of(const Params& p, bool with_lambda = true) {
  ArtfimaModel m;
  m.d = p.real("d");
  if (with_lambda) m.lambda = p.real("lambda");
  m.arma.phi = p.reals("phi");
  m.arma.theta = p.reals("theta");
  m.validate();
  return m;
}

inline void add_law(Command& c) {
  c.params.add(c.app, "law", Kind::text, "gaussian", "innovation law: gaussian, stable or pareto");
  c.params.add(c.app, "variance", Kind::real, "1", "Gaussian variance");
  c.params.add(c.app, "alpha", Kind::real, "1.5", "tail index of stable or Pareto innovations");
  c.params.add(c.app, "sigma", Kind::real, "1", "stable scale");
  c.params.add(c.app, "beta", Kind::real, "0", "stable skewness");
  c.params.add(c.app, "c1", Kind::real, "1", "Pareto right-tail constant");
  c.params.add(c.app, "c2", Kind::real, "1", "Pareto left-tail constant");
}

inline InnovationLaw law_of(const Params& p) {
  const auto& k = p.text("law");
  if (k == "gaussian") return InnovationLaw::gaussian(p.real("variance"));
  if (k == "stable") return InnovationLaw::stable(p.real("alpha"), p.real("sigma"), p.real("beta"));
  if (k == "pareto") return InnovationLaw::pareto(p.real("alpha"), p.real("c1"), p.real("c2"));
  throw invalid_parameter("--law: expected gaussian, stable or pareto, got '" + k + "'");
}

inline void add_tempering(Command& c) {
  c.params.add(c.app, "tempering", Kind::text, "moderate", "lambda_N rule: moderate (lambda*/N) or power (N^-c)");
  c.params.add(c.app, "lambda-star", Kind::real, "1", "lambda* of the moderate rule");
  c.params.add(c.app, "c", Kind::real, "0.5", "exponent of the power rule");
}

inline TemperingScheme tempering_of(const Params& p) {
  const auto& k = p.text("tempering");
  if (k == "moderate") return TemperingScheme::moderate(p.real("lambda-star"));
  if (k == "power") return TemperingScheme::power(p.real("c"));
  throw invalid_parameter("--tempering: expected moderate or power, got '" + k + "'");
}

inline SimulationMethod method_of(const std::string& s) {
  if (s == "automatic") return SimulationMethod::automatic;
  if (s == "truncated_ma") return SimulationMethod::truncated_ma;
  if (s == "circulant") return SimulationMethod::circulant;
  throw invalid_parameter("--method: expected automatic, truncated_ma or circulant, got '" + s + "'");
}

inline double mesh_of(const Params& p) {
  const auto steps = p.size("steps");
  if (steps == 0) throw invalid_parameter("--steps must be positive");
  return 1.0 / static_cast<double>(steps);
}

inline McOptions mc_of(const Params& p, const Common& c) {
  McOptions o;
  o.replicates = p.size("replicates");
  o.seed = p.integer("seed");
  o.workers = c.workers;
  o.sim.tol = p.real("tol");
  return o;
}

inline nlohmann::ordered_json levels_json(const std::vector<CriticalValue>& cv) {
  auto j = nlohmann::ordered_json::array();
  for (const auto& v : cv) j.push_back({{"level", v.level}, {"quantile", v.quantile}, {"mc_se", v.mc_se}});
  return j;
}

inline std::unique_ptr<io::CsvTable> levels_table(const std::vector<CriticalValue>& cv) {
  auto t = std::make_unique<io::CsvTable>(std::vector<std::string>{"level", "quantile", "mc_se"});
  for (const auto& v : cv) t->add(v.level, v.quantile, v.mc_se);
  return t;
}

// ---------------------------------------------------------------- subcommands

inline void setup_coeffs(Command& c) {
  add_model(c, "0.4", "0");
  c.params.add(c.app, "n", Kind::integer, "10", "largest lag k");
  c.params.add(c.app, "kind", Kind::text, "a", "a (tempered when lambda > 0), omega or inverse");
  c.run = [](const Params& p, const Common&) {
    const auto n = p.size("n");
    const auto& kind = p.text("kind");
    CoefficientSeries s;
    if (kind == "omega")
      s = omega_coeffs(p.real("d"), n);
    else if (kind == "a")
      s = artfima_coeffs(model_of(p), n);
    else if (kind == "inverse")
      s = inverse_coeffs(model_of(p), n);
    else
      throw invalid_parameter("--kind: expected a, omega or inverse, got '" + kind + "'");
    Output o;
    o.csv = std::make_unique<io::CsvTable>(std::vector<std::string>{"k", "value"});
    for (std::size_t k = 0; k < s.values.size(); ++k) o.csv->add(k, s.values[k]);
    o.meta["kind"] = to_string(s.kind);
    return o;
  };
}

inline void setup_simulate(Command& c) {
  add_model(c);
  add_law(c);
  c.params.add(c.app, "n", Kind::integer, "1000", "path length N");
  c.params.add(c.app, "paths", Kind::integer, "1", "number of independent paths");
  c.params.add(c.app, "method", Kind::text, "automatic", "automatic, truncated_ma or circulant");
  c.params.add(c.app, "tol", Kind::real, "1e-6", "truncation tolerance of the moving-average filter");
  c.run = [](const Params& p, const Common& common) {
    SimulationOptions so;
    so.tol = p.real("tol");
    so.method = method_of(p.text("method"));
    const auto N = p.size("n");
    const auto paths = p.size("paths");
    const auto seed = p.integer("seed");
    ArtfimaSimulator sim(model_of(p), law_of(p), N, so);
    std::vector<std::vector<double>> x(paths);
    parallel_for(paths, common.workers, [&](std::size_t i) {
      RngStream rng(seed, i);
      x[i] = sim.simulate(rng).values;
    });
    Output o;
    o.csv = std::make_unique<io::CsvTable>(std::vector<std::string>{"path", "t", "x"});
    for (std::size_t i = 0; i < paths; ++i)
      for (std::size_t t = 0; t < N; ++t) o.csv->add(i, t + 1, x[i][t]);
    o.meta["method"] = to_string(sim.method());
    o.meta["truncation"] = sim.truncation();
    o.meta["tail_bound"] = sim.tail_bound();
    return o;
  };
}

inline void setup_acf(Command& c) {
  add_model(c);
  c.params.add(c.app, "max-lag", Kind::integer, "20", "largest lag");
  c.run = [](const Params& p, const Common&) {
    const auto m = model_of(p);
    const auto K = p.size("max-lag");
    const double g0 = autocovariance(m, 0);
    Output o;
    o.csv = std::make_unique<io::CsvTable>(std::vector<std::string>{"k", "autocovariance", "autocorrelation"});
    for (std::size_t k = 0; k <= K; ++k) {
      const double g = k == 0 ? g0 : autocovariance(m, static_cast<long>(k));
      o.csv->add(k, g, g / g0);
    }
    return o;
  };
}

inline void setup_spectrum(Command& c) {
  add_model(c);
  c.params.add(c.app, "points", Kind::integer, "64", "frequencies x = pi j / points, j = 0..points");
  c.run = [](const Params& p, const Common&) {
    const auto m = model_of(p);
    const auto n = p.size("points");
    if (n == 0) throw invalid_parameter("--points must be positive");
    Output o;
    o.csv = std::make_unique<io::CsvTable>(std::vector<std::string>{"x", "density"});
    // the density has a pole at 0 when lambda = 0 and d > 0
    const std::size_t first = (m.lambda == 0.0 && m.d > 0.0) ? 1 : 0;
    for (std::size_t j = first; j <= n; ++j) {
      const double x = j == n ? std::numbers::pi : std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
      o.csv->add(x, spectral_density(m, x));
    }
    return o;
  };
}

inline void setup_limit_path(Command& c) {
  c.params.add(c.app, "H", Kind::real, "0.8", "Hurst index");
  c.params.add(c.app, "alpha", Kind::real, "2", "stable index in (1, 2]");
  c.params.add(c.app, "lambda", Kind::real, "1", "tempering parameter");
  c.params.add(c.app, "sigma", Kind::real, "0", "noise scale; 0 selects the standard Brownian convention");
  c.params.add(c.app, "beta", Kind::real, "0", "noise skewness");
  c.params.add(c.app, "points", Kind::integer, "64", "grid t = j / points, j = 0..points");
  c.params.add(c.app, "paths", Kind::integer, "1", "number of independent paths");
  c.params.add(c.app, "steps", Kind::integer, "1024", "kernel cells per unit time");
  c.params.add(c.app, "scheme", Kind::text, "auto", "auto, kernel or covariance");
  c.run = [](const Params& p, const Common& common) {
    const KernelParams k{p.real("H"), p.real("alpha"), p.real("lambda")};
    const auto n = p.size("points");
    const auto paths = p.size("paths");
    const auto seed = p.integer("seed");
    if (n == 0) throw invalid_parameter("--points must be positive");
    std::vector<double> grid(n + 1);
    for (std::size_t j = 0; j <= n; ++j) grid[j] = static_cast<double>(j) / static_cast<double>(n);
    const auto& s = p.text("scheme");
    LimitScheme scheme;
    if (s == "auto")
      scheme = k.alpha == 2.0 ? LimitScheme::covariance_factorization : LimitScheme::kernel_discretization;
    else if (s == "kernel")
      scheme = LimitScheme::kernel_discretization;
    else if (s == "covariance")
      scheme = LimitScheme::covariance_factorization;
    else
      throw invalid_parameter("--scheme: expected auto, kernel or covariance, got '" + s + "'");
    LimitOptions lo;
    lo.sigma = p.real("sigma");
    lo.beta = p.real("beta");
    lo.mesh = mesh_of(p);
    LimitSimulator sim(k, grid, scheme, lo);
    std::vector<std::vector<double>> v(paths);
    parallel_for(paths, common.workers, [&](std::size_t i) {
      RngStream rng(seed, i);
      v[i] = sim.sample(rng).values;
    });
    Output o;
    o.csv = std::make_unique<io::CsvTable>(std::vector<std::string>{"path", "t", "value"});
    for (std::size_t i = 0; i < paths; ++i)
      for (std::size_t j = 0; j <= n; ++j) o.csv->add(i, grid[j], v[i][j]);
    o.meta["scheme"] = to_string(scheme);
    o.meta["warnings"] = sim.warnings();
    return o;
  };
}

inline void setup_partial_sums(Command& c) {
  add_model(c, "0.3", "");
  add_law(c);
  add_tempering(c);
  c.params.add(c.app, "n", Kind::integer, "10000", "sample size N");
  c.params.add(c.app, "replicates", Kind::integer, "1000", "Monte Carlo replicates");
  c.params.add(c.app, "t", Kind::reals, "0.25,0.5,1", "times in (0, 1] at which S_N is recorded");
  c.params.add(c.app, "limit-replicates", Kind::integer, "1000", "limit draws per time for the KS statistic (0 skips)");
  c.params.add(c.app, "tol", Kind::real, "1e-6", "truncation tolerance of the moving-average filter");
  c.run = [](const Params& p, const Common& common) {
    const auto opt = mc_of(p, common);
    const auto t = p.reals("t");
    const auto law = law_of(p);
    const auto ns = normalized_sums_mc(model_of(p, false), tempering_of(p), law, p.size("n"), t, opt);
    const auto lr = p.size("limit-replicates");
    Output o;
    o.csv = std::make_unique<io::CsvTable>(std::vector<std::string>{"t", "level", "quantile"});
    auto summaries = nlohmann::ordered_json::array();
    for (std::size_t j = 0; j < t.size(); ++j) {
      auto s = McSummary::from_sample(ns.column(j), opt.seed);
      if (lr > 0) {
        McOptions lo = opt;
        lo.replicates = lr;
        lo.first_stream = opt.replicates + j * lr;  // disjoint from the path streams
        const double lstar = ns.regime == Regime::moderate ? ns.lambda_N * static_cast<double>(ns.N) : 0.0;
        s.ks["limit"] = ks_against_limit(ns, t[j], limit_marginal_sample(ns.regime, ns.d, lstar, law, t[j], lo));
      }
      for (const auto& [level, q] : s.quantiles) o.csv->add(t[j], level, q);
      auto js = io::summary_json(s);
      js["t"] = t[j];
      summaries.push_back(js);
    }
    o.meta["regime"] = to_string(ns.regime);
    o.meta["lambda_N"] = ns.lambda_N;
    o.meta["H"] = ns.H;
    o.meta["method"] = to_string(ns.method);
    o.meta["summaries"] = summaries;
    return o;
  };
}

inline void setup_unit_root(Command& c) {
  add_model(c, "0.3", "");
  add_law(c);
  add_tempering(c);
  c.params.add(c.app, "n", Kind::integer, "2000", "sample size N");
  c.params.add(c.app, "replicates", Kind::integer, "2000", "Monte Carlo replicates (at least 1000)");
  c.params.add(c.app, "tol", Kind::real, "1e-6", "truncation tolerance of the moving-average filter");
  c.run = [](const Params& p, const Common& common) {
    const auto opt = mc_of(p, common);
    auto s = mc_unit_root(model_of(p, false), law_of(p), tempering_of(p), p.size("n"), opt);
    const auto cv = critical_values(s.sorted, McSummary::standard_levels, 1000);
    Output o;
    o.csv = levels_table(cv);
    o.meta["regime"] = to_string(classify_regime(tempering_of(p), p.size("n")).regime);
    o.meta["summary"] = io::summary_json(s);
    return o;
  };
}

inline void add_family(Command& c, const std::string& replicates) {
  c.params.add(c.app, "regime", Kind::text, "weak", "strong, weak or moderate");
  c.params.add(c.app, "d", Kind::real, "0", "fractional integration order");
  c.params.add(c.app, "lambda-star", Kind::real, "1", "lambda* of the moderate limit");
  c.params.add(c.app, "replicates", Kind::integer, replicates, "limit draws");
  c.params.add(c.app, "steps", Kind::integer, "1024", "time steps on [0, 1] (even, at least 512)");
}

inline LimitFamily family_of(const Params& p) {
  const auto r = parse_regime(p.text("regime"));
  return LimitFamily::select(r, p.real("d"), r == Regime::moderate ? p.real("lambda-star") : 0.0);
}

inline void setup_limit_dist(Command& c) {
  add_family(c, "10000");
  c.run = [](const Params& p, const Common& common) {
    const auto f = family_of(p);
    const auto seed = p.integer("seed");
    const auto sample = simulate_limit_family_sample(f, p.size("replicates"), mesh_of(p), seed, 0, common.workers);
    auto s = McSummary::from_sample(sample.values, seed);
    s.ks["coarse_mesh"] = ks_two_sample(sample.values, sample.coarse);
    Output o;
    o.csv = levels_table(critical_values(sample.values, McSummary::standard_levels, 1000));
    o.meta["family"] = f.describe();
    o.meta["notes"] = f.notes;
    o.meta["summary"] = io::summary_json(s);
    return o;
  };
}

inline void setup_critical_values(Command& c) {
  add_family(c, "100000");
  c.params.add(c.app, "levels", Kind::reals, "0.01,0.025,0.05,0.1,0.9,0.95,0.975,0.99", "quantile levels");
  c.run = [](const Params& p, const Common& common) {
    const auto f = family_of(p);
    const auto cv = critical_values(f, p.reals("levels"), p.size("replicates"), mesh_of(p), p.integer("seed"),
                                    common.workers);
    Output o;
    o.csv = levels_table(cv);
    o.meta["family"] = f.describe();
    o.meta["notes"] = f.notes;
    o.meta["table"] = levels_json(cv);
    return o;
  };
}

inline void setup_verify(Command& c) {
  c.params.add(c.app, "suite", Kind::text, "identities", "identities, mc or all");
  c.run = [](const Params& p, const Common& common) {
    acceptance::SuiteOptions so;
    so.workers = common.workers;
    so.seed = p.integer("seed");
    const auto& suite = p.text("suite");
    if (suite != "identities" && suite != "mc" && suite != "all")
      throw invalid_parameter("--suite: expected identities, mc or all, got '" + suite + "'");
    Output o;
    o.csv = std::make_unique<io::CsvTable>(std::vector<std::string>{"criterion", "result", "seconds", "detail"});
    int failed = 0;
    for (int id : acceptance::suite_ids(suite)) {
      const auto r = acceptance::run_criterion(id, so);
      o.text += acceptance::format_line(r) + "\n";
      std::string detail = r.error;
      for (const auto& ch : r.checks) {
        if (!detail.empty()) detail += "; ";
        detail += ch.what + " " + io::format_double(ch.measured) + " vs " + io::format_double(ch.bound);
      }
      o.csv->add(id, r.passed() ? "PASS" : "FAIL", r.seconds, detail);
      if (!r.passed()) ++failed;
    }
    o.text += std::to_string(failed) + " criteria failed\n";
    o.exit_code = failed == 0 ? 0 : 1;
    return o;
  };
}

// ---------------------------------------------------------------- driver

inline void emit(const std::string& name, const Command& c, Output& o, std::ostream& out) {
  const auto config = c.params.config();
  if (!c.common.write_config.empty()) io::write_text(c.common.write_config, io::config_to_text(config));
  if (!o.text.empty()) out << o.text;
  if (c.common.out.empty()) {
    if (o.text.empty() && o.csv) out << o.csv->str();
    return;
  }
  if (o.csv) io::write_text(c.common.out, o.csv->str());
  auto j = io::sidecar(name, config);
  for (auto& [k, v] : o.meta.items()) j[k] = v;
  io::write_text(c.common.out + ".json", j.dump(2) + "\n");
}

/// Runs the tool on argv (without the program name). Returns 0 on success, 1 on numerical failure, 2 on usage error.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ARTFIMA processes, tempered fractional limits and unit-root distributions", "artfima"};
  app.set_version_flag("--version", std::string(io::tool_version));
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, void (*)(Command&)>> table = {
      {"coeffs", setup_coeffs},
      {"simulate", setup_simulate},
      {"acf", setup_acf},
      {"spectrum", setup_spectrum},
      {"limit-path", setup_limit_path},
      {"partial-sums", setup_partial_sums},
      {"unit-root", setup_unit_root},
      {"limit-dist", setup_limit_dist},
      {"critical-values", setup_critical_values},
      {"verify", setup_verify},
  };
  const std::map<std::string, std::string> about = {
      {"coeffs", "moving-average coefficients"},
      {"simulate", "simulate ARTFIMA paths"},
      {"acf", "autocovariance and autocorrelation"},
      {"spectrum", "spectral density"},
      {"limit-path", "sample tempered fractional limit paths"},
      {"partial-sums", "Monte Carlo of normalized partial sums"},
      {"unit-root", "Monte Carlo of the normalized unit-root statistic"},
      {"limit-dist", "quantiles of the unit-root limit distribution"},
      {"critical-values", "critical value table of the unit-root limit"},
      {"verify", "run the acceptance checks"},
  };
  std::vector<std::unique_ptr<Command>> cmds;
  for (const auto& [name, setup] : table) {
    auto c = std::make_unique<Command>();
    c->app = app.add_subcommand(name, about.at(name));
    c->params.add(c->app, "seed", Kind::integer, name == "verify" ? std::to_string(acceptance::SuiteOptions{}.seed) : "1",
                  "root seed");
    c->app->add_option("--workers", c->common.workers, "worker threads (default from ARTFIMA_WORKERS)")
        ->check(CLI::PositiveNumber);
    c->app->add_option("--out", c->common.out, "CSV output path; a JSON sidecar is written next to it");
    c->app->add_option("--config", c->common.config, "key = value file; command-line flags take precedence");
    c->app->add_option("--write-config", c->common.write_config, "write the effective configuration here");
    setup(*c);
    cmds.push_back(std::move(c));
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << io::tool_version << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return 2;
  }

  for (auto& c : cmds) {
    if (!c->app->parsed()) continue;
    const std::string name = c->app->get_name();
    try {
      io::Config file;
      if (!c->common.config.empty()) {
        std::ifstream f(c->common.config, std::ios::binary);
        if (!f) throw invalid_parameter("cannot read config file '" + c->common.config + "'");
        std::stringstream ss;
        ss << f.rdbuf();
        file = io::config_from_text(ss.str());
      }
      c->params.merge(file);
      auto o = c->run(c->params, c->common);
      emit(name, *c, o, out);
      return o.exit_code;
    } catch (const invalid_parameter& e) {
      err << "artfima " << name << ": " << e.what() << "\n";
      return 2;
    } catch (const insufficient_replicates& e) {
      err << "artfima " << name << ": " << e.what() << "\n";
      return 2;
    } catch (const std::exception& e) {
      err << "artfima " << name << ": " << e.what() << "\n";
      return 1;
    }
  }
  return 2;
}

inline int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace artfima::cli
