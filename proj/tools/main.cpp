#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "acceptance.hpp"
#include "ffire/bigreal.hpp"
#include "ffire/errors.hpp"
#include "ffire/exact.hpp"
#include "ffire/graph.hpp"
#include "ffire/simulator.hpp"
#include "ffire/special.hpp"
#include "ffire/stats.hpp"
#include "ffire/tailbound.hpp"

using nlohmann::json;
using namespace ffire;

namespace {

// Raised for configuration problems detected outside CLI11.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Globals {
  std::uint64_t seed = 1;
  std::uint64_t streams = 1;
  unsigned workers = 1;
  std::optional<long> precision_bits;
  std::string out = "-";
  std::string format = "csv";
  std::string config;
};

struct SimulateArgs {
  std::size_t site = 2;
  std::size_t samples = 10000;
  std::string reference = "none";
  std::string graph = "zplus";
  std::size_t length = 3;
  std::size_t grid = 16;
  std::optional<std::size_t> target;
  double horizon = 1e6;
};

struct MomentsArgs {
  std::string n = "0..2";
};

struct DickmanArgs {
  std::optional<double> eval;
  std::vector<double> table;
};

struct GD1Args {
  std::size_t sample = 10000;
  double epsilon = 1e-9;
};

struct TailArgs {
  double p = 0.75;
  std::optional<double> theta;
  bool theta_from_sim = false;
  std::size_t grid = 64;
  std::string x = "1:100:1";
  std::size_t replicas = 2000;
  std::optional<std::size_t> target;
  double horizon = 1e7;
};

struct VerifyArgs {
  bool quick = false;
};

// ---------------------------------------------------------------- output ---

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json num_json(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

class Output {
 public:
  Output(const std::string& path, std::string subcommand, std::string hash, std::uint64_t seed)
      : subcommand_(std::move(subcommand)), hash_(std::move(hash)), seed_(seed) {
    if (path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw ConfigError("cannot open output file '" + path + "'");
    }
  }

  // Output is buffered so a failing command leaves nothing half-written.
  std::ostream& stream() { return buffer_; }

  void commit() {
    std::ostream& dest = file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout;
    dest << buffer_.str() << std::flush;
    buffer_.str({});
  }

  void csv_header(const std::string& columns) {
    stream() << "# ffire " << subcommand_ << " config_hash=" << hash_ << " seed=" << seed_ << "\n"
             << columns << "\n";
  }

  void write_json(json body) {
    json doc = {{"header", {{"tool", "ffire"}, {"subcommand", subcommand_}, {"config_hash", hash_}, {"seed", seed_}}}};
    doc.update(body);
    stream() << doc.dump(2) << "\n";
  }

 private:
  std::ofstream file_;
  std::ostringstream buffer_;
  std::string subcommand_;
  std::string hash_;
  std::uint64_t seed_;
};

json summary_json(const stats::SampleSummary& s) {
  json q = json::array();
  for (const auto& p : s.quantiles()) q.push_back({{"p", p.prob}, {"value", num_json(p.value)}});
  return {{"count", s.count()},
          {"mean", num_json(s.mean())},
          {"variance", num_json(s.variance())},
          {"standard_error", num_json(s.standard_error())},
          {"quantiles", q}};
}

// --------------------------------------------------------------- parsing ---

std::pair<std::size_t, std::size_t> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      const auto v = std::stoull(text);
      return {v, v};
    }
    const auto a = std::stoull(text.substr(0, dots));
    const auto b = std::stoull(text.substr(dots + 2));
    if (a > b) throw ConfigError("empty range '" + text + "'");
    return {a, b};
  } catch (const std::logic_error&) {
    throw ConfigError("invalid range '" + text + "' (expected N or A..B)");
  }
}

std::vector<double> parse_grid(const std::string& text) {
  double a = 0.0;
  double b = 0.0;
  double step = 0.0;
  char c1 = 0;
  char c2 = 0;
  std::istringstream in(text);
  if (!(in >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || !(step > 0.0) || b < a) {
    throw ConfigError("invalid grid '" + text + "' (expected a:b:step with step > 0)");
  }
  std::vector<double> xs;
  const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
  for (std::size_t i = 0; i < count; ++i) xs.push_back(a + static_cast<double>(i) * step);
  return xs;
}

stats::Cdf reference_cdf(const std::string& name) {
  if (name == "tau0") return [](double u) { return u <= 0.0 ? 0.0 : -std::expm1(-u); };
  if (name == "tau1") return [](double u) { return u <= 0.0 ? 0.0 : 1.0 - (u + 1.0) * std::exp(-u); };
  if (name == "tau2") {
    return [](double u) {
      if (u <= 0.0) return 0.0;
      return 1.0 - ((2.0 * u * u + 10.0 * u + 7.0) * std::exp(-u) + std::exp(-3.0 * u)) / 8.0;
    };
  }
  if (name == "dickman") {
    return [](double x) {
      if (x <= 0.0) return 0.0;
      const auto& t = special::default_dickman_table();
      return x >= t.x_max() ? 1.0 : 1.0 - t.rho(x);
    };
  }
  return {};
}

// ----------------------------------------------------------- subcommands ---

void run_simulate(const Globals& g, const SimulateArgs& a, Output& out) {
  if (a.samples == 0) throw EmptyInputError("--samples must be >= 1");
  const RngHandle rng{g.seed, 0};

  if (a.graph != "zplus") {
    const auto graph = a.graph == "path" ? sim::GraphSpec::path(a.length) : sim::GraphSpec::torus(a.grid, a.grid);
    const auto target = a.target.value_or(a.graph == "path" ? a.length - 1 : (a.grid / 2) * a.grid + a.grid / 2);
    if (target >= graph.vertex_count()) throw DomainError("--target outside the graph");
    const auto times = sim::first_burnout_times(graph, target, a.horizon, a.samples, rng, g.workers);
    if (g.format == "csv") {
      out.csv_header("replica,first_burnout,censored");
      for (std::size_t r = 0; r < times.size(); ++r) {
        const bool censored = std::isinf(times[r]);
        out.stream() << r << "," << (censored ? num(a.horizon) : num(times[r])) << "," << (censored ? 1 : 0)
                     << "\n";
      }
      return;
    }
    std::vector<double> finite;
    for (double t : times) {
      if (std::isfinite(t)) finite.push_back(t);
    }
    json body = {{"graph", a.graph}, {"target", target}, {"horizon", a.horizon},
                 {"replicas", times.size()}, {"censored", times.size() - finite.size()}};
    if (!finite.empty()) body["summary"] = summary_json(stats::SampleSummary(finite));
    out.write_json(body);
    return;
  }

  const auto replicas = sim::sample_tau_replicas(a.site, a.samples, g.streams, rng, g.workers);
  if (g.format == "csv") {
    out.csv_header("site,replica,gap");
    for (const auto& rep : replicas) {
      for (double gap : rep.gaps) out.stream() << a.site << "," << rep.replica << "," << num(gap) << "\n";
    }
    return;
  }
  std::vector<double> all;
  for (const auto& rep : replicas) all.insert(all.end(), rep.gaps.begin(), rep.gaps.end());
  json body = {{"site", a.site}, {"streams", g.streams}, {"samples_per_stream", a.samples}};
  body["summary"] = summary_json(stats::SampleSummary(all));
  if (a.reference != "none") {
    std::vector<double> scaled = all;
    if (a.reference == "dickman") {
      if (a.site < 2) throw DomainError("--reference dickman needs --site >= 2");
      const double L = std::log(static_cast<double>(a.site));
      for (double& x : scaled) x /= L;
    }
    const double ks = stats::ks_statistic(scaled, reference_cdf(a.reference));
    body["ks"] = {{"reference", a.reference},
                  {"statistic", ks},
                  {"dkw_radius_alpha_0.01", stats::dkw_radius(scaled.size(), 0.01)},
                  {"scaled_by_log_site", a.reference == "dickman"}};
  }
  out.write_json(body);
}

void run_moments(const Globals& g, const MomentsArgs& a, Output& out) {
  const auto [lo, hi] = parse_range(a.n);
  std::optional<mpfr_prec_t> bits;
  if (g.precision_bits) bits = *g.precision_bits;
  constexpr int digits = 30;

  json rows = json::array();
  const bool csv = g.format == "csv";
  if (csv) out.csv_header("n,mu,mu_exact,var,var_exact,A_n,A_n_minus_loglog_n");
  for (std::size_t n = lo; n <= hi; ++n) {
    const BigReal mu = exact::mean_tau(n, bits);
    const BigReal var = exact::variance_tau(n, bits);
    const BigReal An = exact::A(n, exact::AMethod::alternating_sum, bits);
    std::string mu_exact;
    std::string var_exact;
    if (n <= exact::kExactMomentMaxOrder) {
      mu_exact = to_string(exact::mean_tau_exact(n));
      var_exact = to_string(exact::variance_tau_exact(n));
    }
    std::string gap;
    if (n >= 3) gap = exact::A_limit_gap(n).str(digits);
    if (csv) {
      out.stream() << n << "," << mu.str(digits) << "," << mu_exact << "," << var.str(digits) << "," << var_exact
                   << "," << An.str(digits) << "," << gap << "\n";
    } else {
      rows.push_back({{"n", n},
                      {"mu", mu.str(digits)},
                      {"mu_exact", mu_exact.empty() ? json(nullptr) : json(mu_exact)},
                      {"var", var.str(digits)},
                      {"var_exact", var_exact.empty() ? json(nullptr) : json(var_exact)},
                      {"A_n", An.str(digits)},
                      {"A_n_minus_loglog_n", gap.empty() ? json(nullptr) : json(gap)},
                      {"precision_bits", mu.precision()}});
    }
  }
  if (!csv) out.write_json({{"moments", rows}});
}

void run_dickman(const Globals& g, const DickmanArgs& a, Output& out) {
  if (!a.eval && a.table.empty()) throw ConfigError("dickman needs --eval X or --table X_MAX H");
  std::vector<double> xs;
  if (a.eval) {
    if (!(*a.eval >= 0.0)) throw DomainError("--eval must be >= 0");
    xs.push_back(*a.eval);
  } else {
    const double x_max = a.table[0];
    const double h = a.table[1];
    if (!(x_max > 0.0) || !(h > 0.0)) throw ConfigError("--table needs X_MAX > 0 and H > 0");
    const auto count = static_cast<std::size_t>(std::floor(x_max / h + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) xs.push_back(static_cast<double>(i) * h);
  }
  const double top = *std::max_element(xs.begin(), xs.end());
  const auto table = top <= special::default_dickman_table().x_max()
                         ? special::default_dickman_table()
                         : special::DickmanTable::build(std::ceil(top) + 1.0);

  const bool csv = g.format == "csv";
  json rows = json::array();
  if (csv) out.csv_header("x,rho,f,F,gd1_cdf");
  for (double x : xs) {
    const double rho = table.rho(x);
    const double f = table.density(x);
    const double F = 1.0 - rho;
    const double G = special::gd1_cdf(table, x);
    if (csv) {
      out.stream() << num(x) << "," << num(rho) << "," << num(f) << "," << num(F) << "," << num(G) << "\n";
    } else {
      rows.push_back({{"x", x}, {"rho", rho}, {"f", f}, {"F", F}, {"gd1_cdf", G}});
    }
  }
  if (!csv) out.write_json({{"dickman", rows}});
}

void run_gd1(const Globals& g, const GD1Args& a, Output& out) {
  if (a.sample == 0) throw EmptyInputError("--sample must be >= 1");
  special::GD1Spec spec;
  spec.epsilon = a.epsilon;
  const auto xs = special::gd1_samples(a.sample, {g.seed, 0}, spec);
  if (g.format == "csv") {
    out.csv_header("index,value");
    for (std::size_t i = 0; i < xs.size(); ++i) out.stream() << i << "," << num(xs[i]) << "\n";
    return;
  }
  const stats::SampleSummary s(xs);
  const auto& table = special::default_dickman_table();
  const double ks = stats::ks_statistic_sorted(
      s.sorted(), [&](double x) { return x <= 0.0 ? 0.0 : special::gd1_cdf(table, std::min(x, table.x_max())); });
  out.write_json({{"epsilon", a.epsilon},
                  {"summary", summary_json(s)},
                  {"ks", {{"reference", "gd1_cdf"}, {"statistic", ks}}}});
}

void run_tailbound(const Globals& g, const TailArgs& a, Output& out) {
  if (a.theta && a.theta_from_sim) throw ConfigError("use either --theta or --theta-from-sim");
  if (!a.theta && !a.theta_from_sim) throw ConfigError("tailbound needs --theta or --theta-from-sim");
  const auto xs = parse_grid(a.x);

  std::optional<tail::ThetaEstimate> estimate;
  std::vector<stats::SurvivalPoint> survival;
  std::size_t censored = 0;
  double theta = a.theta.value_or(0.0);
  if (a.theta_from_sim) {
    const auto graph = sim::GraphSpec::torus(a.grid, a.grid);
    estimate = tail::estimate_theta(graph, a.p, a.replicas, {g.seed, 0}, g.workers);
    theta = estimate->theta;
    const auto target = a.target.value_or((a.grid / 2) * a.grid + a.grid / 2);
    if (target >= graph.vertex_count()) throw DomainError("--target outside the torus");
    const auto times = sim::first_burnout_times(graph, target, a.horizon, a.replicas, {g.seed, a.replicas}, g.workers);
    censored = static_cast<std::size_t>(std::count_if(times.begin(), times.end(), [](double t) { return std::isinf(t); }));
    survival = stats::empirical_survival(times, xs);
  }
  const auto params = tail::TailBoundParams::from_theta(a.p, theta);

  const bool csv = g.format == "csv";
  if (csv) {
    out.stream() << "# ffire tailbound p=" << num(params.p) << " S=" << num(params.S) << " theta=" << num(params.theta)
                 << " gamma=" << num(params.gamma) << " t_max=" << num(params.t_max) << " lambda=" << num(params.lambda)
                 << "\n";
    out.csv_header("x,bound,empirical_survival,empirical_se");
  }
  json rows = json::array();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    const double bound = x > 0.0 ? tail::tail_bound(x, params) : 1.0;
    if (csv) {
      out.stream() << num(x) << "," << num(bound);
      if (survival.empty()) {
        out.stream() << ",,\n";
      } else {
        out.stream() << "," << num(survival[i].survival) << "," << num(survival[i].se) << "\n";
      }
    } else {
      json row = {{"x", x}, {"bound", bound}};
      if (!survival.empty()) {
        row["empirical_survival"] = survival[i].survival;
        row["empirical_se"] = survival[i].se;
      }
      rows.push_back(row);
    }
  }
  if (!csv) {
    json body = {{"params",
                  {{"p", params.p}, {"S", params.S}, {"theta", params.theta}, {"gamma", params.gamma},
                   {"t_max", params.t_max}, {"lambda", params.lambda}}},
                 {"curve", rows}};
    if (estimate) {
      body["theta_estimate"] = {{"theta", estimate->theta},
                                {"standard_error", estimate->standard_error},
                                {"hits", estimate->hits},
                                {"replicas", estimate->replicas},
                                {"grid", a.grid}};
      body["censored"] = censored;
    }
    out.write_json(body);
  }
}

int run_verify(const Globals& g, const VerifyArgs& a, Output& out) {
  acceptance::Options opts;
  opts.quick = a.quick;
  opts.seed = g.seed;
  opts.workers = g.workers;
  const bool csv = g.format == "csv";
  if (csv) out.stream() << "# ffire verify" << (a.quick ? " --quick" : "") << " seed=" << g.seed << "\n";
  const auto results = acceptance::run_all(opts, [&](const acceptance::CriterionResult& r) {
    if (csv) {
      out.stream() << acceptance::format_line(r) << "\n";
      out.commit();
    }
  });
  const bool all = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; });
  if (!csv) {
    json rows = json::array();
    for (const auto& r : results) {
      rows.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail},
                      {"seconds", r.seconds}, {"time_limit_seconds", r.time_limit_seconds}});
    }
    out.write_json({{"quick", a.quick}, {"criteria", rows}, {"all_passed", all}});
  } else {
    out.stream() << (all ? "ALL PASSED" : "SOME CRITERIA FAILED") << "\n";
  }
  return all ? 0 : 1;
}

// ---------------------------------------------------------------- config ---

int emit_error(const std::string& type, const std::string& message, int code) {
  std::cerr << json{{"error", {{"type", type}, {"message", message}}}}.dump() << "\n";
  return code;
}

std::vector<CLI::Option*> options_of(CLI::App* app) {
  return app->get_options([](const CLI::Option* o) { return !o->get_lnames().empty(); });
}

CLI::Option* find_option(CLI::App* app, CLI::App* sub, const std::string& key) {
  for (CLI::App* scope : {sub, app}) {
    if (!scope) continue;
    for (auto* opt : options_of(scope)) {
      const auto& names = opt->get_lnames();
      if (std::find(names.begin(), names.end(), key) != names.end()) return opt;
    }
  }
  return nullptr;
}

bool given_on_command_line(const std::vector<std::string>& args, const std::string& key) {
  const std::string flag = "--" + key;
  return std::any_of(args.begin(), args.end(),
                     [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

std::string scalar_token(const json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  if (v.is_number_float()) return num(v.get<double>());
  throw ConfigError("config key '" + key + "' has an unsupported value type");
}

// Expands a JSON config into command-line tokens. Explicit flags win.
std::vector<std::string> expand_config(CLI::App& app, std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;

  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!cfg.is_object()) throw ConfigError("config must be a JSON object");

  CLI::App* sub = nullptr;
  for (const auto& a : args) {
    if (auto* s = app.get_subcommand_no_throw(a)) {
      sub = s;
      break;
    }
  }
  if (cfg.contains("subcommand")) {
    const auto name = cfg["subcommand"].get<std::string>();
    auto* named = app.get_subcommand_no_throw(name);
    if (!named) throw ConfigError("config names unknown subcommand '" + name + "'");
    if (sub && sub != named) throw ConfigError("config subcommand '" + name + "' conflicts with the command line");
    if (!sub) {
      sub = named;
      args.insert(args.begin(), name);
    }
  }

  std::vector<std::string> extra;
  for (const auto& [key, value] : cfg.items()) {
    if (key == "subcommand") continue;
    if (key == "config") throw ConfigError("config may not reference another config");
    CLI::Option* opt = find_option(&app, sub, key);
    if (!opt) throw ConfigError("unknown config key '" + key + "'");
    if (given_on_command_line(args, key)) continue;
    if (value.is_boolean()) {
      if (opt->get_type_size() != 0) throw ConfigError("config key '" + key + "' is not a flag");
      if (value.get<bool>()) extra.push_back("--" + key);
      continue;
    }
    extra.push_back("--" + key);
    if (value.is_array()) {
      for (const auto& v : value) extra.push_back(scalar_token(v, key));
    } else {
      extra.push_back(scalar_token(value, key));
    }
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

// Canonical effective configuration: every option of the chosen subcommand and
// the output-affecting globals, with explicit values or defaults.
std::string config_hash(CLI::App& app, CLI::App* sub) {
  json canon = {{"subcommand", sub->get_name()}};
  auto add = [&](CLI::App* scope, bool globals) {
    for (auto* opt : options_of(scope)) {
      const std::string key = opt->get_lnames().front();
      if (globals && (key == "config" || key == "out" || key == "workers")) continue;
      if (opt->count() > 0) {
        canon[key] = opt->results();
      } else {
        canon[key] = opt->get_default_str();
      }
    }
  };
  add(&app, true);
  add(sub, false);
  return hex64(fnv1a(canon.dump()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Forest-fire toolkit: exact moments, Monte Carlo burnout sampling, Dickman functions and tail bounds"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--streams", g.streams, "Independent replica streams")->check(CLI::PositiveNumber);
  app.add_option("--workers", g.workers, "Worker threads (0 = hardware concurrency)");
  app.add_option("--precision-bits", g.precision_bits, "Working precision for alternating sums");
  app.add_option("--out", g.out, "Output path ('-' for stdout)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--config", g.config, "JSON config file; keys are option names, unknown keys are rejected");

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "Sample inter-burnout gaps on Z+ or first burnouts on a graph");
  simulate->add_option("--site", sa.site, "Site n on Z+");
  simulate->add_option("--samples", sa.samples, "Gaps per stream (Z+) or replicas (graph)");
  simulate->add_option("--reference", sa.reference, "Reference law for the KS summary")
      ->check(CLI::IsMember({"none", "tau0", "tau1", "tau2", "dickman"}));
  simulate->add_option("--graph", sa.graph, "Geometry")->check(CLI::IsMember({"zplus", "path", "torus"}));
  simulate->add_option("--length", sa.length, "Path vertex count")->check(CLI::Range(2, 1 << 20));
  simulate->add_option("--grid", sa.grid, "Torus side")->check(CLI::Range(3, 4096));
  simulate->add_option("--target", sa.target, "Target vertex (graph modes)");
  simulate->add_option("--horizon", sa.horizon, "Censoring horizon (graph modes)")->check(CLI::PositiveNumber);

  MomentsArgs ma;
  auto* moments = app.add_subcommand("moments", "Exact moment table of tau_n");
  moments->add_option("--n", ma.n, "Order N or range A..B");

  DickmanArgs da;
  auto* dickman = app.add_subcommand("dickman", "Dickman function, limit density and GD(1) CDF");
  auto* eval_opt = dickman->add_option("--eval", da.eval, "Evaluate at x");
  dickman->add_option("--table", da.table, "Tabulate on [0, X_MAX] with step H")->expected(2)->excludes(eval_opt);

  GD1Args ga;
  auto* gd1 = app.add_subcommand("gd1", "Sample the generalized Dickman law GD(1)");
  gd1->add_option("--sample", ga.sample, "Number of draws");
  gd1->add_option("--epsilon", ga.epsilon, "Product truncation threshold")->check(CLI::Range(1e-300, 1.0));

  TailArgs ta;
  auto* tailbound = app.add_subcommand("tailbound", "Exponential tail bound for first burnout on a torus");
  tailbound->add_option("--p", ta.p, "Occupation probability")->check(CLI::Range(0.0, 1.0));
  tailbound->add_option("--theta", ta.theta, "Percolation probability theta(p)");
  tailbound->add_flag("--theta-from-sim", ta.theta_from_sim, "Estimate theta and the empirical survival by simulation");
  tailbound->add_option("--grid", ta.grid, "Torus side")->check(CLI::Range(3, 4096));
  tailbound->add_option("--x", ta.x, "Evaluation grid a:b:step");
  tailbound->add_option("--replicas", ta.replicas, "Monte Carlo replicas")->check(CLI::PositiveNumber);
  tailbound->add_option("--target", ta.target, "Target vertex (default: farthest from the origin)");
  tailbound->add_option("--horizon", ta.horizon, "Censoring horizon")->check(CLI::PositiveNumber);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  verify->add_flag("--quick", va.quick, "Reduced sample sizes");

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = expand_config(app, std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return emit_error("invalid_config", e.what(), 2);
  } catch (const ConfigError& e) {
    return emit_error("invalid_config", e.what(), 2);
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    Output out(g.out, sub->get_name(), config_hash(app, sub), g.seed);
    if (sub == simulate) run_simulate(g, sa, out);
    if (sub == moments) run_moments(g, ma, out);
    if (sub == dickman) run_dickman(g, da, out);
    if (sub == gd1) run_gd1(g, ga, out);
    if (sub == tailbound) run_tailbound(g, ta, out);
    if (sub == verify) {
      const int rc = run_verify(g, va, out);
      out.commit();
      return rc;
    }
    out.commit();
  } catch (const ConfigError& e) {
    return emit_error("invalid_config", e.what(), 2);
  } catch (const DomainError& e) {
    return emit_error("domain_error", e.what(), 3);
  } catch (const BudgetError& e) {
    return emit_error("budget_exceeded", e.what(), 3);
  } catch (const EmptyInputError& e) {
    return emit_error("empty_input", e.what(), 3);
  } catch (const ConvergenceError& e) {
    return emit_error("convergence_error", e.what(), 3);
  } catch (const std::exception& e) {
    return emit_error("error", e.what(), 4);
  }
  return 0;
}
