#include "cli_app.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

#include "chaoskit/errors.hpp"
#include "chaoskit/ocp.hpp"
#include "chaoskit/quadrature.hpp"
#include "chaoskit/recurrence.hpp"
#include "chaoskit/tensor.hpp"
#include "chaoskit/vandevusse.hpp"

namespace chaoskit::cli {

using nlohmann::json;

namespace {

enum class Level { error = 0, warn = 1, info = 2, debug = 3 };

Level log_level() {
  const char* env = std::getenv("CHAOSKIT_LOG");
  if (env == nullptr) return Level::warn;
  const std::string v(env);
  if (v == "error" || v == "0") return Level::error;
  if (v == "info" || v == "2") return Level::info;
  if (v == "debug" || v == "3") return Level::debug;
  return Level::warn;
}

void log(std::ostream& err, Level level, const std::string& msg) {
  static const char* names[] = {"error", "warn", "info", "debug"};
  if (static_cast<int>(level) <= static_cast<int>(log_level())) {
    err << "[" << names[static_cast<int>(level)] << "] " << msg << "\n";
  }
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

template <class T>
T get_or(const json& spec, const char* key, T fallback) {
  if (!spec.contains(key)) return fallback;
  try {
    return spec.at(key).get<T>();
  } catch (const json::exception& e) {
    throw SpecError(std::string("field '") + key + "': " + e.what());
  }
}

double real_or(const json& spec, const char* key, double fallback) {
  if (!spec.contains(key)) return fallback;
  const json& v = spec.at(key);
  if (v.is_null()) return std::numeric_limits<double>::infinity();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "+inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  if (!v.is_number()) throw SpecError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

ConstructionMethod method_from(const json& spec) {
  const auto name = get_or<std::string>(spec, "method", "automatic");
  if (name == "automatic") return ConstructionMethod::automatic;
  if (name == "closed_form") return ConstructionMethod::closed_form;
  if (name == "stieltjes") return ConstructionMethod::stieltjes;
  if (name == "lanczos") return ConstructionMethod::lanczos;
  if (name == "multiple_discretization") return ConstructionMethod::multiple_discretization;
  throw SpecError("field 'method': unknown construction method '" + name + "'");
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path) {
    if (!out_) throw SpecError("cannot write " + path);
  }
  void header(const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) out_ << (i ? "," : "") << cols[i];
    out_ << "\n";
  }
  void row(const std::vector<std::string>& cells) { header(cells); }

 private:
  std::ofstream out_;
};

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw SpecError("cannot write " + path);
  out << j.dump(2) << "\n";
}

json basis_factor_json(const OrthoBasis& b) {
  const auto& rc = b.coefficients();
  const std::size_t n = b.degree() + 1;
  json f;
  f["source"] = std::string(to_string(rc.source));
  f["degree"] = b.degree();
  f["alpha"] = std::vector<double>(rc.alpha.begin(), rc.alpha.begin() + static_cast<long>(n));
  f["beta"] = std::vector<double>(rc.beta.begin(), rc.beta.begin() + static_cast<long>(n));
  json monic = json::array();
  for (std::size_t k = 0; k <= b.degree(); ++k) monic.push_back(expand_monic(rc, k));
  f["monic"] = monic;
  return f;
}

int cmd_basis(const RunConfig& cfg, json spec, std::ostream& err) {
  if (cfg.n) {
    if (*cfg.n == 0) throw SpecError("--n must be at least 1");
    spec["degree"] = *cfg.n - 1;
  }
  const MultiOrthoBasis basis = basis_from_json(spec);
  json out;
  if (basis.dimension() == 1 && spec.contains("measure")) {
    out = basis_factor_json(basis.factors()[0]);
  } else {
    out["factors"] = json::array();
    for (const auto& f : basis.factors()) out["factors"].push_back(basis_factor_json(f));
    out["total_degree"] = basis.total_degree();
  }
  out["index_set"] = basis.index_set();
  write_json(cfg.out_prefix + ".json", out);

  CsvWriter csv(cfg.out_prefix + ".csv");
  csv.header({"factor", "k", "power", "coefficient"});
  for (std::size_t f = 0; f < basis.dimension(); ++f) {
    const auto& b = basis.factors()[f];
    for (std::size_t k = 0; k <= b.degree(); ++k) {
      const auto c = expand_monic(b.coefficients(), k);
      for (std::size_t j = 0; j < c.size(); ++j) {
        csv.row({std::to_string(f), std::to_string(k), std::to_string(j), format_real(c[j])});
      }
    }
  }
  log(err, Level::info, "wrote " + cfg.out_prefix + ".json and .csv");
  return 0;
}

int cmd_quad(const RunConfig& cfg, json spec, std::ostream& err) {
  const std::string rule = cfg.rule ? *cfg.rule : get_or<std::string>(spec, "rule", "gauss");
  const std::size_t n = cfg.n ? *cfg.n : get_or<std::size_t>(spec, "n", 0);
  if (n == 0) throw SpecError("field 'n': number of nodes required");

  QuadratureRule q;
  auto interval = [&]() {
    if (spec.contains("interval")) {
      const auto v = spec.at("interval").get<std::vector<double>>();
      if (v.size() != 2) throw SpecError("field 'interval' must be [lo, hi]");
      return Interval{v[0], v[1]};
    }
    if (!spec.contains("measure")) throw SpecError("field 'interval' or 'measure' required");
    return measure_from_json(spec.at("measure")).support();
  };
  if (rule == "fejer1") {
    q = fejer1_rule(n, interval());
  } else if (rule == "fejer2") {
    q = fejer2_rule(n, interval());
  } else if (rule == "clenshaw_curtis" || rule == "cc") {
    q = clenshaw_curtis_rule(n, interval());
  } else {
    if (!spec.contains("measure")) throw SpecError("field 'measure' required for rule " + rule);
    const Measure m = measure_from_json(spec.at("measure"));
    const auto rc = construct_coefficients(m, n + 1, method_from(spec));
    if (rule == "gauss") {
      q = gauss_rule(rc, n);
    } else if (rule == "radau") {
      q = gauss_radau_rule(rc, n, real_or(spec, "endpoint", m.support().lo), m.support());
    } else if (rule == "lobatto") {
      q = gauss_lobatto_rule(rc, n, real_or(spec, "left", m.support().lo),
                             real_or(spec, "right", m.support().hi), m.support());
    } else {
      throw SpecError("unknown rule '" + rule + "'");
    }
  }
  CsvWriter csv(cfg.out_prefix + ".csv");
  csv.header({"node", "weight"});
  for (std::size_t i = 0; i < q.size(); ++i) csv.row({format_real(q.nodes[i]), format_real(q.weights[i])});
  log(err, Level::info, "wrote " + cfg.out_prefix + ".csv");
  return 0;
}

int cmd_tensor(const RunConfig& cfg, json spec, std::ostream& err) {
  const std::size_t order = cfg.order ? *cfg.order : get_or<std::size_t>(spec, "order", 3);
  const MultiOrthoBasis basis = basis_from_json(spec);
  const Tensor t = compute_tensor(basis, order);
  CsvWriter csv(cfg.out_prefix + ".csv");
  std::vector<std::string> head;
  for (std::size_t j = 1; j <= order; ++j) head.push_back("k" + std::to_string(j));
  head.push_back("value");
  csv.header(head);
  for (std::size_t i = 0; i < t.nonzeros(); ++i) {
    std::vector<std::string> row;
    for (std::size_t k : t.index(i)) row.push_back(std::to_string(k));
    row.push_back(format_real(t.value(i)));
    csv.row(row);
  }
  log(err, Level::info, std::to_string(t.nonzeros()) + " nonzero entries");
  return 0;
}

int cmd_propagate(const RunConfig& cfg, const json& spec, std::ostream& err) {
  VanDeVusseConfig c = vdv_reference_config(get_or<std::size_t>(spec, "total_degree", 4),
                                            real_or(spec, "relative_std", 0.1));
  c.r3 = real_or(spec, "r3", c.r3);
  c.u = real_or(spec, "u", c.u);
  c.cA0 = PceVector::constant(c.basis, real_or(spec, "cA0", 0.5));
  c.cB0 = PceVector::constant(c.basis, real_or(spec, "cB0", 0.1));
  c.t_end = real_or(spec, "t_end", c.t_end);
  c.dt = real_or(spec, "dt", c.dt);
  const auto stride = get_or<std::size_t>(spec, "stride", 10);
  const auto samples = get_or<std::size_t>(spec, "mc_samples", 0);
  const auto checkpoints = get_or<std::size_t>(spec, "checkpoints", 10);
  if (stride == 0) throw SpecError("field 'stride' must be positive");

  const VdvTrajectory tr = vdv_propagate(c);
  CsvWriter csv(cfg.out_prefix + ".csv");
  csv.header({"t", "mean_cA", "std_cA", "mean_cB", "std_cB"});
  for (std::size_t s = 0; s < tr.times.size(); ++s) {
    if (s % stride != 0 && s + 1 != tr.times.size()) continue;
    csv.row({format_real(tr.times[s]), format_real(tr.mean_cA[s]), format_real(tr.std_cA[s]),
             format_real(tr.mean_cB[s]), format_real(tr.std_cB[s])});
  }

  json summary;
  summary["basis_size"] = c.basis->size();
  summary["steps"] = c.steps();
  summary["dt"] = c.dt;
  json cps = json::array();
  const auto steps = vdv_checkpoints(c, checkpoints);
  std::optional<VdvMonteCarlo> mc;
  if (samples > 0) mc = vdv_monte_carlo(c, samples, cfg.seed, steps);
  for (std::size_t j = 0; j < steps.size(); ++j) {
    const std::size_t s = steps[j];
    json row{{"t", tr.times[s]},
             {"mean_cA", tr.mean_cA[s]},
             {"std_cA", tr.std_cA[s]},
             {"mean_cB", tr.mean_cB[s]},
             {"std_cB", tr.std_cB[s]}};
    if (mc) {
      row["mc_mean_cA"] = mc->mean_cA[j];
      row["mc_std_cA"] = mc->std_cA[j];
      row["mc_mean_cB"] = mc->mean_cB[j];
      row["mc_std_cB"] = mc->std_cB[j];
    }
    cps.push_back(row);
  }
  summary["checkpoints"] = cps;
  if (mc) {
    summary["mc_samples"] = samples;
    summary["seed"] = cfg.seed;
  }
  write_json(cfg.out_prefix + ".json", summary);
  log(err, Level::info, "propagated " + std::to_string(c.steps()) + " steps");
  return 0;
}

int cmd_ocp(const RunConfig& cfg, const json& spec, std::ostream& err) {
  OcpConfig c = ocp_reference_config(get_or<std::size_t>(spec, "total_degree", 4));
  c.lambda = real_or(spec, "lambda", c.lambda);
  c.x2_max = real_or(spec, "x2_max", c.x2_max);
  c.horizon = get_or<std::size_t>(spec, "horizon", c.horizon);
  c.r = real_or(spec, "r", c.r);
  const auto samples = get_or<std::size_t>(spec, "mc_samples", 100000);

  const OcpResult res = ocp_solve(c);
  CsvWriter csv(cfg.out_prefix + ".csv");
  csv.header({"t", "u", "mean_x1", "std_x1", "mean_x2", "std_x2"});
  for (std::size_t t = 0; t <= c.horizon; ++t) {
    csv.row({std::to_string(t), t < c.horizon ? format_real(res.u[t]) : std::string(),
             format_real(res.mean_x1[t]), format_real(res.std_x1[t]), format_real(res.mean_x2[t]),
             format_real(res.std_x2[t])});
  }
  json summary{{"objective", res.objective},
               {"stationarity", res.stationarity},
               {"complementarity", res.complementarity},
               {"max_constraint_value", res.max_constraint_value},
               {"newton_iterations", res.newton_iterations},
               {"refined", res.polished},
               {"constrained", res.constrained},
               {"basis_size", c.basis->size()},
               {"u", res.u}};
  if (samples > 0) {
    summary["violation_rate"] = ocp_violation_rate(c, res.u, samples, cfg.seed);
    summary["mc_samples"] = samples;
    summary["seed"] = cfg.seed;
  }
  write_json(cfg.out_prefix + ".json", summary);
  log(err, Level::info, "objective " + format_real(res.objective));
  return 0;
}

template <class F>
double mean_microseconds(std::size_t reps, F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < reps; ++i) f();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::micro>(t1 - t0).count() / static_cast<double>(reps);
}

int cmd_bench(const RunConfig& cfg, const json& spec, std::ostream& err) {
  const auto reps = get_or<std::size_t>(spec, "repetitions", 10000);
  if (reps == 0) throw SpecError("field 'repetitions' must be positive");
  const std::size_t degree = get_or<std::size_t>(spec, "degree", 4);

  auto mixture_basis = [&] { return MultiOrthoBasis::univariate(OrthoBasis(reactor_rate_mixture(), degree)); };
  auto propagation_basis = [&] {
    std::vector<OrthoBasis> f;
    f.push_back(OrthoBasis::canonical(CanonicalKind::uniform01, degree));
    f.push_back(OrthoBasis::canonical(CanonicalKind::uniform01, degree));
    return MultiOrthoBasis(std::move(f), degree);
  };
  auto optimization_basis = [&] {
    std::vector<OrthoBasis> f;
    f.emplace_back(reactor_rate_mixture(), degree);
    f.push_back(OrthoBasis::canonical(CanonicalKind::gaussian, degree));
    f.push_back(OrthoBasis::canonical(CanonicalKind::gaussian, degree));
    return MultiOrthoBasis(std::move(f), degree);
  };

  struct Row {
    std::string config;
    std::string task;
    double mean_us;
  };
  std::vector<Row> rows;
  auto bench_config = [&](const std::string& name, auto&& make) {
    const MultiOrthoBasis b = make();
    rows.push_back({name, "basis", mean_microseconds(reps, [&] { (void)make(); })});
    rows.push_back({name, "tensor2", mean_microseconds(reps, [&] { (void)compute_tensor(b, 2); })});
    rows.push_back({name, "tensor3", mean_microseconds(reps, [&] { (void)compute_tensor(b, 3); })});
    log(err, Level::info, "benchmarked " + name);
  };
  bench_config("beta_mixture", mixture_basis);
  bench_config("propagation", propagation_basis);
  bench_config("optimization", optimization_basis);

  CsvWriter csv(cfg.out_prefix + ".csv");
  csv.header({"config", "task", "mean_us", "repetitions"});
  json out = json::array();
  for (const auto& r : rows) {
    csv.row({r.config, r.task, format_real(r.mean_us), std::to_string(reps)});
    out.push_back({{"config", r.config}, {"task", r.task}, {"mean_us", r.mean_us}, {"repetitions", reps}});
  }
  write_json(cfg.out_prefix + ".json", json{{"results", out}});
  return 0;
}

}  // namespace

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void apply_override(json& spec, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw SpecError("override '" + assignment + "' is not of the form key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  json* node = &spec;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (!node->is_object()) throw SpecError("override '" + key + "' descends into a non-object");
    node = &(*node)[part];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  *node = value;
}

json load_spec(const RunConfig& cfg) {
  json spec = json::object();
  if (!cfg.spec_path.empty()) {
    std::ifstream in(cfg.spec_path);
    if (!in) throw SpecError("cannot open spec " + cfg.spec_path);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    try {
      spec = json::parse(text);
    } catch (const json::parse_error& e) {
      throw SpecError(cfg.spec_path + ":" + std::to_string(line_of(text, e.byte)) + ": " + e.what());
    }
    if (!spec.is_object()) throw SpecError(cfg.spec_path + ": top level must be an object");
  }
  for (const auto& o : cfg.overrides) apply_override(spec, o);
  return spec;
}

Measure measure_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) throw SpecError("field '" + path + "' must be an object");
  if (j.contains("mixture")) {
    const json& comps = j.at("mixture");
    if (!comps.is_array() || comps.empty()) throw SpecError("field '" + path + ".mixture' must be a non-empty array");
    std::vector<double> weights;
    std::vector<Measure> measures;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const std::string p = path + ".mixture[" + std::to_string(i) + "]";
      if (!comps[i].contains("weight") || !comps[i].contains("measure")) {
        throw SpecError("field '" + p + "' needs 'weight' and 'measure'");
      }
      weights.push_back(real_or(comps[i], "weight", 0.0));
      measures.push_back(measure_from_json(comps[i].at("measure"), p + ".measure"));
    }
    return mixture(weights, measures);
  }
  if (!j.contains("kind")) throw SpecError("field '" + path + ".kind' missing");
  if (j.at("kind") == "mixture") {
    if (!j.contains("weights") || !j.contains("components")) {
      throw SpecError("field '" + path + "' of kind mixture needs 'weights' and 'components'");
    }
    const json& comps = j.at("components");
    if (!comps.is_array()) throw SpecError("field '" + path + ".components' must be an array");
    std::vector<double> weights;
    try {
      weights = j.at("weights").get<std::vector<double>>();
    } catch (const json::exception&) {
      throw SpecError("field '" + path + ".weights' must be an array of numbers");
    }
    std::vector<Measure> measures;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      measures.push_back(measure_from_json(comps[i], path + ".components[" + std::to_string(i) + "]"));
    }
    return mixture(weights, measures);
  }
  const auto kind = canonical_kind_from_string(get_or<std::string>(j, "kind", ""));
  return canonical_measure(kind, real_or(j, "alpha", 0.0), real_or(j, "beta", 0.0));
}

MultiOrthoBasis basis_from_json(const json& spec) {
  const ConstructionMethod method = method_from(spec);
  if (spec.contains("factors")) {
    const json& fs = spec.at("factors");
    if (!fs.is_array() || fs.empty()) throw SpecError("field 'factors' must be a non-empty array");
    const auto p = get_or<std::size_t>(spec, "total_degree", 4);
    std::vector<OrthoBasis> factors;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      factors.emplace_back(measure_from_json(fs[i], "factors[" + std::to_string(i) + "]"), p, method);
    }
    return MultiOrthoBasis(std::move(factors), p);
  }
  if (!spec.contains("measure")) throw SpecError("field 'measure' or 'factors' required");
  const auto d = get_or<std::size_t>(spec, "degree", 4);
  return MultiOrthoBasis::univariate(OrthoBasis(measure_from_json(spec.at("measure")), d, method));
}

int run(const RunConfig& cfg, std::ostream& err) {
  try {
    const json spec = load_spec(cfg);
    if (cfg.subcommand == "basis") return cmd_basis(cfg, spec, err);
    if (cfg.subcommand == "quad") return cmd_quad(cfg, spec, err);
    if (cfg.subcommand == "tensor") return cmd_tensor(cfg, spec, err);
    if (cfg.subcommand == "propagate") return cmd_propagate(cfg, spec, err);
    if (cfg.subcommand == "ocp") return cmd_ocp(cfg, spec, err);
    if (cfg.subcommand == "bench") return cmd_bench(cfg, spec, err);
    log(err, Level::error, "unknown subcommand '" + cfg.subcommand + "'");
    return 2;
  } catch (const SpecError& e) {
    log(err, Level::error, std::string("spec: ") + e.what());
    return 2;
  } catch (const json::exception& e) {
    log(err, Level::error, std::string("spec: ") + e.what());
    return 2;
  } catch (const Error& e) {
    log(err, Level::error, e.what());
    return 1;
  }
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Orthogonal polynomials, polynomial chaos and stochastic control"};
  app.require_subcommand(1);
  RunConfig cfg;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"basis", "Recurrence and monic coefficients of an orthogonal basis (JSON)"},
      {"quad", "Quadrature nodes and weights (CSV)"},
      {"tensor", "Canonical nonzero tensor entries (CSV)"},
      {"propagate", "Galerkin Van de Vusse propagation (CSV + JSON)"},
      {"ocp", "Stochastic optimal control (CSV + JSON)"},
      {"bench", "Mean timings of basis and tensor construction (CSV + JSON)"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--spec", cfg.spec_path, "JSON spec file");
    sub->add_option("--out", cfg.out_prefix, "Output path prefix")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    sub->add_option("--set", cfg.overrides, "Override spec entries, key=value");
    if (name == "quad") sub->add_option("--rule", cfg.rule, "gauss, radau, lobatto, fejer1, fejer2, cc");
    if (name == "quad" || name == "basis") sub->add_option("--n", cfg.n, "Number of nodes / polynomials");
    if (name == "tensor") sub->add_option("--order", cfg.order, "Tensor order");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();
  return run(cfg, std::cerr);
}

}  // namespace chaoskit::cli
