#include "ldp/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <optional>
#include <sstream>

#include "ldp/json_io.hpp"
#include "ldp/rates.hpp"
#include "ldp/samplers.hpp"
#include "ldp/types_method.hpp"
#include "ldp/validate.hpp"

#ifndef LDP_VERSION
#define LDP_VERSION "dev"
#endif

namespace ldp {
namespace {

using io::json;

// --- shared option groups ---------------------------------------------------

struct TargetOptions {
  std::optional<std::string> pi;
  std::optional<std::string> nu;
  std::optional<double> c;
  int colors = 0;
  bool quantize = false;

  void attach(CLI::App* app, bool allow_quantize) {
    app->add_option("--pi", pi, "Pair measure: JSON file, or a number with --colors 1");
    app->add_option("--nu", nu, "Symbol measure JSON file");
    app->add_option("--c", c, "Single-color mean degree (same as --colors 1 --pi C)");
    app->add_option("--colors", colors, "Number of colors for the inline --pi shorthand");
    if (allow_quantize) {
      app->add_flag("--quantize", quantize, "Round (nu, pi) onto the 1/n lattice instead of requiring it");
    }
  }

  bool given() const { return pi || c; }

  std::pair<SymbolMeasure, PairMeasure> resolve() const {
    if (pi) {
      double value = 0.0;
      const auto* first = pi->data();
      const auto* last = pi->data() + pi->size();
      const auto [ptr, ec] = std::from_chars(first, last, value);
      if (ec == std::errc() && ptr == last) {
        if (colors > 1) throw FormatError("inline --pi needs --colors 1; use a JSON file for more colors");
        if (nu) throw FormatError("inline --pi implies nu = 1; drop --nu");
        return single_color_targets(value);
      }
      PairMeasure p = io::pair_measure_from_json(io::read_json_file(*pi));
      if (nu) return {io::symbol_measure_from_json(io::read_json_file(*nu)), std::move(p)};
      if (p.alphabet().size() != 1) throw FormatError("--nu FILE is required with more than one color");
      return {SymbolMeasure(p.alphabet(), {1.0}), std::move(p)};
    }
    if (c) {
      if (colors > 1) throw FormatError("--c is the single-color shorthand");
      return single_color_targets(*c);
    }
    throw FormatError("no targets given: pass --pi (file or number) or --c");
  }

  QuantizedTargets quantized(std::int64_t n) const {
    const auto [nu_m, pi_m] = resolve();
    return quantize ? ldp::quantize(nu_m, pi_m, n) : QuantizedTargets::exact(nu_m, pi_m, n);
  }
};

struct OutputOptions {
  std::optional<std::string> dir;
  void attach(CLI::App* app) { app->add_option("--out", dir, "Write outputs and a run manifest into DIR"); }
};

std::vector<double> parse_real_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 3) throw FormatError("--grid expects a:b:step");
  double a = 0.0;
  double b = 0.0;
  double step = 0.0;
  try {
    a = std::stod(parts[0]);
    b = std::stod(parts[1]);
    step = std::stod(parts[2]);
  } catch (const std::exception&) {
    throw FormatError("--grid expects numbers in a:b:step");
  }
  if (!(step > 0.0) || b < a) throw FormatError("--grid needs a <= b and step > 0");
  const auto count = static_cast<std::int64_t>(std::floor((b - a) / step + 1e-9)) + 1;
  std::vector<double> out;
  for (std::int64_t i = 0; i < count; ++i) out.push_back(a + static_cast<double>(i) * step);
  return out;
}

// "40,60,80" or "40:100:20".
std::vector<std::int64_t> parse_int_grid(const std::string& spec) {
  std::vector<std::int64_t> out;
  auto to_int = [](const std::string& s) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw FormatError("bad integer '" + s + "' in --ngrid");
    return v;
  };
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw FormatError("--ngrid expects a list or a:b:step");
    const auto a = to_int(parts[0]);
    const auto b = to_int(parts[1]);
    const auto step = to_int(parts[2]);
    if (step < 1 || b < a) throw FormatError("--ngrid needs a <= b and step >= 1");
    for (auto n = a; n <= b; n += step) out.push_back(n);
    return out;
  }
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ',');) out.push_back(to_int(p));
  return out;
}

std::string num_str(const mpz_class& z) { return z.get_str(); }

json type_json(const TypeMember& m, const QuantizedTargets& t) {
  return {{"measure", io::to_json(m.counts.measure())},
          {"counts", io::to_json(m.counts)},
          {"probability_num", num_str(m.probability.get_num())},
          {"probability_den", num_str(m.probability.get_den())},
          {"probability", m.probability.get_d()},
          {"entropy", relative_entropy_to_poisson(m.counts, t)}};
}

json targets_json(const QuantizedTargets& t) {
  return {{"n", t.n()}, {"nu", io::to_json(t.nu())}, {"pi", io::to_json(t.pi())}};
}

json rate_json(const IsolatedRateResult& r) {
  return {{"x", r.x},
          {"c", r.c},
          {"value", io::to_json(r.value)},
          {"lambda", r.lambda ? io::to_json(*r.lambda) : json(nullptr)},
          {"minimizer", r.minimizer ? io::to_json(*r.minimizer) : json(nullptr)},
          {"closed_form", std::isfinite(r.closed_form) ? json(r.closed_form)
                              : std::isnan(r.closed_form)  ? json(nullptr)
                                                                 : json(r.closed_form < 0 ? "-inf" : "inf")}};
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Emits data to stdout, or into --out DIR followed by the manifest.
class Emitter {
 public:
  Emitter(std::string subcommand, const OutputOptions& opts, std::ostream& out)
      : opts_(opts), out_(out), start_(std::chrono::steady_clock::now()) {
    manifest_.subcommand = std::move(subcommand);
    manifest_.tool_version = LDP_VERSION;
  }

  void parameters(json p, std::uint64_t seed = 0) {
    manifest_.parameters = std::move(p);
    manifest_.seed = seed;
  }

  void emit(const std::string& name, const std::string& content) {
    if (!opts_.dir) {
      out_ << content;
      return;
    }
    std::filesystem::create_directories(*opts_.dir);
    write_file_atomic(std::filesystem::path(*opts_.dir) / name, content);
    manifest_.outputs.push_back(name);
  }

  void finish() {
    if (!opts_.dir) return;
    manifest_.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    write_manifest(manifest_, *opts_.dir);
    for (const auto& o : manifest_.outputs) out_ << (std::filesystem::path(*opts_.dir) / o).string() << "\n";
    out_ << (std::filesystem::path(*opts_.dir) / "manifest.json").string() << "\n";
  }

 private:
  const OutputOptions& opts_;
  std::ostream& out_;
  RunManifest manifest_;
  std::chrono::steady_clock::time_point start_;
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// --- subcommands ------------------------------------------------------------

struct SampleCmd {
  TargetOptions targets;
  OutputOptions output;
  std::int64_t n = 0;
  std::uint64_t seed = 0;
  std::int64_t samples = 1;
  bool conditional = false, allocation = false, coupled = false, bernoulli = false;

  void attach(CLI::App* app) {
    targets.attach(app, true);
    output.attach(app);
    app->add_option("--n", n, "Number of vertices / bins")->required();
    app->add_option("--seed", seed, "Random seed");
    app->add_option("--samples", samples, "Number of samples")->check(CLI::PositiveNumber);
    auto* g = app->add_option_group("model");
    g->add_flag("--conditional", conditional, "Conditional graph model (default)");
    g->add_flag("--allocation", allocation, "Random allocation model");
    g->add_flag("--coupled", coupled, "Coupled graph and allocation");
    g->add_flag("--bernoulli", bernoulli, "Unconditional model with p = min(C/n, 1)");
    g->require_option(0, 1);
  }

  void run(std::ostream& out) {
    Emitter emit("sample", output, out);
    json samples_json = json::array();
    Rng rng(seed, {static_cast<std::uint64_t>(n)});
    std::string model = "conditional";
    if (bernoulli) {
      model = "bernoulli";
      const auto [nu, pi] = targets.resolve();
      const GraphParams params{n, nu, bernoulli_kernel(nu, pi)};
      for (std::int64_t i = 0; i < samples; ++i) samples_json.push_back(io::to_json(sample_colored_graph(params, rng)));
    } else {
      const auto t = targets.quantized(n);
      for (std::int64_t i = 0; i < samples; ++i) {
        if (allocation) {
          model = "allocation";
          samples_json.push_back(io::to_json(sample_allocation(t, rng)));
        } else if (coupled) {
          model = "coupled";
          samples_json.push_back(io::to_json(sample_coupled(t, rng)));
        } else {
          samples_json.push_back(io::to_json(sample_conditional_graph(t, rng)));
        }
      }
    }
    emit.parameters({{"model", model}, {"n", n}, {"samples", samples}, {"seed", seed},
                     {"pi", targets.pi.value_or("")}, {"nu", targets.nu.value_or("")},
                     {"c", targets.c ? json(*targets.c) : json(nullptr)}, {"quantize", targets.quantize}},
                    seed);
    emit.emit("samples.json", dump(samples == 1 ? samples_json[0] : samples_json));
    emit.finish();
  }
};

struct MeasuresCmd {
  std::string file;
  OutputOptions output;

  void attach(CLI::App* app) {
    app->add_option("file", file, "Graph, allocation or coupled-sample JSON")->required();
    output.attach(app);
  }

  void run(std::ostream& out) {
    json j = io::read_json_file(file);
    if (j.is_object() && j.contains("graph")) j = j.at("graph");
    const bool is_graph = j.is_object() && j.contains("edges");
    const EmpiricalMeasures e = is_graph ? empirical_measures(io::graph_from_json(j))
                                         : empirical_measures(io::allocation_from_json(j));
    const json result = {{"kind", is_graph ? "graph" : "allocation"},
                         {"n", e.profiles.n()},
                         {"edges", e.edge_count},
                         {"nu", io::to_json(e.l1())},
                         {"pi", io::to_json(e.l2())},
                         {"nu_counts", e.symbol_counts},
                         {"pi_counts", e.pair_counts},
                         {"neighbourhood", io::to_json(e.neighbourhood())},
                         {"degree", io::to_json(e.degree())}};
    Emitter emit("measures", output, out);
    emit.parameters({{"file", file}});
    emit.emit("measures.json", dump(result));
    emit.finish();
  }
};

struct EnumerateCmd {
  TargetOptions targets;
  OutputOptions output;
  std::int64_t n = 0;
  std::int64_t budget = EnumerationBudget{}.max_balls;
  std::optional<std::string> measure;
  bool with_corrections = false;

  void attach(CLI::App* app, bool exact_prob) {
    targets.attach(app, true);
    output.attach(app);
    app->add_option("--n", n, "Number of bins")->required();
    app->add_option("--budget", budget, "Enumeration cap on the total ball count");
    if (exact_prob) {
      app->add_option("--measure", measure, "Neighbourhood measure JSON; report only its probability");
      with_corrections = true;
    }
  }

  void run(std::ostream& out, const std::string& name) {
    const auto t = targets.quantized(n);
    json result = targets_json(t);
    if (measure) {
      const auto mu = io::neighbourhood_from_json(io::read_json_file(*measure));
      require_same_alphabet(mu.alphabet(), t.alphabet(), "--measure");
      const auto counts = ProfileCounts::from_measure(mu, n);
      const TypeMember m{counts, exact_type_probability(counts, t)};
      result["measure"] = io::to_json(mu);
      result["probability_num"] = num_str(m.probability.get_num());
      result["probability_den"] = num_str(m.probability.get_den());
      result["probability"] = m.probability.get_d();
      result["entropy"] = counts.matches(t) ? json(relative_entropy_to_poisson(counts, t)) : json(nullptr);
    } else {
      EnumerationBudget b;
      b.max_balls = budget;
      const TypeClass k = enumerate_type_class(t, b);
      json types = json::array();
      for (const auto& m : k.members) {
        json tj = type_json(m, t);
        if (with_corrections) {
          try {
            const auto s = sandwich(m, t, k.size());
            const auto c = stirling_corrections(m.counts, t, k.size());
            tj["corrections"] = {{"theta1", c.theta1}, {"theta2", c.theta2}, {"alpha1", c.alpha1},
                                 {"alpha2", c.alpha2}, {"beta1", c.beta1},   {"beta2", c.beta2},
                                 {"support", c.support_size}};
            tj["sandwich"] = {{"log_probability", s.log_probability}, {"log_lower", s.log_lower},
                              {"log_upper", s.log_upper}, {"lower_holds", s.lower_holds},
                              {"upper_holds", s.upper_holds}};
          } catch (const DomainError& e) {
            tj["corrections"] = nullptr;
            tj["corrections_error"] = e.what();
          }
        }
        types.push_back(std::move(tj));
      }
      result["count"] = k.size();
      result["types"] = std::move(types);
    }
    Emitter emit(name, output, out);
    emit.parameters({{"n", n}, {"budget", budget}, {"pi", targets.pi.value_or("")},
                     {"nu", targets.nu.value_or("")}, {"measure", measure.value_or("")}});
    emit.emit(name + ".json", dump(result));
    emit.finish();
  }
};

struct RateCmd {
  OutputOptions output;
  TargetOptions targets;
  bool isolated = false;
  std::optional<double> x;
  std::optional<std::string> degree;
  std::optional<std::string> neighbourhood;
  std::optional<std::string> grid;

  void attach(CLI::App* app) {
    output.attach(app);
    targets.attach(app, false);
    app->add_flag("--isolated", isolated, "Isolated-vertex rate eta(x)");
    app->add_option("--x", x, "Isolated proportion");
    app->add_option("--degree", degree, "Degree measure JSON; evaluates delta(d) at --c");
    app->add_option("--neighbourhood", neighbourhood, "Neighbourhood measure JSON; evaluates J at (--nu, --pi)");
    app->add_option("--grid", grid, "x grid a:b:step for --isolated; emits CSV");
  }

  void run(std::ostream& out) {
    Emitter emit("rate", output, out);
    json params = {{"isolated", isolated}};
    if (neighbourhood) {
      const auto mu = io::neighbourhood_from_json(io::read_json_file(*neighbourhood));
      const auto [nu, pi] = targets.resolve();
      params["neighbourhood"] = *neighbourhood;
      emit.parameters(params);
      emit.emit("rate.json", dump({{"value", io::to_json(rate_neighbourhood(mu, nu, pi))}}));
    } else if (degree) {
      if (!targets.c) throw FormatError("--degree needs --c");
      const auto d = io::degree_from_json(io::read_json_file(*degree));
      params["degree"] = *degree;
      params["c"] = *targets.c;
      emit.parameters(params);
      emit.emit("rate.json", dump({{"c", *targets.c}, {"value", io::to_json(rate_degree(d, *targets.c))}}));
    } else if (isolated) {
      if (!targets.c) throw FormatError("--isolated needs --c");
      const double c = *targets.c;
      params["c"] = c;
      if (grid) {
        params["grid"] = *grid;
        emit.parameters(params);
        std::string csv = "x,eta,lambda,closed_form\n";
        for (double xi : parse_real_grid(*grid)) {
          const auto r = rate_isolated(xi, c);
          csv += fmt(xi) + ',' + fmt(r.value.to_double()) + ',' +
                 (r.lambda ? fmt(r.lambda->to_double()) : "") + ',' + fmt(r.closed_form) + '\n';
        }
        emit.emit("rate_grid.csv", csv);
      } else {
        if (!x) throw FormatError("--isolated needs --x or --grid");
        params["x"] = *x;
        emit.parameters(params);
        emit.emit("rate.json", dump(rate_json(rate_isolated(*x, c))));
      }
    } else {
      throw FormatError("rate needs one of --isolated, --degree FILE, --neighbourhood FILE");
    }
    emit.finish();
  }
};

struct RootCmd {
  double x = 0.0;
  double c = 0.0;

  void attach(CLI::App* app) {
    app->add_option("--x", x, "Isolated proportion")->required();
    app->add_option("--c", c, "Mean degree")->required();
  }

  void run(std::ostream& out) {
    const Extended l = lambda_root(x, c);
    json r = {{"x", x}, {"c", c}, {"lambda", io::to_json(l)}};
    r["residual"] = l.is_finite() ? json(std::fabs(lambda_map(l.value()) - (1.0 - x) / c)) : json(nullptr);
    out << dump(r);
  }
};

struct ValidateCmd {
  TargetOptions targets;
  OutputOptions output;
  std::string model = "conditional";
  std::string event = "isolated-at-least";
  std::optional<double> x;
  double eps = 0.1;
  std::string ngrid;
  std::int64_t samples = 10000;
  std::uint64_t seed = 1;
  unsigned threads = 1;

  void attach(CLI::App* app, bool coupling) {
    targets.attach(app, false);
    output.attach(app);
    app->add_option("--ngrid", ngrid, "Sizes: comma list or a:b:step")->required();
    app->add_option("--samples", samples, "Samples per n")->check(CLI::PositiveNumber);
    app->add_option("--seed", seed, "Random seed");
    app->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    if (coupling) {
      app->add_option("--eps", eps, "Total-variation threshold");
    } else {
      app->add_option("--model", model, "conditional | allocation | coupled | bernoulli");
      app->add_option("--event", event, "always | isolated-at-least | isolated-above");
      app->add_option("--x", x, "Isolated-proportion threshold");
    }
  }

  EventSpec event_spec() const {
    if (event == "always") return EventSpec::always();
    if (!x) throw FormatError("--event " + event + " needs --x");
    if (event == "isolated-at-least") return EventSpec::isolated_at_least(*x);
    if (event == "isolated-above") return EventSpec::isolated_above(*x);
    throw FormatError("unknown --event '" + event + "'");
  }

  void emit_estimate(Emitter& emit, const DecayEstimate& e, json extra) {
    extra["estimate"] = to_json(e);
    emit.emit("decay.csv", decay_csv(e));
    emit.emit("estimate.json", dump(extra));
    emit.finish();
  }

  void run_ldp(std::ostream& out) {
    const auto [nu, pi] = targets.resolve();
    ExperimentConfig cfg{parse_model(model), nu, pi, parse_int_grid(ngrid), samples, seed, event_spec(),
                         threads, 4096};
    Emitter emit("validate-ldp", output, out);
    emit.parameters(to_json(cfg), seed);
    const auto e = estimate_event_rate(cfg);
    json extra = {{"config", to_json(cfg)}};
    if (nu.alphabet().size() == 1 && cfg.event.kind == EventSpec::Kind::IsolatedAtLeast) {
      const auto r = rate_isolated(*x, pi.total_mass());
      extra["prediction"] = {{"eta", io::to_json(r.value)},
                             {"lambda", r.lambda ? io::to_json(*r.lambda) : json(nullptr)}};
    }
    emit_estimate(emit, e, std::move(extra));
  }

  void run_coupling(std::ostream& out) {
    const auto [nu, pi] = targets.resolve();
    const auto grid = parse_int_grid(ngrid);
    Emitter emit("validate-coupling", output, out);
    json params = {{"alphabet", nu.alphabet().symbols()},
                   {"nu", std::vector<double>(nu.weights().begin(), nu.weights().end())},
                   {"pi", std::vector<double>(pi.entries().begin(), pi.entries().end())},
                   {"n_grid", grid}, {"eps", eps}, {"samples", samples}, {"seed", seed}};
    emit.parameters(params, seed);
    const auto r = coupling_probe(nu, pi, grid, eps, samples, seed, threads);
    params["mean_redraws"] = r.mean_redraws;
    params["sd_redraws"] = r.sd_redraws;
    params["mean_discrepancy"] = r.mean_discrepancy;
    emit_estimate(emit, r.estimate, {{"config", params}});
  }
};

bool is_runtime_domain_error(const Error& e) {
  return dynamic_cast<const DomainError*>(&e) || dynamic_cast<const FeasibilityError*>(&e) ||
         dynamic_cast<const QuantizationError*>(&e) || dynamic_cast<const BudgetError*>(&e) ||
         dynamic_cast<const AlphabetMismatch*>(&e);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Large-deviation toolkit for colored sparse random graphs", "ldpkit"};
  app.set_version_flag("--version", std::string(LDP_VERSION));
  app.require_subcommand(1);

  SampleCmd sample;
  MeasuresCmd measures;
  EnumerateCmd enumerate;
  EnumerateCmd exact_prob;
  RateCmd rate;
  RootCmd root;
  ValidateCmd validate_ldp;
  ValidateCmd validate_coupling;
  auto* s_sample = app.add_subcommand("sample", "Draw graphs, allocations or coupled samples");
  auto* s_measures = app.add_subcommand("measures", "Empirical measures of a sample file");
  auto* s_enumerate = app.add_subcommand("enumerate", "Enumerate the type class with exact probabilities");
  auto* s_exact = app.add_subcommand("exact-prob", "Exact type probabilities and Stirling diagnostics");
  auto* s_rate = app.add_subcommand("rate", "Evaluate a rate function");
  auto* s_root = app.add_subcommand("root", "Solve for lambda(x, c)");
  auto* s_vldp = app.add_subcommand("validate-ldp", "Monte Carlo decay-rate estimate for an event");
  auto* s_vcoup = app.add_subcommand("validate-coupling", "Coupling exceedance probe");
  sample.attach(s_sample);
  measures.attach(s_measures);
  enumerate.attach(s_enumerate, false);
  exact_prob.attach(s_exact, true);
  rate.attach(s_rate);
  root.attach(s_root);
  validate_ldp.attach(s_vldp, false);
  validate_coupling.attach(s_vcoup, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (s_sample->parsed()) sample.run(out);
    if (s_measures->parsed()) measures.run(out);
    if (s_enumerate->parsed()) enumerate.run(out, "enumerate");
    if (s_exact->parsed()) exact_prob.run(out, "exact-prob");
    if (s_rate->parsed()) rate.run(out);
    if (s_root->parsed()) root.run(out);
    if (s_vldp->parsed()) validate_ldp.run_ldp(out);
    if (s_vcoup->parsed()) validate_coupling.run_coupling(out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_runtime_domain_error(e) ? 2 : 1;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed input: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace ldp
