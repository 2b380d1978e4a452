#include "codon/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "codon/entropy.hpp"
#include "codon/errors.hpp"
#include "codon/rng.hpp"
#include "codon/tape.hpp"
#include "codon/virology.hpp"

namespace codon {

namespace {

using json = nlohmann::ordered_json;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw UsageError("invalid value '" + std::string(value) + "' for '" + std::string(key) + "'");
}

template <class T>
T parse_uint(std::string_view key, std::string_view value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (value.empty() || ec != std::errc() || ptr != end) bad_value(key, value);
  return out;
}

double parse_double(std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (value.empty() || ec != std::errc() || ptr != end) bad_value(key, value);
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes" || value.empty()) return true;
  if (value == "false" || value == "0" || value == "no") return false;
  bad_value(key, value);
}

template <class Fn>
auto parse_named(std::string_view key, std::string_view value, Fn fn) {
  try {
    return fn(value);
  } catch (const ContractError&) {
    bad_value(key, value);
  }
}

std::map<MutationKind, double> parse_weights(std::string_view value) {
  std::map<MutationKind, double> out;
  while (!value.empty()) {
    const auto comma = value.find(',');
    const std::string_view item = trim(value.substr(0, comma));
    value = comma == std::string_view::npos ? std::string_view{} : value.substr(comma + 1);
    const auto colon = item.find(':');
    const std::string_view name = colon == std::string_view::npos ? item : item.substr(0, colon);
    const double w = colon == std::string_view::npos
                         ? 1.0
                         : parse_double("weights", trim(item.substr(colon + 1)));
    out[parse_named("weights", trim(name), parse_mutation_kind)] = w;
  }
  double total = 0.0;
  for (const auto& [k, w] : out) total += w;
  if (!(total > 0.0)) bad_value("weights", "all zero");
  for (auto& [k, w] : out) w /= total;
  return out;
}

}  // namespace

// ---- config -----------------------------------------------------------------

const std::vector<Config::Key>& Config::keys() {
  static const std::vector<Key> k = {
      {"seed", "master seed"},
      {"jobs", "worker threads (results do not depend on it)"},
      {"iset", "instruction set: set1 or set2"},
      {"step_budget", "maximum instructions per execution"},
      {"progeny_cap", "maximum progeny (and products) per execution"},
      {"nest_depth", "maximum product nesting level"},
      {"runs", "independent runs per experiment"},
      {"cap", "iteration cap per run"},
      {"length", "tape length in codons"},
      {"target", "exp1 predicate: exec or repro"},
      {"fresh", "exp1: draw a fresh random tape each iteration"},
      {"kappa", "operators applied per unit fitness change"},
      {"alpha", "Renyi order for entropy reports"},
      {"maximize", "accept perturbations that do not lower fitness"},
      {"weights", "mutation menu as kind:weight pairs, normalised"},
      {"max_applied", "upper bound on operators applied per step"},
      {"min_length", "shortest tape a perturbation may produce"},
      {"max_length", "longest tape a perturbation may produce"},
      {"metric", "levenshtein, damerau, hamming or jaro-winkler"},
      {"eps", "neighbourhood radius"},
      {"fitness", "renyi2, executability or reproductivity"},
      {"population", "population size for evolve"},
      {"generations", "generations for evolve"},
  };
  return k;
}

void Config::set(std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "seed") seed = parse_uint<std::uint64_t>(key, value);
  else if (key == "jobs") jobs = parse_uint<std::size_t>(key, value);
  else if (key == "iset") iset = parse_named(key, value, parse_instruction_set);
  else if (key == "step_budget") limits.step_budget = parse_uint<std::size_t>(key, value);
  else if (key == "progeny_cap") limits.progeny_cap = parse_uint<std::size_t>(key, value);
  else if (key == "nest_depth") limits.nest_depth = parse_uint<std::size_t>(key, value);
  else if (key == "runs") runs = parse_uint<std::size_t>(key, value);
  else if (key == "cap") cap = parse_uint<std::size_t>(key, value);
  else if (key == "length") length = parse_uint<std::size_t>(key, value);
  else if (key == "target") target = parse_named(key, value, parse_exp1_target);
  else if (key == "fresh") fresh = parse_bool(key, value);
  else if (key == "kappa") kappa = parse_double(key, value);
  else if (key == "alpha") alpha = parse_double(key, value);
  else if (key == "maximize") maximize = parse_bool(key, value);
  else if (key == "weights") policy.weights = parse_weights(value);
  else if (key == "max_applied") policy.max_applied = parse_uint<std::size_t>(key, value);
  else if (key == "min_length") policy.length_bounds.min = parse_uint<std::size_t>(key, value);
  else if (key == "max_length") policy.length_bounds.max = parse_uint<std::size_t>(key, value);
  else if (key == "metric") metric = parse_named(key, value, parse_metric);
  else if (key == "eps") eps = parse_double(key, value);
  else if (key == "fitness") fitness = std::string(value);
  else if (key == "population") population = parse_uint<std::size_t>(key, value);
  else if (key == "generations") generations = parse_uint<std::size_t>(key, value);
  else throw UsageError("unknown config key '" + std::string(key) + "'");
}

std::string Config::get(std::string_view key) const {
  if (key == "seed") return std::to_string(seed);
  if (key == "jobs") return std::to_string(jobs);
  if (key == "iset") return std::string(to_string(iset));
  if (key == "step_budget") return std::to_string(limits.step_budget);
  if (key == "progeny_cap") return std::to_string(limits.progeny_cap);
  if (key == "nest_depth") return std::to_string(limits.nest_depth);
  if (key == "runs") return std::to_string(runs);
  if (key == "cap") return std::to_string(cap);
  if (key == "length") return std::to_string(length);
  if (key == "target") return std::string(to_string(target));
  if (key == "fresh") return fresh ? "true" : "false";
  if (key == "kappa") return fmt_double(kappa);
  if (key == "alpha") return fmt_double(alpha);
  if (key == "maximize") return maximize ? "true" : "false";
  if (key == "weights") {
    std::string s;
    for (const auto& [k, w] : policy.weights) {
      if (!s.empty()) s += ',';
      s += std::string(to_string(k)) + ':' + fmt_double(w);
    }
    return s;
  }
  if (key == "max_applied") return std::to_string(policy.max_applied);
  if (key == "min_length") return std::to_string(policy.length_bounds.min);
  if (key == "max_length") return std::to_string(policy.length_bounds.max);
  if (key == "metric") return std::string(to_string(metric));
  if (key == "eps") return fmt_double(eps);
  if (key == "fitness") return fitness;
  if (key == "population") return std::to_string(population);
  if (key == "generations") return std::to_string(generations);
  throw UsageError("unknown config key '" + std::string(key) + "'");
}

void Config::load(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos)
      throw UsageError("config line " + std::to_string(lineno) + ": expected key=value");
    set(trim(s.substr(0, eq)), s.substr(eq + 1));
  }
}

void Config::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  load(in);
}

Exp1Config Config::exp1() const {
  Exp1Config c;
  c.iset = iset;
  c.runs = runs;
  c.iteration_cap = cap;
  c.tape_length = length;
  c.target = target;
  c.limits = limits;
  c.seed = seed;
  c.fresh = fresh;
  c.policy = policy;
  c.jobs = jobs;
  return c;
}

Exp2Config Config::exp2() const {
  Exp2Config c;
  c.iset = iset;
  c.runs = runs;
  c.iteration_cap = cap;
  c.progeny_cap = limits.progeny_cap;
  c.alpha = alpha;
  c.kappa = kappa;
  c.tape_length = length;
  c.seed = seed;
  c.maximize = maximize;
  c.limits = limits;
  c.policy = policy;
  c.jobs = jobs;
  return c;
}

Tape read_tape_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read tape file '" + path + "'");
  std::string text, line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    text += line.substr(0, hash);
    text += '\n';
  }
  return parse_tape(text);
}

// ---- dispatch -----------------------------------------------------------------

namespace {

// Flags that mirror config keys, collected per subcommand.
struct KeyFlags {
  std::map<std::string, std::string> values;
  std::vector<std::pair<std::string, CLI::Option*>> options;

  void add(CLI::App* app, std::initializer_list<std::string_view> keys, const Config& defaults) {
    for (std::string_view key : keys) {
      const auto it = std::find_if(Config::keys().begin(), Config::keys().end(),
                                   [&](const Config::Key& k) { return k.name == key; });
      const std::string name(key);
      std::string help = std::string(it->help) + " (default: " + defaults.get(key) + ")";
      CLI::Option* opt = app->add_option("--" + name, values[name], help);
      if (key == "fresh" || key == "maximize") opt->expected(0, 1);
      options.emplace_back(name, opt);
    }
  }

  void apply(Config& cfg) const {
    for (const auto& [name, opt] : options)
      if (opt->count() > 0) cfg.set(name, values.at(name));
  }
};

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw std::runtime_error("cannot write '" + path + "'");
      stream_ = file_.get();
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

json run_report(const Tape& tape, const Config& cfg, bool nested, ExecutionOutcome& outcome) {
  outcome = nested ? execute_nested(tape, cfg.iset, cfg.limits) : execute(tape, cfg.iset, cfg.limits);
  json j;
  j["iset"] = to_string(cfg.iset);
  j["length"] = tape.size();
  j["executable"] = is_executable(tape, cfg.iset, cfg.limits);
  j["reproductive"] = is_reproductive(tape, cfg.iset, cfg.limits);
  j["halt"] = to_string(outcome.state.halt_reason);
  j["steps"] = outcome.state.steps;
  j["progeny"] = outcome.progeny.size();
  j["products"] = outcome.products.size();
  j["self_modified"] = outcome.self_modified;
  j["periodic"] = outcome.cycle.has_value();
  j["period"] = outcome.cycle ? outcome.cycle->period : 0;
  j["final_tape"] = render_tape(outcome.final_tape);
  j["entropy"] = json::parse(system_entropy(outcome, cfg.alpha).to_json());
  return j;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config defaults;
  CLI::App app{"codon tape simulator", "codon"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_path;
  app.add_option("--config", config_path, "key=value file with defaults");
  app.add_option("--out", out_path, "write the main output here instead of stdout");
  KeyFlags global;
  global.add(&app, {"seed", "jobs"}, defaults);

  auto* gen = app.add_subcommand("gen", "print a random tape");
  KeyFlags gen_flags;
  gen_flags.add(gen, {"length"}, defaults);

  auto* run = app.add_subcommand("run", "execute a tape and print a JSON report");
  std::string tape_path, trace_path;
  bool nested = false;
  run->add_option("--tape", tape_path, "tape file")->required();
  run->add_option("--trace", trace_path, "write the execution trace as CSV");
  run->add_flag("--nested", nested, "also execute product code");
  KeyFlags run_flags;
  run_flags.add(run, {"iset", "step_budget", "progeny_cap", "nest_depth", "alpha"}, defaults);

  auto* exp1 = app.add_subcommand("exp1", "iterations until a random tape becomes executable or reproductive");
  std::string summary_path;
  exp1->add_option("--summary", summary_path, "write the JSON summary here");
  KeyFlags exp1_flags;
  exp1_flags.add(exp1,
                 {"iset", "target", "runs", "cap", "length", "fresh", "step_budget",
                  "progeny_cap", "nest_depth", "weights", "max_applied", "min_length",
                  "max_length"},
                 defaults);

  auto* exp2 = app.add_subcommand("exp2", "reproductions against total entropy");
  exp2->add_option("--summary", summary_path, "write the JSON summary here");
  KeyFlags exp2_flags;
  exp2_flags.add(exp2,
                 {"iset", "runs", "cap", "length", "kappa", "alpha", "maximize", "step_budget",
                  "progeny_cap", "nest_depth", "weights", "max_applied", "min_length",
                  "max_length"},
                 defaults);

  auto* analyze = app.add_subcommand("analyze", "code analysis");
  analyze->require_subcommand(1);
  analyze->fallthrough();
  auto* dist = analyze->add_subcommand("dist", "pairwise distance matrix as CSV");
  std::vector<std::string> dist_files;
  bool polymorphic = false;
  dist->add_option("files", dist_files, "tape files")->required();
  dist->add_flag("--polymorphic", polymorphic, "list distinct pairs closer than eps instead");
  KeyFlags dist_flags;
  dist_flags.add(dist, {"metric", "eps"}, defaults);
  auto* ent = analyze->add_subcommand("entropy", "entropy ledger of one execution as JSON");
  std::string ent_tape;
  ent->add_option("--tape", ent_tape, "tape file")->required();
  KeyFlags ent_flags;
  ent_flags.add(ent, {"iset", "alpha", "step_budget", "progeny_cap", "nest_depth"}, defaults);

  auto* virus = app.add_subcommand("virus", "splice a virus into a host and classify it");
  std::string host_path, virus_path, payload_path;
  std::size_t site = 0;
  virus->add_option("--host", host_path, "host tape file")->required();
  virus->add_option("--virus", virus_path, "virus tape file")->required();
  virus->add_option("--site", site, "insertion index into the host (default: 0)");
  virus->add_option("--payload", payload_path, "payload tape file, must lie inside the virus");
  KeyFlags virus_flags;
  virus_flags.add(virus, {"iset", "fitness", "step_budget", "progeny_cap", "nest_depth"}, defaults);

  auto* evo = app.add_subcommand("evolve", "evolve a random population and print fitness history as CSV");
  KeyFlags evo_flags;
  evo_flags.add(evo,
                {"iset", "fitness", "population", "generations", "length", "kappa", "maximize",
                 "weights", "max_applied", "min_length", "max_length", "step_budget",
                 "progeny_cap", "nest_depth"},
                defaults);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    Config cfg;
    if (!config_path.empty()) cfg.load_file(config_path);
    global.apply(cfg);

    if (gen->parsed()) {
      gen_flags.apply(cfg);
      Output o(out_path, out);
      *o << render_tape(random_tape(cfg.length, cfg.seed)) << '\n';
    } else if (run->parsed()) {
      run_flags.apply(cfg);
      cfg.limits.validate();
      const Tape tape = read_tape_file(tape_path);
      ExecutionOutcome outcome;
      const json report = run_report(tape, cfg, nested, outcome);
      if (!trace_path.empty()) {
        Output t(trace_path, out);
        write_trace_csv(*t, outcome.trace);
      }
      Output o(out_path, out);
      *o << report.dump(2) << '\n';
    } else if (exp1->parsed()) {
      exp1_flags.apply(cfg);
      const Exp1Config c = cfg.exp1();
      const Exp1Stats stats = run_experiment1(c);
      {
        Output o(out_path, out);
        write_exp1_csv(*o, stats);
      }
      if (!summary_path.empty() || !out_path.empty()) {
        Output s(summary_path, out);
        *s << exp1_summary_json(c, stats) << '\n';
      }
    } else if (exp2->parsed()) {
      exp2_flags.apply(cfg);
      const Exp2Config c = cfg.exp2();
      const Exp2Stats stats = run_experiment2(c);
      {
        Output o(out_path, out);
        write_exp2_csv(*o, stats);
      }
      if (!summary_path.empty() || !out_path.empty()) {
        Output s(summary_path, out);
        *s << exp2_summary_json(c, stats) << '\n';
      }
    } else if (dist->parsed()) {
      dist_flags.apply(cfg);
      std::vector<Tape> tapes;
      for (const auto& f : dist_files) tapes.push_back(read_tape_file(f));
      Output o(out_path, out);
      if (polymorphic) {
        require(cfg.eps > 0.0, "eps must be > 0");
        *o << "a,b,distance\n";
        for (std::size_t i = 0; i < tapes.size(); ++i)
          for (std::size_t j = i + 1; j < tapes.size(); ++j)
            if (is_polymorphic(tapes[i], tapes[j], cfg.eps, cfg.metric))
              *o << dist_files[i] << ',' << dist_files[j] << ','
                 << fmt_double(distance(tapes[i], tapes[j], cfg.metric)) << '\n';
      } else {
        write_distance_matrix_csv(*o, dist_files, tapes, cfg.metric);
      }
    } else if (ent->parsed()) {
      ent_flags.apply(cfg);
      cfg.limits.validate();
      const Tape tape = read_tape_file(ent_tape);
      Output o(out_path, out);
      *o << system_entropy(execute(tape, cfg.iset, cfg.limits), cfg.alpha).to_json() << '\n';
    } else if (virus->parsed()) {
      virus_flags.apply(cfg);
      cfg.limits.validate();
      const Tape host = read_tape_file(host_path);
      const Tape v = read_tape_file(virus_path);
      std::optional<Tape> payload;
      if (!payload_path.empty()) payload = read_tape_file(payload_path);
      const FitnessFunction f = fitness_by_name(cfg.fitness, cfg.iset, cfg.limits);
      const InfectionRecord rec = inject(host, v, site, payload);
      const ViralClassification cls = classify(rec, f);
      json j;
      j["delta_f"] = cls.delta_f;
      j["kind"] = to_string(cls.kind);
      j["nu_executable"] = nu_executable(v, cfg.iset, cfg.limits);
      j["nu_reproductive"] = nu_reproductive(v, cfg.iset, cfg.limits);
      j["disjoint"] = rec.disjoint;
      if (payload) j["carries_payload"] = carries_payload(rec, cfg.iset, cfg.limits);
      Output o(out_path, out);
      *o << j.dump(2) << '\n';
    } else if (evo->parsed()) {
      evo_flags.apply(cfg);
      require(cfg.population >= 1, "population must be >= 1");
      PerturbationPolicy policy = cfg.policy;
      policy.kappa = cfg.kappa;
      Population pop;
      Rng rng(derive_seed(cfg.seed, {0}));
      for (std::size_t i = 0; i < cfg.population; ++i) pop.members.push_back(random_tape(cfg.length, rng()));
      const EvolveResult res = evolve(pop, fitness_by_name(cfg.fitness, cfg.iset, cfg.limits), policy,
                                      cfg.generations, cfg.seed, {true, cfg.maximize, cfg.jobs});
      Output o(out_path, out);
      write_history_csv(*o, res.history);
    }
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const ContractError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace codon
