#include "codon/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "codon/entropy.hpp"
#include "codon/parallel.hpp"
#include "codon/rng.hpp"

namespace codon {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

nlohmann::ordered_json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

// ---- statistics -----------------------------------------------------------

Summary summarize(const std::vector<double>& values) {
  require(!values.empty(), "summarize: values must be non-empty");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size()))};
}

double pearson_r(const std::vector<double>& xs, const std::vector<double>& ys) {
  require(xs.size() == ys.size(), "pearson_r: columns differ in length");
  require(xs.size() >= 2, "pearson_r: need at least two samples");
  const double mx = summarize(xs).mean, my = summarize(ys).mean;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw UndefinedCorrelation("pearson_r: constant column");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double quantile(std::vector<double> values, double q) {
  require(!values.empty(), "quantile: values must be non-empty");
  require(q >= 0.0 && q <= 1.0, "quantile: q must be in [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

Interval bootstrap_pearson_ci(const std::vector<double>& xs, const std::vector<double>& ys,
                              std::size_t resamples, double level, std::uint64_t seed) {
  require(resamples >= 10, "bootstrap: need at least 10 resamples");
  require(level > 0.0 && level < 1.0, "bootstrap: level must be in (0, 1)");
  (void)pearson_r(xs, ys);  // validates the input
  Rng rng(seed);
  std::vector<double> rs;
  rs.reserve(resamples);
  std::vector<double> bx(xs.size()), by(ys.size());
  std::size_t attempts = 0;
  while (rs.size() < resamples) {
    require(++attempts <= resamples * 100, "bootstrap: resamples are degenerate");
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const std::size_t k = uniform_index(rng, xs.size());
      bx[i] = xs[k];
      by[i] = ys[k];
    }
    try {
      rs.push_back(pearson_r(bx, by));
    } catch (const UndefinedCorrelation&) {
    }
  }
  const double tail = (1.0 - level) / 2.0;
  return {quantile(rs, tail), quantile(rs, 1.0 - tail)};
}

// ---- experiment 1 -----------------------------------------------------------

std::string_view to_string(Exp1Target t) noexcept {
  return t == Exp1Target::Executable ? "exec" : "repro";
}

Exp1Target parse_exp1_target(std::string_view name) {
  if (name == "exec" || name == "executable") return Exp1Target::Executable;
  if (name == "repro" || name == "reproductive") return Exp1Target::Reproductive;
  throw ContractError("target must be 'exec' or 'repro', got '" + std::string(name) + "'");
}

void Exp1Config::validate() const {
  require(runs >= 1, "exp1: runs must be >= 1");
  require(iteration_cap >= 1, "exp1: iteration_cap must be >= 1");
  limits.validate();
  policy.validate();
}

Exp1Run run_experiment1_once(const Exp1Config& config, std::size_t run) {
  Rng rng(derive_seed(config.seed, {run}));
  Tape tape = random_tape(config.tape_length, rng());
  const auto satisfied = [&](const Tape& t) {
    return config.target == Exp1Target::Executable ? is_executable(t, config.iset, config.limits)
                                                   : is_reproductive(t, config.iset, config.limits);
  };
  for (std::size_t it = 0;; ++it) {
    if (satisfied(tape)) return {run, true, it};
    if (it >= config.iteration_cap) return {run, false, config.iteration_cap};
    if (config.fresh) {
      tape = random_tape(config.tape_length, rng());
    } else {
      // kappa = 0 with no fitness signal: exactly one operator per iteration.
      tape = passive_step_from(tape, 0.0, 0.0, config.policy, rng).tape;
    }
  }
}

Exp1Stats run_experiment1(const Exp1Config& config) {
  config.validate();
  Exp1Stats stats;
  stats.runs.resize(config.runs);
  parallel_for(config.runs, config.jobs,
               [&](std::size_t i) { stats.runs[i] = run_experiment1_once(config, i); });

  std::vector<double> iterations;
  for (const auto& r : stats.runs) {
    if (r.found) {
      ++stats.found;
      iterations.push_back(static_cast<double>(r.iterations));
    } else {
      ++stats.capped;
    }
  }
  if (!iterations.empty()) {
    const Summary s = summarize(iterations);
    stats.mean_iterations = s.mean;
    stats.std_iterations = s.std;
    stats.p50 = quantile(iterations, 0.50);
    stats.p90 = quantile(iterations, 0.90);
    stats.p99 = quantile(iterations, 0.99);
  }
  return stats;
}

void write_exp1_csv(std::ostream& out, const Exp1Stats& stats) {
  out << "run,found,iterations\n";
  for (const auto& r : stats.runs)
    out << r.run << ',' << (r.found ? 1 : 0) << ',' << r.iterations << '\n';
}

std::string exp1_summary_json(const Exp1Config& config, const Exp1Stats& stats) {
  nlohmann::ordered_json j;
  j["iset"] = to_string(config.iset);
  j["target"] = to_string(config.target);
  j["runs"] = config.runs;
  j["found"] = stats.found;
  j["capped"] = stats.capped;
  j["mean_iterations"] = stats.mean_iterations;
  j["std_iterations"] = stats.std_iterations;
  j["p50"] = stats.p50;
  j["p90"] = stats.p90;
  j["p99"] = stats.p99;
  return j.dump(2);
}

// ---- experiment 2 -----------------------------------------------------------

void Exp2Config::validate() const {
  require(runs >= 1, "exp2: runs must be >= 1");
  require(iteration_cap >= 1, "exp2: iteration_cap must be >= 1");
  require(progeny_cap >= 1, "exp2: progeny_cap must be >= 1");
  require(alpha >= 0.0 && alpha != 1.0, "exp2: alpha must be >= 0 and != 1");
  require(kappa >= 0.0, "exp2: kappa must be >= 0");
  limits.validate();
  policy.validate();
}

Exp2Sample run_experiment2_once(const Exp2Config& config, std::size_t run) {
  Limits limits = config.limits;
  limits.progeny_cap = config.progeny_cap;
  PerturbationPolicy policy = config.policy;
  policy.kappa = config.kappa;
  const auto fitness = [](const Tape& t) { return code_entropy(t, 2.0); };
  const double sign = config.maximize ? 1.0 : -1.0;

  Rng rng(derive_seed(config.seed, {run}));
  Tape tape = random_tape(config.tape_length, rng());
  if (config.initial) tape = *config.initial;
  double current = fitness(tape);
  double previous = current;

  std::vector<Tape> pool;
  ExecutionOutcome last;
  Exp2Sample sample;
  sample.run = run;
  for (;;) {
    last = execute(tape, config.iset, limits);
    ++sample.iterations;
    for (auto& p : last.progeny) {
      if (pool.size() >= config.progeny_cap) break;
      pool.push_back(std::move(p));
    }
    if (pool.size() >= config.progeny_cap || sample.iterations >= config.iteration_cap) break;

    StepResult step = passive_step_from(tape, current, previous, policy, rng);
    const double candidate = fitness(step.tape);
    previous = current;
    if (sign * candidate >= sign * current) {
      tape = std::move(step.tape);
      current = candidate;
    }
  }

  sample.reproductions = pool.size();
  sample.final_halt = last.state.halt_reason;
  sample.self_modified = last.self_modified;
  sample.cycle = last.cycle;
  last.progeny = std::move(pool);
  sample.total_entropy = system_entropy(last, config.alpha).total;
  return sample;
}

Exp2Stats run_experiment2(const Exp2Config& config) {
  config.validate();
  Exp2Stats stats;
  stats.samples.resize(config.runs);
  parallel_for(config.runs, config.jobs,
               [&](std::size_t i) { stats.samples[i] = run_experiment2_once(config, i); });

  std::vector<double> xs, ys;
  std::size_t periodic = 0;
  for (const auto& s : stats.samples) {
    xs.push_back(static_cast<double>(s.reproductions));
    ys.push_back(s.total_entropy);
    if (s.final_halt == HaltReason::StepBudget) {
      ++stats.non_terminating;
      periodic += s.cycle.has_value();
    }
  }
  stats.reproductions = summarize(xs);
  stats.entropy = summarize(ys);
  if (xs.size() >= 2) {
    try {
      stats.r = pearson_r(xs, ys);
    } catch (const UndefinedCorrelation&) {
    }
  }
  if (stats.non_terminating > 0)
    stats.periodic_fraction =
        static_cast<double>(periodic) / static_cast<double>(stats.non_terminating);
  return stats;
}

void write_exp2_csv(std::ostream& out, const Exp2Stats& stats) {
  out << "run,reproductions,total_entropy,periodic,period\n";
  for (const auto& s : stats.samples) {
    out << s.run << ',' << s.reproductions << ',' << fmt_double(s.total_entropy) << ','
        << (s.cycle ? 1 : 0) << ',' << (s.cycle ? s.cycle->period : 0) << '\n';
  }
}

std::string exp2_summary_json(const Exp2Config& config, const Exp2Stats& stats) {
  nlohmann::ordered_json j;
  j["iset"] = to_string(config.iset);
  j["total_simulations"] = config.runs;
  j["mean_repro"] = stats.reproductions.mean;
  j["std_repro"] = stats.reproductions.std;
  j["mean_entropy"] = stats.entropy.mean;
  j["std_entropy"] = stats.entropy.std;
  j["r"] = optional_number(stats.r);
  j["non_terminating"] = stats.non_terminating;
  j["periodic_fraction"] = optional_number(stats.periodic_fraction);
  return j.dump(2);
}

}  // namespace codon
