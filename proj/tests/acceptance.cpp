// Acceptance suite: one PASS/FAIL line per criterion.
//
// Exit status is 0 when every failing line is listed in kKnownRed, 1 otherwise.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "codon/cli.hpp"
#include "codon/code_algebra.hpp"
#include "codon/entropy.hpp"
#include "codon/experiments.hpp"
#include "codon/rng.hpp"
#include "codon/virology.hpp"
#include "codon/vm.hpp"
#include "oracles.hpp"

using namespace codon;

namespace {

// ---- pinned tolerances and scales ---------------------------------------------

constexpr double kRenyiTol = 1e-9;
constexpr double kMonotoneSlack = 1e-12;
constexpr double kLedgerResidualTol = 1e-9;
constexpr double kJaroTol = 1e-12;

constexpr std::uint64_t kSeed = 1;

constexpr std::size_t kExp1Runs = 10'000;
constexpr std::size_t kExp1Length = 50;
constexpr std::size_t kExp1Cap = 1'000'000;
constexpr double kReferenceSet1ExecMean = 184.083;
constexpr double kExp1Factor = 5.0;

constexpr std::size_t kExp2Runs = 2'000;
constexpr std::size_t kExp2IterationCap = 100;
constexpr std::size_t kExp2ProgenyCap = 50;
constexpr double kExp2Alpha = 2.0;
constexpr double kExp2Kappa = 10.0;
constexpr double kMinR = 0.6;
constexpr std::size_t kBootstrapResamples = 2'000;
constexpr double kCiLevel = 0.95;

constexpr std::size_t kPeriodicSamples = 1'000;

// Criteria that fail under the documented configuration. Their lines still
// print FAIL; they only stop turning the exit status red.
const std::set<std::string> kKnownRed = {"5b"};

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// ---- 1 ------------------------------------------------------------------------

Verdict minimal_executability() {
  const auto s1 = InstructionSet::Set1;
  const Tape minimal = parse_tape("AAA AUA");
  const Tape copier = parse_tape("AAA AAG AUA");
  const bool a = is_executable(minimal, s1);
  const bool b = !is_reproductive(minimal, s1);
  const bool c = is_reproductive(copier, s1);
  return {a && b && c, std::string("AAA AUA executable=") + (a ? "true" : "false") +
                           " reproductive=" + (b ? "false" : "true") +
                           "; AAA AAG AUA reproductive=" + (c ? "true" : "false")};
}

// ---- 2 ------------------------------------------------------------------------

Verdict renyi_suite() {
  double worst_uniform = 0.0;
  for (std::size_t n : {1, 2, 3, 4, 7, 16, 64, 100, 1000}) {
    const Distribution d(std::vector<double>(n, 1.0 / double(n)));
    for (double a : {0.5, 2.0, 3.0})
      worst_uniform = std::max(worst_uniform, std::abs(renyi_entropy(d, a) - std::log2(double(n))));
  }

  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double alphas[] = {0.0, 0.25, 0.5, 0.75, 0.99, 1.01, 1.5, 2.0, 3.0, 5.0, 10.0, 50.0};
  std::size_t violations = 0;
  for (int k = 0; k < 1000; ++k) {
    std::vector<double> w(1 + static_cast<std::size_t>(k % 50));
    double total = 0.0;
    for (double& x : w) total += (x = std::pow(u(rng), 3.0));
    for (double& x : w) x /= total;
    const Distribution d(w);
    double prev = renyi_entropy(d, alphas[0]);
    for (double a : alphas) {
      const double h = renyi_entropy(d, a);
      if (h > prev + kMonotoneSlack) ++violations;
      prev = h;
    }
  }

  const double two_point =
      std::abs(renyi_entropy(Distribution({0.75, 0.25}), 2.0) + std::log2(0.625));
  const bool pass = worst_uniform <= kRenyiTol && violations == 0 && two_point <= kRenyiTol;
  return {pass, "uniform max err " + fmt("%.2e", worst_uniform) + ", monotonicity violations " +
                    std::to_string(violations) + "/1000, (0.75,0.25) err " + fmt("%.2e", two_point)};
}

// ---- 3 ------------------------------------------------------------------------

Verdict progeny_ledger() {
  const Tape replicator = parse_tape("AAA CAC AAG CUU");
  const double per_copy = code_entropy(replicator, 2.0);
  std::vector<double> xs, ys;
  for (std::size_t n = 1; n <= 50; ++n) {
    Limits lim;
    lim.progeny_cap = n;
    const auto out = execute(replicator, InstructionSet::Set1, lim);
    const auto r = system_entropy(out, 2.0);
    if (r.s_progeny.size() != n) return {false, "progeny count differs from cap at N=" + std::to_string(n)};
    xs.push_back(double(n));
    ys.push_back(r.total - (r.s_code + r.s_machine));
  }
  const double mx = summarize(xs).mean, my = summarize(ys).mean;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxy / sxx, intercept = my - slope * mx;
  double residual = 0.0, exact = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    residual = std::max(residual, std::abs(ys[i] - (intercept + slope * xs[i])));
    exact = std::max(exact, std::abs(ys[i] - xs[i] * per_copy));
  }
  const bool pass = residual < kLedgerResidualTol && exact < kLedgerResidualTol;
  return {pass, "slope " + fmt("%.12g", slope) + " vs per-copy " + fmt("%.12g", per_copy) +
                    ", max fit residual " + fmt("%.2e", residual) + ", max |y - N h| " +
                    fmt("%.2e", exact)};
}

// ---- 4 ------------------------------------------------------------------------

Verdict metric_oracles() {
  const std::vector<Codon> sub = {Codon::parse("AAA"), Codon::parse("CCC"), Codon::parse("GGG"),
                                  Codon::parse("AUA")};
  std::size_t pairs = 0, mismatches = 0;
  auto compare = [&](const std::vector<int>& a, const std::vector<std::vector<int>>& targets,
                     int max_len) {
    const auto lev = oracle::bfs_distances(a, oracle::Moves::Levenshtein, max_len);
    const auto dam = oracle::bfs_distances(a, oracle::Moves::Damerau, max_len);
    const auto ham = oracle::bfs_distances(a, oracle::Moves::Hamming, max_len);
    const Tape ta = oracle::to_tape(a, sub);
    for (const auto& b : targets) {
      const Tape tb = oracle::to_tape(b, sub);
      const std::size_t id = oracle::encode(b);
      ++pairs;
      bool ok = levenshtein(ta.span(), tb.span()) == std::size_t(lev[id]) &&
                damerau_levenshtein(ta.span(), tb.span()) == std::size_t(dam[id]) &&
                std::abs(jaro_winkler_similarity(ta.span(), tb.span()) -
                         oracle::jaro_winkler(a, b)) <= kJaroTol;
      if (a.size() == b.size()) ok = ok && hamming(ta.span(), tb.span()) == std::size_t(ham[id]);
      if (!ok) ++mismatches;
    }
  };

  // Every pair with both lengths <= 4.
  const auto short_tapes = oracle::all_sequences(4, 4);
  for (const auto& a : short_tapes) compare(a, short_tapes, 5);

  // Longer sources against every tape of length <= 8.
  const auto all8 = oracle::all_sequences(4, 8);
  std::mt19937_64 rng(kSeed);
  for (int len : {8, 8, 7, 6, 5}) {
    std::vector<int> a(static_cast<std::size_t>(len));
    for (int& x : a) x = static_cast<int>(rng() % 4);
    compare(a, all8, 9);
  }

  // Axioms on random triples over the full codon alphabet.
  Rng r(kSeed);
  std::size_t axiom_failures = 0;
  auto rand_tape = [&](std::size_t len) { return random_tape(len, r()); };
  constexpr MetricKind kinds[] = {MetricKind::Levenshtein, MetricKind::DamerauLevenshtein,
                                  MetricKind::Hamming, MetricKind::JaroWinklerDissimilarity};
  for (int k = 0; k < 10'000; ++k) {
    const bool same = k % 2 == 0;
    const std::size_t la = uniform_index(r, 11);
    const Tape a = rand_tape(la);
    // Small alphabets make coincidences common; mix in near copies.
    const Tape b = k % 3 == 0 ? a : rand_tape(same ? la : uniform_index(r, 11));
    const Tape c = rand_tape(same ? la : uniform_index(r, 11));
    for (MetricKind m : kinds) {
      if (m == MetricKind::Hamming && !same) continue;
      const double ab = distance(a, b, m), ba = distance(b, a, m);
      bool ok = ab >= 0.0 && ab == ba && distance(a, a, m) == 0.0;
      if (m != MetricKind::JaroWinklerDissimilarity) {
        ok = ok && ((ab == 0.0) == (a == b));
        ok = ok && distance(a, c, m) <= ab + distance(b, c, m);
      }
      if (!ok) ++axiom_failures;
    }
  }

  const bool pass = mismatches == 0 && pairs >= 10'000 && axiom_failures == 0;
  return {pass, std::to_string(pairs) + " oracle pairs, " + std::to_string(mismatches) +
                    " mismatches; 10000 triples, " + std::to_string(axiom_failures) +
                    " axiom failures (no triangle check for Jaro-Winkler)"};
}

// ---- 5 ------------------------------------------------------------------------

struct Exp1Table {
  Exp1Stats set1_exec, set1_repro, set2_exec, set2_repro;
};

const Exp1Table& exp1_table() {
  static const Exp1Table table = [] {
    auto cell = [](InstructionSet iset, Exp1Target target) {
      Exp1Config c;
      c.iset = iset;
      c.target = target;
      c.runs = kExp1Runs;
      c.tape_length = kExp1Length;
      c.iteration_cap = kExp1Cap;
      c.seed = kSeed;
      return run_experiment1(c);
    };
    return Exp1Table{cell(InstructionSet::Set1, Exp1Target::Executable),
                     cell(InstructionSet::Set1, Exp1Target::Reproductive),
                     cell(InstructionSet::Set2, Exp1Target::Executable),
                     cell(InstructionSet::Set2, Exp1Target::Reproductive)};
  }();
  return table;
}

std::string cell_text(const char* name, const Exp1Stats& s) {
  return std::string(name) + " " + fmt("%.2f", s.mean_iterations) + " (" +
         std::to_string(s.found) + "/" + std::to_string(s.runs.size()) + " found)";
}

Verdict exp1_ordering_within_set() {
  const auto& t = exp1_table();
  const bool pass = t.set1_exec.mean_iterations < t.set1_repro.mean_iterations &&
                    t.set2_exec.mean_iterations < t.set2_repro.mean_iterations;
  return {pass, cell_text("set1 exec", t.set1_exec) + " < " + cell_text("repro", t.set1_repro) +
                    "; " + cell_text("set2 exec", t.set2_exec) + " < " +
                    cell_text("repro", t.set2_repro)};
}

Verdict exp1_ordering_across_sets() {
  const auto& t = exp1_table();
  const bool exec = t.set1_exec.mean_iterations < t.set2_exec.mean_iterations;
  const bool repro = t.set1_repro.mean_iterations < t.set2_repro.mean_iterations;
  return {exec && repro,
          std::string("exec ") + fmt("%.2f", t.set1_exec.mean_iterations) + (exec ? " < " : " >= ") +
              fmt("%.2f", t.set2_exec.mean_iterations) + ", repro " +
              fmt("%.2f", t.set1_repro.mean_iterations) + (repro ? " < " : " >= ") +
              fmt("%.2f", t.set2_repro.mean_iterations)};
}

Verdict exp1_calibration() {
  const double m = exp1_table().set1_exec.mean_iterations;
  const bool pass = m >= kReferenceSet1ExecMean / kExp1Factor && m <= kReferenceSet1ExecMean * kExp1Factor;
  return {pass, "set1 exec mean " + fmt("%.2f", m) + " within [" +
                    fmt("%.2f", kReferenceSet1ExecMean / kExp1Factor) + ", " +
                    fmt("%.2f", kReferenceSet1ExecMean * kExp1Factor) + "]"};
}

Verdict exp1_capped_exclusion() {
  const auto& t = exp1_table();
  bool pass = true;
  std::string detail;
  for (const auto* s : {&t.set1_exec, &t.set1_repro, &t.set2_exec, &t.set2_repro}) {
    std::vector<double> found;
    std::size_t capped = 0;
    for (const auto& r : s->runs) {
      if (r.found) found.push_back(double(r.iterations));
      else ++capped;
    }
    const double mean = found.empty() ? 0.0 : summarize(found).mean;
    pass = pass && capped == s->capped && found.size() == s->found &&
           s->found + s->capped == s->runs.size() && std::abs(mean - s->mean_iterations) < 1e-9;
    detail += (detail.empty() ? "" : ", ") + std::string("capped ") + std::to_string(s->capped);
  }
  return {pass, "means over found runs only; " + detail +
                    " (set1 exec, set1 repro, set2 exec, set2 repro)"};
}

// ---- 6 ------------------------------------------------------------------------

Verdict exp2_correlation() {
  bool pass = true;
  std::string detail;
  for (InstructionSet iset : {InstructionSet::Set1, InstructionSet::Set2}) {
    Exp2Config c;
    c.iset = iset;
    c.runs = kExp2Runs;
    c.iteration_cap = kExp2IterationCap;
    c.progeny_cap = kExp2ProgenyCap;
    c.alpha = kExp2Alpha;
    c.kappa = kExp2Kappa;
    c.seed = kSeed;
    const Exp2Stats s = run_experiment2(c);
    std::vector<double> xs, ys;
    std::size_t zero = 0;
    for (const auto& x : s.samples) {
      xs.push_back(double(x.reproductions));
      ys.push_back(x.total_entropy);
      zero += x.reproductions == 0;
    }
    if (!s.r) return {false, std::string(to_string(iset)) + ": r undefined (constant column)"};
    const Interval ci = bootstrap_pearson_ci(xs, ys, kBootstrapResamples, kCiLevel, kSeed);
    const bool ok = *s.r >= kMinR && zero > 0 && (ci.lo > 0.0 || ci.hi < 0.0);
    pass = pass && ok;
    detail += (detail.empty() ? "" : "; ") + std::string(to_string(iset)) + " r " +
              fmt("%.4f", *s.r) + " CI [" + fmt("%.4f", ci.lo) + ", " + fmt("%.4f", ci.hi) +
              "] zero-repro " + std::to_string(zero);
  }
  return {pass, detail};
}

// ---- 7 ------------------------------------------------------------------------

Verdict asymptotic_periodicity() {
  std::size_t collected = 0, periodic = 0;
  std::uint64_t seed = kSeed;
  while (collected < kPeriodicSamples) {
    const auto out = execute(random_tape(kExp1Length, splitmix64(seed++)), InstructionSet::Set1);
    if (out.state.halt_reason != HaltReason::StepBudget || out.self_modified) continue;
    ++collected;
    periodic += out.cycle.has_value();
  }
  const auto loop = execute(parse_tape("AAA CAC GGG UUU CUU AUA"), InstructionSet::Set1);
  const bool exact = loop.cycle && loop.cycle->period == 4 && loop.cycle->start == 1;
  const double fraction = double(periodic) / double(collected);
  return {fraction == 1.0 && exact,
          "cycle fraction " + fmt("%.4f", fraction) + " over " + std::to_string(collected) +
              " budget-halted unmodified runs; constructed loop period " +
              (loop.cycle ? std::to_string(loop.cycle->period) : std::string("none")) +
              " (expected 4)"};
}

// ---- 8 ------------------------------------------------------------------------

Verdict virology_trichotomy() {
  const auto fitness = FitnessFunction::reproductivity(InstructionSet::Set1);
  const auto gain = inject(parse_tape("AAA AUA"), parse_tape("AAG"), 1);
  const auto none = inject(parse_tape("AAA AUA"), parse_tape("ACA CGC"), 1);
  const auto loss = inject(parse_tape("AAA AAG AUA"), parse_tape("AUA"), 1);
  const auto k1 = classify(gain, fitness).kind;
  const auto k2 = classify(none, fitness).kind;
  const auto k3 = classify(loss, fitness).kind;
  const bool kinds = k1 == ViralKind::Commensalistic && k2 == ViralKind::Symbiotic &&
                     k3 == ViralKind::Parasitic;
  bool round_trip = remove_infection(gain) == gain.host && remove_infection(none) == none.host &&
                    remove_infection(loss) == loss.host;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const Tape host = random_tape(s % 40, s);
    const auto rec = inject(host, random_tape(1 + s % 9, s + 1), host.empty() ? 0 : s % (host.size() + 1));
    round_trip = round_trip && remove_infection(rec) == host;
  }
  return {kinds && round_trip, std::string(to_string(k1)) + " / " + std::string(to_string(k2)) +
                                   " / " + std::string(to_string(k3)) + "; round trip " +
                                   (round_trip ? "exact" : "broken")};
}

// ---- 9 ------------------------------------------------------------------------

Verdict end_to_end_determinism() {
  auto run = [](std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = dispatch(args, out, err);
    return code == 0 ? out.str() : std::string("exit ") + std::to_string(code) + ": " + err.str();
  };
  std::size_t compared = 0, differing = 0;
  const std::vector<std::vector<std::string>> commands = {
      {"exp1", "--iset", "set1", "--target", "exec", "--runs", "400", "--cap", "100000", "--seed", "11"},
      {"exp1", "--iset", "set2", "--target", "repro", "--runs", "200", "--cap", "100000", "--seed", "11"},
      {"exp2", "--iset", "set1", "--runs", "300", "--cap", "100", "--seed", "7"},
      {"exp2", "--iset", "set2", "--runs", "300", "--cap", "100", "--seed", "7"},
  };
  for (const auto& base : commands) {
    const std::string reference = run(base);
    if (reference.rfind("run,", 0) != 0) return {false, "command failed: " + reference};
    for (const char* jobs : {"1", "4", "8"}) {
      auto args = base;
      args.insert(args.end(), {"--jobs", jobs});
      ++compared;
      differing += run(args) != reference;
    }
  }
  return {differing == 0, std::to_string(compared) + " repeated runs over --jobs 1/4/8, " +
                              std::to_string(differing) + " differ"};
}

// ---- 10 -----------------------------------------------------------------------

Verdict vm_oracle() {
  const std::vector<std::string> names = {"AAA", "AUA", "AAG", "CCC", "GGG"};
  std::size_t tapes = 0, mismatches = 0;
  for (const auto& seq : oracle::all_sequences(5, 5)) {
    std::vector<std::string> text;
    for (int x : seq) text.push_back(names[static_cast<std::size_t>(x)]);
    std::string joined;
    for (const auto& s : text) joined += s + " ";
    const Tape tape = parse_tape(joined);
    for (bool set2 : {false, true}) {
      const InstructionSet iset = set2 ? InstructionSet::Set2 : InstructionSet::Set1;
      const Limits lim;
      const auto ref = oracle::ref_execute(text, set2, lim.step_budget, lim.progeny_cap);
      const auto out = execute(tape, iset, lim);
      ++tapes;
      bool ok = ref.halt == to_string(out.state.halt_reason) && ref.steps == out.state.steps &&
                out.final_tape == tape && ref.progeny.size() == out.progeny.size();
      for (std::size_t i = 0; ok && i < out.trace.size(); ++i)
        ok = out.trace[i].position == ref.positions[i];
      for (std::size_t i = 0; ok && i < ref.progeny.size(); ++i) {
        std::string p;
        for (const auto& s : ref.progeny[i]) p += s + " ";
        ok = parse_tape(p) == out.progeny[i];
      }
      const bool ref_stop = ref.halt == "STOPPED";
      bool ref_self = false;
      for (const auto& p : ref.progeny) ref_self = ref_self || p == text;
      ok = ok && is_executable(tape, iset, lim) == ref_stop &&
           is_reproductive(tape, iset, lim) == (ref_stop && ref_self);
      if (!ok) ++mismatches;
    }
  }
  return {mismatches == 0, std::to_string(tapes) + " (tape, set) cases, " +
                               std::to_string(mismatches) + " mismatches"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* id;
    const char* title;
    std::function<Verdict()> check;
  };
  const std::vector<Criterion> criteria = {
      {"1", "minimal executability", minimal_executability},
      {"2", "Renyi entropy suite", renyi_suite},
      {"3", "progeny entropy ledger is linear in N", progeny_ledger},
      {"4", "distance oracles and metric axioms", metric_oracles},
      {"5a", "exp1: executable before reproductive in each set", exp1_ordering_within_set},
      {"5b", "exp1: set1 means below set2 means per target", exp1_ordering_across_sets},
      {"5c", "exp1: set1 executable mean within 5x of reference", exp1_calibration},
      {"5d", "exp1: capped runs excluded from means", exp1_capped_exclusion},
      {"6", "exp2: reproductions correlate with total entropy", exp2_correlation},
      {"7", "asymptotic periodicity", asymptotic_periodicity},
      {"8", "virology trichotomy and splice round trip", virology_trichotomy},
      {"9", "end-to-end determinism across --jobs", end_to_end_determinism},
      {"10", "VM matches reference interpreter", vm_oracle},
  };

  std::size_t passed = 0;
  std::vector<std::string> unexpected, expected;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s  %-3s %s: %s [%.2f s]\n", v.pass ? "PASS" : "FAIL", c.id, c.title,
                v.detail.c_str(), secs);
    std::fflush(stdout);
    if (v.pass) ++passed;
    else (kKnownRed.count(c.id) ? expected : unexpected).push_back(c.id);
  }
  std::printf("%zu/%zu criteria pass", passed, criteria.size());
  if (!expected.empty()) {
    std::printf("; known failures:");
    for (const auto& id : expected) std::printf(" %s", id.c_str());
  }
  if (!unexpected.empty()) {
    std::printf("; unexpected failures:");
    for (const auto& id : unexpected) std::printf(" %s", id.c_str());
  }
  std::printf("\n");
  return unexpected.empty() ? 0 : 1;
}
