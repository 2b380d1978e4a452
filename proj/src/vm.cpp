#include "codon/vm.hpp"

#include <algorithm>
#include <ostream>
#include <unordered_map>

#include "codon/errors.hpp"

namespace codon {

namespace {

// Interpreter loop shared by the tracing and the predicate-only paths. The
// observer sees every executed step and every copied segment; it decides what
// to retain.
template <class Observer>
MachineState run_machine(std::vector<Codon>& code, InstructionSet iset, const Limits& limits,
                         Observer& obs) {
  MachineState st;
  const auto& table = decode_table(iset);
  auto op_at = [&](std::size_t i) { return table[static_cast<std::size_t>(code[i].index())]; };

  auto start = std::find_if(code.begin(), code.end(),
                            [&](Codon c) { return table[static_cast<std::size_t>(c.index())] == Opcode::Start; });
  if (start == code.end()) {
    st.halt_reason = HaltReason::NoStart;
    return st;
  }
  st.ip = static_cast<std::size_t>(start - code.begin());

  std::uint32_t epoch = 0;
  std::size_t emitted_progeny = 0;
  std::size_t emitted_products = 0;

  for (;;) {
    if (st.ip >= code.size()) {
      st.halt_reason = HaltReason::RanOffEnd;
      return st;
    }
    if (st.steps >= limits.step_budget) {
      st.halt_reason = HaltReason::StepBudget;
      return st;
    }
    if (obs.before_step(st.ip, st.flag, epoch)) {
      st.halt_reason = HaltReason::StepBudget;
      return st;
    }

    const std::size_t at = st.ip;
    const Opcode op = op_at(at);
    const bool saturated = emitted_progeny >= limits.progeny_cap;
    const std::uint32_t epoch_before = epoch;
    std::size_t next = at + 1;
    bool stop = false;

    switch (op) {
      case Opcode::Stop:
        stop = true;
        break;
      case Opcode::Cond:
        st.flag = !st.flag;
        break;
      case Opcode::If:
        if (!st.flag) next = at + 2;
        break;
      case Opcode::CopyAll:
        if (emitted_progeny < limits.progeny_cap)
          obs.progeny(std::span<const Codon>(code), emitted_progeny);
        ++emitted_progeny;
        break;
      case Opcode::CopyFr:
      case Opcode::Copy: {
        const auto conj = find_conjugate(code, at, iset);
        if (!conj && op == Opcode::Copy && at + 1 < code.size() &&
            op_at(at + 1) != Opcode::Noop) {
          // An opcode in the address slot means "no address": copy everything.
          if (emitted_progeny < limits.progeny_cap)
            obs.progeny(std::span<const Codon>(code), emitted_progeny);
          ++emitted_progeny;
          break;
        }
        if (!conj) break;
        const std::size_t first = at + (op == Opcode::Copy ? 2 : 1);
        if (emitted_progeny < limits.progeny_cap)
          obs.progeny(std::span<const Codon>(code).subspan(first, *conj - first),
                      emitted_progeny);
        ++emitted_progeny;
        break;
      }
      case Opcode::BuildFr: {
        const auto conj = find_conjugate(code, at, iset);
        if (!conj) break;
        if (emitted_products < limits.progeny_cap)
          obs.product(std::span<const Codon>(code).subspan(at + 1, *conj - at - 1));
        ++emitted_products;
        break;
      }
      case Opcode::RemFr: {
        const auto conj = find_conjugate(code, at, iset);
        if (!conj || *conj == at + 1) break;
        code.erase(code.begin() + static_cast<std::ptrdiff_t>(at + 1),
                   code.begin() + static_cast<std::ptrdiff_t>(*conj));
        ++epoch;
        obs.modified();
        break;
      }
      case Opcode::JumpFarFr:
      case Opcode::JumpNearFr:
      case Opcode::Jump: {
        const auto conj = find_conjugate(code, at, iset);
        if (conj) next = *conj;
        break;
      }
      default:
        break;
    }

    ++st.steps;
    obs.step(at, op, st.flag, epoch_before, saturated);
    if (stop) {
      st.halt_reason = HaltReason::Stopped;
      return st;
    }
    st.ip = next;
  }
}

class TracingObserver {
 public:
  TracingObserver(ExecutionOutcome& out, std::size_t reserve) : out_(out) {
    out_.trace.reserve(std::min<std::size_t>(reserve, 1024));
  }

  bool before_step(std::size_t, bool, std::uint32_t) { return false; }
  void step(std::size_t pos, Opcode op, bool flag_after, std::uint32_t epoch_before,
            bool saturated) {
    out_.trace.push_back(TraceEntry{pos, op, numeric_opcode(op), flag_after, epoch_before,
                                    saturated});
  }
  void progeny(std::span<const Codon> segment, std::size_t) {
    out_.progeny.emplace_back(std::vector<Codon>(segment.begin(), segment.end()));
  }
  void product(std::span<const Codon> segment) {
    ProductCode p;
    p.level = 1;
    p.copy = out_.products.size();
    p.tape = Tape(std::vector<Codon>(segment.begin(), segment.end()));
    out_.products.push_back(std::move(p));
  }
  void modified() { out_.self_modified = true; }

 private:
  ExecutionOutcome& out_;
};

// Predicate-only observer. Stops as soon as a (position, flag, epoch) triple
// repeats: the machine is deterministic, so it would loop until the budget.
class VerdictObserver {
 public:
  VerdictObserver(const Tape& original, std::size_t n) : original_(original), seen_(2 * n, 0) {}

  bool before_step(std::size_t ip, bool flag, std::uint32_t epoch) {
    if (epoch != epoch_) {
      epoch_ = epoch;
      std::fill(seen_.begin(), seen_.end(), 0);
    }
    auto& slot = seen_[2 * ip + (flag ? 1 : 0)];
    if (slot) return true;
    slot = 1;
    return false;
  }
  void step(std::size_t, Opcode, bool, std::uint32_t, bool) {}
  void progeny(std::span<const Codon> segment, std::size_t) {
    if (!self_copy && std::ranges::equal(segment, original_.span())) self_copy = true;
  }
  void product(std::span<const Codon>) {}
  void modified() {}

  bool self_copy = false;

 private:
  const Tape& original_;
  std::vector<std::uint8_t> seen_;
  std::uint32_t epoch_ = 0;
};

struct Verdict {
  HaltReason halt;
  bool self_copy;
};

Verdict verdict(const Tape& tape, InstructionSet iset, const Limits& limits) {
  limits.validate();
  std::vector<Codon> code(tape.begin(), tape.end());
  VerdictObserver obs(tape, code.size());
  const MachineState st = run_machine(code, iset, limits, obs);
  return {st.halt_reason, obs.self_copy};
}

std::uint64_t config_key(const TraceEntry& e, bool flag_before) {
  return (static_cast<std::uint64_t>(e.position) << 32) ^
         (static_cast<std::uint64_t>(e.tape_epoch) << 2) ^
         (static_cast<std::uint64_t>(flag_before) << 1) ^
         static_cast<std::uint64_t>(e.progeny_saturated);
}

}  // namespace

void Limits::validate() const {
  require(step_budget >= 1, "limits: step_budget must be >= 1");
  require(progeny_cap >= 1, "limits: progeny_cap must be >= 1");
  require(nest_depth >= 1, "limits: nest_depth must be >= 1");
}

std::string_view to_string(HaltReason r) noexcept {
  switch (r) {
    case HaltReason::Stopped: return "STOPPED";
    case HaltReason::StepBudget: return "STEP_BUDGET";
    case HaltReason::RanOffEnd: return "RAN_OFF_END";
    case HaltReason::NoStart: return "NO_START";
  }
  return "NO_START";
}

ExecutionOutcome execute(const Tape& tape, InstructionSet iset, const Limits& limits) {
  limits.validate();
  ExecutionOutcome out;
  std::vector<Codon> code(tape.begin(), tape.end());
  TracingObserver obs(out, limits.step_budget);
  out.state = run_machine(code, iset, limits, obs);
  out.final_tape = Tape(std::move(code));
  out.cycle = detect_cycle(out);
  return out;
}

ExecutionOutcome execute_nested(const Tape& tape, InstructionSet iset, const Limits& limits) {
  ExecutionOutcome out = execute(tape, iset, limits);
  // Breadth-first: products are appended while iterating, by index.
  for (std::size_t i = 0; i < out.products.size(); ++i) {
    ExecutionOutcome sub = execute(out.products[i].tape, iset, limits);
    out.products[i].executed = true;
    out.products[i].trace = std::move(sub.trace);
    const std::size_t level = out.products[i].level;
    if (level >= limits.nest_depth) continue;
    for (auto& child : sub.products) {
      child.level = level + 1;
      child.parent = i;
      out.products.push_back(std::move(child));
    }
  }
  return out;
}

bool is_executable(const Tape& tape, InstructionSet iset, const Limits& limits) {
  return verdict(tape, iset, limits).halt == HaltReason::Stopped;
}

bool is_reproductive(const Tape& tape, InstructionSet iset, const Limits& limits) {
  const Verdict v = verdict(tape, iset, limits);
  return v.halt == HaltReason::Stopped && v.self_copy;
}

std::optional<Cycle> detect_cycle(const ExecutionOutcome& outcome) {
  if (outcome.state.halt_reason != HaltReason::StepBudget) return std::nullopt;
  std::unordered_map<std::uint64_t, std::size_t> first_seen;
  first_seen.reserve(outcome.trace.size());
  bool flag = false;
  for (std::size_t k = 0; k < outcome.trace.size(); ++k) {
    const auto& e = outcome.trace[k];
    auto [it, inserted] = first_seen.emplace(config_key(e, flag), k);
    if (!inserted) return Cycle{it->second, k - it->second};
    flag = e.flag_after;
  }
  return std::nullopt;
}

void write_trace_csv(std::ostream& out, const std::vector<TraceEntry>& trace) {
  out << "step,position,opcode,numeric,flag\n";
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& e = trace[i];
    out << i << ',' << e.position << ',' << to_string(e.opcode) << ',' << e.numeric << ','
        << (e.flag_after ? 1 : 0) << '\n';
  }
}

}  // namespace codon
