#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "codon/instruction_set.hpp"
#include "codon/tape.hpp"

namespace codon {

struct Limits {
  std::size_t step_budget = 10'000;
  std::size_t progeny_cap = 50;  // also bounds product code per execution
  std::size_t nest_depth = 3;

  // Throws ContractError unless every field is >= 1.
  void validate() const;
};

enum class HaltReason : std::uint8_t { Stopped, StepBudget, RanOffEnd, NoStart };

std::string_view to_string(HaltReason r) noexcept;

struct MachineState {
  std::size_t ip = 0;
  bool flag = false;
  std::size_t steps = 0;
  HaltReason halt_reason = HaltReason::NoStart;

  friend bool operator==(const MachineState&, const MachineState&) = default;
};

struct TraceEntry {
  std::size_t position = 0;
  Opcode opcode = Opcode::Noop;
  int numeric = 6;
  bool flag_after = false;
  // Number of REM deletions applied before this step; identifies the live tape.
  std::uint32_t tape_epoch = 0;
  // Whether the progeny cap had been reached before this step.
  bool progeny_saturated = false;

  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

struct ProductCode {
  std::size_t level = 1;  // nesting level, >= 1
  std::size_t copy = 0;   // index among products emitted by the same parent run
  std::optional<std::size_t> parent;  // index into ExecutionOutcome::products
  Tape tape;
  bool executed = false;
  std::vector<TraceEntry> trace;  // populated when executed

  friend bool operator==(const ProductCode&, const ProductCode&) = default;
};

struct Cycle {
  std::size_t start = 0;   // trace index of the first configuration that repeats
  std::size_t period = 0;

  friend bool operator==(const Cycle&, const Cycle&) = default;
};

struct ExecutionOutcome {
  Tape final_tape;
  MachineState state;
  std::vector<TraceEntry> trace;
  std::vector<Tape> progeny;
  std::vector<ProductCode> products;
  std::optional<Cycle> cycle;
  bool self_modified = false;  // a REM deleted at least one codon

  friend bool operator==(const ExecutionOutcome&, const ExecutionOutcome&) = default;
};

// Runs `tape` from its first START. Never throws for any tape; anomalies are
// halt reasons, and openers without a partner behave as NOOP.
//
//   STOP            halt
//   COND            flag = !flag
//   IF              skip the next codon unless flag is set
//   COPY_ALL        whole live tape -> progeny
//   COPY_FR / COPY  span interior -> progeny (set 2 excludes both addresses)
//   BUILD_FR        span interior -> level-1 product code
//   REM_FR          delete span interior from the live tape
//   JUMP family     ip = partner position
//
// Progeny and products beyond limits.progeny_cap are dropped.
ExecutionOutcome execute(const Tape& tape, InstructionSet iset, const Limits& limits = {});

// Executes the base tape and then each product code as a fresh program, down
// to limits.nest_depth levels. Products carry their level and trace.
ExecutionOutcome execute_nested(const Tape& tape, InstructionSet iset,
                                const Limits& limits = {});

// Halts with STOPPED within the step budget.
bool is_executable(const Tape& tape, InstructionSet iset, const Limits& limits = {});

// Executable and at least one retained progeny equals `tape`.
bool is_reproductive(const Tape& tape, InstructionSet iset, const Limits& limits = {});

// First repeated machine configuration (position, flag, live-tape epoch,
// progeny saturation) in the trace of a budget-exhausted run.
std::optional<Cycle> detect_cycle(const ExecutionOutcome& outcome);

// CSV: step,position,opcode,numeric,flag
void write_trace_csv(std::ostream& out, const std::vector<TraceEntry>& trace);

}  // namespace codon
