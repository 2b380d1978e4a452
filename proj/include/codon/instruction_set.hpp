#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include "codon/tape.hpp"

namespace codon {

enum class Opcode : std::uint8_t {
  Start,
  Stop,
  BuildFr,
  BuildTo,
  Cond,
  If,
  CopyAll,
  CopyFr,
  CopyTo,
  JumpFarFr,
  JumpNearFr,
  JumpTo,
  RemFr,
  RemTo,
  Copy,
  Jump,
  Noop,
};

std::string_view to_string(Opcode op) noexcept;

// Plot value for traces: START=0, COPY=1, JUMP=2, IF=3, COND=4, STOP=5.
// Set-1 opcodes map through their family (COPY_ALL/COPY_FR/COPY_TO -> 1,
// JUMP_FAR_FR/JUMP_NEAR_FR/JUMP_TO -> 2). BUILD_*, REM_* and NOOP have no
// plot value of their own and map to 6.
int numeric_opcode(Opcode op) noexcept;

enum class InstructionSet : std::uint8_t { Set1, Set2 };

std::string_view to_string(InstructionSet iset) noexcept;

// Accepts the literal identifiers "set1" and "set2".
InstructionSet parse_instruction_set(std::string_view name);

using DecodeTable = std::array<Opcode, kCodonCount>;

const DecodeTable& decode_table(InstructionSet iset) noexcept;

inline Opcode decode(Codon c, InstructionSet iset) noexcept {
  return decode_table(iset)[static_cast<std::size_t>(c.index())];
}

// Openers whose effect needs a partner position (dual or addressed).
bool opens_span(Opcode op, InstructionSet iset) noexcept;

// Position of the partner of the opener at `at`, or nullopt.
//
// Set 1: BUILD_FR/COPY_FR/REM_FR match the first closer after `at`.
// JUMP_NEAR_FR / JUMP_FAR_FR pick the JUMP_TO at minimum / maximum absolute
// distance over the whole tape, ties to the larger index.
// Set 2: tape[at+1] is an address; if it decodes to an opcode there is no
// partner, otherwise the next identical codon after at+1 is the partner.
//
// Throws ContractError if tape[at] is not an opener for `iset`.
std::optional<std::size_t> find_conjugate(std::span<const Codon> tape, std::size_t at,
                                          InstructionSet iset);

inline std::optional<std::size_t> find_conjugate(const Tape& tape, std::size_t at,
                                                 InstructionSet iset) {
  return find_conjugate(tape.span(), at, iset);
}

}  // namespace codon
