#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace codon {

// Digit order A < C < G < U is the base-4 encoding used by Codon::index().
enum class Base : std::uint8_t { A = 0, C = 1, G = 2, U = 3 };

inline constexpr std::size_t kBaseCount = 4;
inline constexpr std::size_t kCodonCount = 64;

char to_char(Base b) noexcept;

// An ordered triple of bases, stored as its base-4 index 16*b0 + 4*b1 + b2.
class Codon {
 public:
  constexpr Codon() = default;
  constexpr Codon(Base b0, Base b1, Base b2)
      : index_(static_cast<std::uint8_t>(16 * static_cast<int>(b0) +
                                         4 * static_cast<int>(b1) +
                                         static_cast<int>(b2))) {}

  // Inverse of index(). Throws ContractError unless 0 <= i < 64.
  static Codon from_index(int i);

  // Parses "ACG"; 'T' is accepted as 'U'. Throws ContractError on bad input.
  static Codon parse(std::string_view text);

  constexpr int index() const noexcept { return index_; }
  constexpr Base base(std::size_t i) const noexcept {
    return static_cast<Base>((index_ >> (2 * (2 - i))) & 3);
  }
  std::array<Base, 3> bases() const noexcept { return {base(0), base(1), base(2)}; }
  std::string str() const;

  friend constexpr bool operator==(Codon, Codon) = default;
  friend constexpr auto operator<=>(Codon, Codon) = default;

 private:
  std::uint8_t index_ = 0;
};

constexpr int codon_index(Codon c) noexcept { return c.index(); }

// A finite codon sequence. Value type: every transformation returns a new Tape.
class Tape {
 public:
  Tape() = default;
  explicit Tape(std::vector<Codon> codons) : codons_(std::move(codons)) {}
  Tape(std::initializer_list<Codon> codons) : codons_(codons) {}

  std::size_t size() const noexcept { return codons_.size(); }
  bool empty() const noexcept { return codons_.empty(); }
  Codon operator[](std::size_t i) const { return codons_[i]; }
  auto begin() const noexcept { return codons_.begin(); }
  auto end() const noexcept { return codons_.end(); }
  std::span<const Codon> span() const noexcept { return codons_; }
  const std::vector<Codon>& codons() const noexcept { return codons_; }

  // Codons [first, last) as a new tape.
  Tape slice(std::size_t first, std::size_t last) const;

  friend bool operator==(const Tape&, const Tape&) = default;
  friend auto operator<=>(const Tape& a, const Tape& b) {
    return a.codons_ <=> b.codons_;
  }

 private:
  std::vector<Codon> codons_;
};

// Whitespace-separated codon tokens. Throws ParseError naming the bad token.
Tape parse_tape(std::string_view text);

// Space-separated uppercase tokens, always with 'U'.
std::string render_tape(const Tape& tape);

// Uniform i.i.d. codons; a pure function of (length, seed).
Tape random_tape(std::size_t length, std::uint64_t seed);

// Convenience for tests and examples: parse_tape on a literal.
inline Tape operator""_tape(const char* text, std::size_t n) {
  return parse_tape(std::string_view(text, n));
}

std::uint64_t fingerprint(std::span<const Codon> codons) noexcept;

}  // namespace codon

template <>
struct std::hash<codon::Tape> {
  std::size_t operator()(const codon::Tape& t) const noexcept {
    return static_cast<std::size_t>(codon::fingerprint(t.span()));
  }
};
