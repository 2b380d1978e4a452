#include "codon/tape.hpp"

#include <cctype>
#include <string>

#include "codon/errors.hpp"
#include "codon/rng.hpp"

namespace codon {

namespace {

int base_digit(char c) {
  switch (c) {
    case 'A': return 0;
    case 'C': return 1;
    case 'G': return 2;
    case 'U':
    case 'T': return 3;
    default: return -1;
  }
}

}  // namespace

char to_char(Base b) noexcept { return "ACGU"[static_cast<int>(b)]; }

Codon Codon::from_index(int i) {
  require(i >= 0 && i < static_cast<int>(kCodonCount), "codon index must be in 0..63");
  return Codon(static_cast<Base>(i >> 4), static_cast<Base>((i >> 2) & 3),
               static_cast<Base>(i & 3));
}

Codon Codon::parse(std::string_view text) {
  require(text.size() == 3, "codon must have exactly 3 bases");
  int digits[3];
  for (int i = 0; i < 3; ++i) {
    digits[i] = base_digit(text[i]);
    require(digits[i] >= 0, "codon bases must be one of A, C, G, U (T accepted)");
  }
  return from_index(16 * digits[0] + 4 * digits[1] + digits[2]);
}

std::string Codon::str() const {
  return {to_char(base(0)), to_char(base(1)), to_char(base(2))};
}

Tape Tape::slice(std::size_t first, std::size_t last) const {
  require(first <= last && last <= codons_.size(), "slice: range out of bounds");
  return Tape(std::vector<Codon>(codons_.begin() + static_cast<std::ptrdiff_t>(first),
                                 codons_.begin() + static_cast<std::ptrdiff_t>(last)));
}

Tape parse_tape(std::string_view text) {
  std::vector<Codon> out;
  std::size_t token = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    std::string_view tok = text.substr(i, j - i);
    bool ok = tok.size() == 3;
    for (char c : tok) ok = ok && base_digit(c) >= 0;
    if (!ok) {
      throw ParseError(token, "malformed codon '" + std::string(tok) + "' at token " +
                                  std::to_string(token));
    }
    out.push_back(Codon::parse(tok));
    ++token;
    i = j;
  }
  return Tape(std::move(out));
}

std::string render_tape(const Tape& tape) {
  std::string s;
  s.reserve(tape.size() * 4);
  for (std::size_t i = 0; i < tape.size(); ++i) {
    if (i) s.push_back(' ');
    s += tape[i].str();
  }
  return s;
}

Tape random_tape(std::size_t length, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(kCodonCount) - 1);
  std::vector<Codon> out;
  out.reserve(length);
  for (std::size_t i = 0; i < length; ++i) out.push_back(Codon::from_index(pick(rng)));
  return Tape(std::move(out));
}

std::uint64_t fingerprint(std::span<const Codon> codons) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (Codon c : codons) {
    h ^= static_cast<std::uint64_t>(c.index()) + 1;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(h ^ codons.size());
}

}  // namespace codon
