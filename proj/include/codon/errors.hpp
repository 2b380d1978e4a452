#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace codon {

// Raised when a caller violates an operation's precondition.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Malformed tape text. `token` is the zero-based index of the offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t token, const std::string& what)
      : std::runtime_error(what), token_(token) {}

  std::size_t token() const noexcept { return token_; }

 private:
  std::size_t token_;
};

inline void require(bool condition, const char* message) {
  if (!condition) throw ContractError(message);
}

}  // namespace codon
