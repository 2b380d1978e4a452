#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "codon/code_algebra.hpp"
#include "codon/evolution.hpp"
#include "codon/experiments.hpp"
#include "codon/instruction_set.hpp"
#include "codon/vm.hpp"

namespace codon {

// Bad flag, unknown key or malformed value. Maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Every tunable with its default. The same key names are accepted in a
// key=value config file and as --key flags on the subcommands that use them.
struct Config {
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  InstructionSet iset = InstructionSet::Set1;
  Limits limits;

  std::size_t runs = 1000;
  std::size_t cap = 1'000'000;
  std::size_t length = 50;
  Exp1Target target = Exp1Target::Executable;
  bool fresh = false;

  double kappa = 10.0;
  double alpha = 2.0;
  bool maximize = true;

  PerturbationPolicy policy = PerturbationPolicy::random_walk();

  MetricKind metric = MetricKind::Levenshtein;
  double eps = 2.0;

  std::string fitness = "renyi2";
  std::size_t population = 20;
  std::size_t generations = 100;

  struct Key {
    std::string_view name;
    std::string_view help;
  };
  static const std::vector<Key>& keys();

  // Throws UsageError on an unknown key or a value that does not parse.
  void set(std::string_view key, std::string_view value);
  // Current value rendered the way set() accepts it.
  std::string get(std::string_view key) const;

  // Lines are key=value; blank lines and lines starting with '#' are skipped.
  void load(std::istream& in);
  void load_file(const std::string& path);

  Exp1Config exp1() const;
  Exp2Config exp2() const;
};

// Reads a whitespace-separated codon file; '#' starts a comment to end of line.
Tape read_tape_file(const std::string& path);

// args excludes the program name. Returns 0 on success, 1 on a contract or
// parse error, 2 on a usage error.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace codon
