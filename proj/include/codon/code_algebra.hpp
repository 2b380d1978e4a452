#pragma once

#include <cstddef>
#include <iosfwd>
#include <set>
#include <string_view>
#include <vector>

#include "codon/tape.hpp"

namespace codon {

// A contiguous run of codons. Segments and tapes share one representation.
using CodeSegment = Tape;

enum class MetricKind : std::uint8_t {
  Levenshtein,
  DamerauLevenshtein,
  Hamming,
  JaroWinklerDissimilarity,
};

std::string_view to_string(MetricKind m) noexcept;
// "levenshtein", "damerau", "hamming", "jaro-winkler".
MetricKind parse_metric(std::string_view name);

// {a, b}; a single element when a == b.
std::set<Tape> code_union(const Tape& a, const Tape& b);

enum class IntersectionMode : std::uint8_t { Maximal, AllCommon };

// Non-empty contiguous segments occurring in both tapes. Maximal mode keeps
// only segments that no longer common segment contains. Repeated occurrences
// collapse to one element.
std::set<CodeSegment> code_intersection(const Tape& a, const Tape& b,
                                        IntersectionMode mode = IntersectionMode::Maximal);

// `inner` occurs contiguously in `outer` (equality allowed).
bool code_contains(const Tape& inner, const Tape& outer);
// code_contains and inner != outer.
bool code_properly_contains(const Tape& inner, const Tape& outer);
// Every codon of `inner` occurs in `outer` at least as many times.
bool multiset_contains(const Tape& inner, const Tape& outer);

std::size_t levenshtein(std::span<const Codon> a, std::span<const Codon> b);
// Unrestricted adjacent-transposition edit distance (a true metric).
std::size_t damerau_levenshtein(std::span<const Codon> a, std::span<const Codon> b);
// Throws ContractError on unequal lengths.
std::size_t hamming(std::span<const Codon> a, std::span<const Codon> b);
// Jaro-Winkler similarity, prefix scale 0.1, prefix cap 4, no boost threshold.
double jaro_winkler_similarity(std::span<const Codon> a, std::span<const Codon> b);

// Smaller is closer for every kind; the Jaro-Winkler kind is 1 - similarity.
double distance(const Tape& a, const Tape& b, MetricKind metric);

// d(center, candidate) < eps. Requires eps > 0.
bool in_ball(const Tape& candidate, const Tape& center, double eps, MetricKind metric);

// Some contiguous segment of `outer` lies within eps of `inner`.
bool eps_contains(const Tape& inner, const Tape& outer, double eps, MetricKind metric);

// d(a, b) < eps and a != b.
bool is_polymorphic(const Tape& a, const Tape& b, double eps, MetricKind metric);

// CSV matrix with a header row of labels.
void write_distance_matrix_csv(std::ostream& out, const std::vector<std::string>& labels,
                               const std::vector<Tape>& tapes, MetricKind metric);

}  // namespace codon
