#include "codon/code_algebra.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "codon/errors.hpp"

namespace codon {

std::string_view to_string(MetricKind m) noexcept {
  switch (m) {
    case MetricKind::Levenshtein: return "levenshtein";
    case MetricKind::DamerauLevenshtein: return "damerau";
    case MetricKind::Hamming: return "hamming";
    case MetricKind::JaroWinklerDissimilarity: return "jaro-winkler";
  }
  return "levenshtein";
}

MetricKind parse_metric(std::string_view name) {
  if (name == "levenshtein") return MetricKind::Levenshtein;
  if (name == "damerau" || name == "damerau-levenshtein") return MetricKind::DamerauLevenshtein;
  if (name == "hamming") return MetricKind::Hamming;
  if (name == "jaro-winkler" || name == "jaro_winkler") return MetricKind::JaroWinklerDissimilarity;
  throw ContractError("unknown metric '" + std::string(name) +
                      "' (expected levenshtein, damerau, hamming, jaro-winkler)");
}

std::set<Tape> code_union(const Tape& a, const Tape& b) { return {a, b}; }

std::set<CodeSegment> code_intersection(const Tape& a, const Tape& b, IntersectionMode mode) {
  // Longest common suffix table: run[i][j] = length of the common run ending
  // at a[i-1], b[j-1]. Every common segment is a suffix of one such run.
  const std::size_t n = a.size(), m = b.size();
  std::vector<std::size_t> prev(m + 1, 0), cur(m + 1, 0);
  std::set<CodeSegment> common;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : 0;
      for (std::size_t len = 1; len <= cur[j]; ++len) common.insert(a.slice(i - len, i));
    }
    std::swap(prev, cur);
  }
  if (mode == IntersectionMode::AllCommon) return common;

  std::set<CodeSegment> maximal = common;
  for (const auto& s : common) {
    if (s.size() < 2) continue;
    maximal.erase(s.slice(1, s.size()));
    maximal.erase(s.slice(0, s.size() - 1));
  }
  return maximal;
}

bool code_contains(const Tape& inner, const Tape& outer) {
  return std::ranges::search(outer.span(), inner.span()).begin() != outer.span().end() ||
         inner.empty();
}

bool code_properly_contains(const Tape& inner, const Tape& outer) {
  return inner != outer && code_contains(inner, outer);
}

bool multiset_contains(const Tape& inner, const Tape& outer) {
  std::array<std::size_t, kCodonCount> have{};
  for (Codon c : outer) ++have[static_cast<std::size_t>(c.index())];
  for (Codon c : inner) {
    auto& slot = have[static_cast<std::size_t>(c.index())];
    if (slot == 0) return false;
    --slot;
  }
  return true;
}

std::size_t levenshtein(std::span<const Codon> a, std::span<const Codon> b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

std::size_t damerau_levenshtein(std::span<const Codon> a, std::span<const Codon> b) {
  // Lowrance-Wagner with unit costs.
  const std::size_t n = a.size(), m = b.size();
  const std::size_t inf = n + m;
  const std::size_t w = m + 2;
  std::vector<std::size_t> d((n + 2) * w);
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return d[i * w + j]; };
  at(0, 0) = inf;
  for (std::size_t i = 0; i <= n; ++i) {
    at(i + 1, 0) = inf;
    at(i + 1, 1) = i;
  }
  for (std::size_t j = 0; j <= m; ++j) {
    at(0, j + 1) = inf;
    at(1, j + 1) = j;
  }
  std::array<std::size_t, kCodonCount> last_row{};
  for (std::size_t i = 1; i <= n; ++i) {
    std::size_t last_col = 0;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t i1 = last_row[static_cast<std::size_t>(b[j - 1].index())];
      const std::size_t j1 = last_col;
      std::size_t cost = 1;
      if (a[i - 1] == b[j - 1]) {
        cost = 0;
        last_col = j;
      }
      at(i + 1, j + 1) = std::min({at(i, j) + cost, at(i + 1, j) + 1, at(i, j + 1) + 1,
                                   at(i1, j1) + (i - i1 - 1) + 1 + (j - j1 - 1)});
    }
    last_row[static_cast<std::size_t>(a[i - 1].index())] = i;
  }
  return at(n + 1, m + 1);
}

std::size_t hamming(std::span<const Codon> a, std::span<const Codon> b) {
  require(a.size() == b.size(), "hamming distance requires equal-length tapes");
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

double jaro_winkler_similarity(std::span<const Codon> a, std::span<const Codon> b) {
  if (a.empty() && b.empty()) return 1.0;
  if (a.empty() || b.empty()) return 0.0;
  const std::size_t longest = std::max(a.size(), b.size());
  const std::size_t window = longest / 2 > 0 ? longest / 2 - 1 : 0;

  std::vector<bool> a_hit(a.size(), false), b_hit(b.size(), false);
  std::size_t matches = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::size_t lo = i > window ? i - window : 0;
    const std::size_t hi = std::min(b.size(), i + window + 1);
    for (std::size_t j = lo; j < hi; ++j) {
      if (b_hit[j] || a[i] != b[j]) continue;
      a_hit[i] = b_hit[j] = true;
      ++matches;
      break;
    }
  }
  if (matches == 0) return 0.0;

  std::size_t half_transpositions = 0;
  for (std::size_t i = 0, j = 0; i < a.size(); ++i) {
    if (!a_hit[i]) continue;
    while (!b_hit[j]) ++j;
    if (a[i] != b[j]) ++half_transpositions;
    ++j;
  }
  const double m = static_cast<double>(matches);
  const double t = static_cast<double>(half_transpositions) / 2.0;
  const double jaro = (m / static_cast<double>(a.size()) + m / static_cast<double>(b.size()) +
                       (m - t) / m) / 3.0;

  std::size_t prefix = 0;
  while (prefix < 4 && prefix < a.size() && prefix < b.size() && a[prefix] == b[prefix])
    ++prefix;
  return jaro + static_cast<double>(prefix) * 0.1 * (1.0 - jaro);
}

double distance(const Tape& a, const Tape& b, MetricKind metric) {
  switch (metric) {
    case MetricKind::Levenshtein: return static_cast<double>(levenshtein(a.span(), b.span()));
    case MetricKind::DamerauLevenshtein:
      return static_cast<double>(damerau_levenshtein(a.span(), b.span()));
    case MetricKind::Hamming: return static_cast<double>(hamming(a.span(), b.span()));
    case MetricKind::JaroWinklerDissimilarity:
      return 1.0 - jaro_winkler_similarity(a.span(), b.span());
  }
  return 0.0;
}

bool in_ball(const Tape& candidate, const Tape& center, double eps, MetricKind metric) {
  require(eps > 0.0, "in_ball: eps must be > 0");
  return distance(center, candidate, metric) < eps;
}

bool eps_contains(const Tape& inner, const Tape& outer, double eps, MetricKind metric) {
  require(eps > 0.0, "eps_contains: eps must be > 0");
  if (code_contains(inner, outer)) return true;

  // Edit metrics are bounded below by the length difference, so only segment
  // lengths within ceil(eps) of |inner| can qualify.
  std::size_t min_len = 0, max_len = outer.size();
  if (metric == MetricKind::Hamming) {
    min_len = max_len = inner.size();
    if (inner.size() > outer.size()) return false;
  } else if (metric != MetricKind::JaroWinklerDissimilarity) {
    const auto slack = static_cast<std::size_t>(std::ceil(eps));
    min_len = inner.size() > slack ? inner.size() - slack : 0;
    max_len = std::min(outer.size(), inner.size() + slack);
  }
  const auto segment_distance = [&](std::span<const Codon> seg) {
    switch (metric) {
      case MetricKind::Levenshtein: return static_cast<double>(levenshtein(inner.span(), seg));
      case MetricKind::DamerauLevenshtein:
        return static_cast<double>(damerau_levenshtein(inner.span(), seg));
      case MetricKind::Hamming: return static_cast<double>(hamming(inner.span(), seg));
      case MetricKind::JaroWinklerDissimilarity:
        return 1.0 - jaro_winkler_similarity(inner.span(), seg);
    }
    return 0.0;
  };
  for (std::size_t len = min_len; len <= max_len; ++len) {
    for (std::size_t first = 0; first + len <= outer.size(); ++first) {
      if (segment_distance(outer.span().subspan(first, len)) < eps) return true;
      if (len == 0) break;  // the empty segment is the same everywhere
    }
  }
  return false;
}

bool is_polymorphic(const Tape& a, const Tape& b, double eps, MetricKind metric) {
  require(eps > 0.0, "is_polymorphic: eps must be > 0");
  return a != b && distance(a, b, metric) < eps;
}

void write_distance_matrix_csv(std::ostream& out, const std::vector<std::string>& labels,
                               const std::vector<Tape>& tapes, MetricKind metric) {
  require(labels.size() == tapes.size(), "distance matrix: one label per tape");
  out << "tape";
  for (const auto& l : labels) out << ',' << l;
  out << '\n';
  char buf[32];
  for (std::size_t i = 0; i < tapes.size(); ++i) {
    out << labels[i];
    for (std::size_t j = 0; j < tapes.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%.10g", distance(tapes[i], tapes[j], metric));
      out << ',' << buf;
    }
    out << '\n';
  }
}

}  // namespace codon
