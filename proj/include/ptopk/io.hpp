#ifndef PTOPK_IO_HPP
#define PTOPK_IO_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ptopk/relation.hpp"

namespace ptopk {

/// A parsed relation file: the relation, its scoring function and the names
/// of any extra payload columns (order preserved for round-tripping).
struct Dataset {
  ProbRelation rel;
  ScoreAssignment scores;
  std::vector<std::string> payload_columns;
};

// TSV with header `id	part	score	prob` (payload columns may follow);
// '#' lines are comments. Probabilities and scores are parsed to the nearest
// 64-bit real and round-trip exactly through render_relation. Throws
// ParseError on malformed input (including non-finite scores) and
// ValidationError when the parsed relation fails validate().
Dataset parse_relation(std::string_view text);
Dataset load_relation(const std::string& path);

std::string render_relation(const Dataset& data);
void save_relation(const Dataset& data, const std::string& path);

// Shortest decimal form that parses back to the identical double.
std::string format_double(double value);

struct WorkloadSpec {
  std::size_t n = 0;       // tuple count, >= 1
  double x = 0.0;          // fraction of tuples in non-trivial parts
  std::size_t s_max = 20;  // max part size, >= 2
  std::uint64_t seed = 0;
};

// Synthetic workload: ceil(n*x) tuples grouped into parts of size uniform in
// [2, s_max], everything else singleton; scores and probabilities i.i.d.
// uniform(0,1), uncorrelated, scores injective by regeneration. A part whose
// probabilities sum beyond 1 is rescaled by 0.99/sum. Pure function of the
// spec.
Dataset generate(const WorkloadSpec& spec);

}  // namespace ptopk

#endif
