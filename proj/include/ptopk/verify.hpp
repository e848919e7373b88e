#ifndef PTOPK_VERIFY_HPP
#define PTOPK_VERIFY_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ptopk/io.hpp"
#include "ptopk/relation.hpp"

namespace ptopk {

// An engine as seen by the verifier: either full per-tuple probabilities
// (relation tuple order) or just an answer set, plus its domain constraints.
struct EngineSpec {
  std::string name;
  bool needs_simple = false;
  bool needs_injective = false;
  std::function<std::vector<double>(const ProbRelation&, const ScoreAssignment&, int)>
      probs;  // may be empty for answer-only engines
  std::function<AnswerSet(const ProbRelation&, const ScoreAssignment&, int)>
      answer;  // used when probs is empty
};

// basic, ta, reduction, rollback, rollbacksort, gen-simple, gen-full.
std::vector<EngineSpec> default_engines();

struct VerifyOptions {
  std::uint64_t seed = 1;
  int trials = 200;
  int max_n = 10;
  std::vector<std::string> engines;  // empty = every default engine
  std::string reproducer_dir = ".";
  double tolerance = 1e-9;
};

struct VerifyFailure {
  std::string property;
  std::string detail;
  int k = 0;
  std::string reproducer_path;  // minimized witness relation, TSV
};

struct VerifyReport {
  int trials = 0;
  std::vector<VerifyFailure> failures;
  bool ok() const { return failures.empty(); }
};

// Seeded random instances through engine-vs-oracle equivalence and the
// invariant suite (world normalization, allocation-mass conservation,
// monotonicity in k, P <= p(t)). On failure the witness relation is shrunk
// by greedy tuple removal and written next to the report.
VerifyReport run_verification(const VerifyOptions& opts,
                              const std::vector<EngineSpec>& engines);
VerifyReport run_verification(const VerifyOptions& opts);

}  // namespace ptopk

#endif
