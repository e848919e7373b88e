#ifndef PTOPK_ROLLBACK_HPP
#define PTOPK_ROLLBACK_HPP

#include <map>
#include <vector>

#include "ptopk/relation.hpp"

namespace ptopk {

// Relationship between consecutive ranked tuples t_i and t_{i+1}:
//   Case1: exclusive (same part);
//   Case2: independent, and t_{i+1} independent of every earlier tuple;
//   Case3: independent, but t_{i+1} exclusive with some earlier tuple.
enum class TransitionCase { Case1, Case2, Case3 };

// Classify the t_i -> t_{i+1} transition, i being the 1-based rank position
// of t_i (1 <= i < n). Requires injective scores.
TransitionCase classify_transition(const ProbRelation& rel,
                                   const RankedView& ranked, std::size_t i);

struct ColumnAnnotation {
  PartId part = 0;
  double prob = 0.0;
  // Tuples of the part not yet traversed; tracked only when part statistics
  // are available (RollbackSort), -1 otherwise. Set whenever the column is
  // created or re-associated; untouched columns keep their stale value.
  long long unseen = -1;
};

struct TableColumn {
  ColumnAnnotation ann;
  std::vector<double> values;  // rows 0..k
};

struct TableSnapshot {
  std::size_t step = 0;  // 1-based index of the tuple just processed
  std::vector<TableColumn> columns;
};

struct StepStat {
  std::size_t step = 0;
  TransitionCase kind = TransitionCase::Case2;  // step 1 bootstraps as Case2
  std::size_t depth = 0;                // columns recomputed minus the last; 0 unless Case3
  std::size_t columns_recomputed = 0;
};

struct RecomputeStats {
  std::vector<StepStat> steps;
  std::size_t total_columns_recomputed() const;
  std::size_t total_depth() const;
};

struct RollbackOptions {
  bool record_snapshots = false;
};

struct RollbackRun {
  AnswerSet answers;
  std::vector<double> probs;  // per tuple, relation tuple order
  RecomputeStats stats;
  std::vector<TableSnapshot> snapshots;
};

// Incremental shared-prefix evaluation over an annotated DP table. Produces
// the same per-tuple probabilities as the reduction engine; the stats count
// the column traffic the sharing saves.
RollbackRun rollback_topk(const ProbRelation& rel, const ScoreAssignment& s,
                          int k, const RollbackOptions& opts = {});

// Rollback plus the column re-association heuristic: after a Case3 rollback,
// re-associated columns are stable-sorted by the number of still-unseen
// tuples of their part, ascending, so the parts most likely to trigger a
// future rollback sit closest to the end of the table. Requires exact
// per-part tuple counts (StatsMismatch otherwise).
RollbackRun rollbacksort_topk(const ProbRelation& rel, const ScoreAssignment& s,
                              int k, const std::map<PartId, std::size_t>& part_sizes,
                              const RollbackOptions& opts = {});

}  // namespace ptopk

#endif
