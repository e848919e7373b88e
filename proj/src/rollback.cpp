#include "ptopk/rollback.hpp"

#include <algorithm>
#include <cassert>
#include <unordered_map>

#include "ptopk/dp_simple.hpp"
#include "ptopk/errors.hpp"

namespace ptopk {

std::size_t RecomputeStats::total_columns_recomputed() const {
  std::size_t total = 0;
  for (const StepStat& s : steps) total += s.columns_recomputed;
  return total;
}

std::size_t RecomputeStats::total_depth() const {
  std::size_t total = 0;
  for (const StepStat& s : steps) total += s.depth;
  return total;
}

TransitionCase classify_transition(const ProbRelation& rel,
                                   const RankedView& ranked, std::size_t i) {
  if (i < 1 || i >= ranked.size())
    throw IndexOutOfRangeError("transition index must satisfy 1 <= i < n");
  (void)rel;
  const PartId next = ranked.part[i];  // t_{i+1} at 0-based position i
  if (next == ranked.part[i - 1]) return TransitionCase::Case1;
  for (std::size_t pos = 0; pos + 1 < i; ++pos)
    if (ranked.part[pos] == next) return TransitionCase::Case3;
  return TransitionCase::Case2;
}

namespace {

class AnnotatedTable {
 public:
  explicit AnnotatedTable(int k) : k_(k) {}

  std::size_t size() const { return columns_.size(); }
  const std::vector<TableColumn>& columns() const { return columns_; }
  TableColumn& column(std::size_t c) { return columns_[c]; }

  void append(ColumnAnnotation ann) {
    columns_.push_back({ann, std::vector<double>(k_ + 1, 0.0)});
  }
  void truncate(std::size_t count) { columns_.resize(count); }

  // Eq.-3 step against the column to the left; the leftmost column is the
  // base case.
  void recompute(std::size_t c) {
    TableColumn& col = columns_[c];
    if (c == 0) {
      col.values[0] = 0.0;
      for (int r = 1; r <= k_; ++r) col.values[r] = col.ann.prob;
      return;
    }
    const TableColumn& prev = columns_[c - 1];
    const double ratio = (1.0 - prev.ann.prob) / prev.ann.prob;
    col.values[0] = 0.0;
    for (int r = 1; r <= k_; ++r)
      col.values[r] = (prev.values[r] * ratio + prev.values[r - 1]) * col.ann.prob;
  }

  std::size_t find_part(PartId part) const {
    for (std::size_t c = 0; c < columns_.size(); ++c)
      if (columns_[c].ann.part == part) return c;
    throw Error("internal: no column annotated with part " + std::to_string(part));
  }

  double answer_value() const { return columns_.back().values[k_]; }

 private:
  int k_;
  std::vector<TableColumn> columns_;
};

RollbackRun run_engine(const ProbRelation& rel, const ScoreAssignment& s, int k,
                       bool sort_by_unseen,
                       const std::map<PartId, std::size_t>* part_sizes,
                       const RollbackOptions& opts) {
  if (!s.injective()) throw NotInjectiveError("scoring function is not injective");
  RankedView ranked = rank(rel, s);
  const std::size_t n = ranked.size();

  std::unordered_map<PartId, std::size_t> seen;   // tuples traversed so far
  std::unordered_map<PartId, double> prefix;      // their probability sums
  auto unseen_of = [&](PartId part) -> long long {
    if (!part_sizes) return -1;
    auto it = part_sizes->find(part);
    return static_cast<long long>(it->second) - static_cast<long long>(seen[part]);
  };

  RollbackRun run;
  std::vector<double> by_position(n, 0.0);
  AnnotatedTable table(k);
  BoundedHeap heap(k);

  for (std::size_t pos = 0; pos < n; ++pos) {
    const PartId part_t = ranked.part[pos];
    const double p_t = ranked.prob[pos];
    StepStat stat;
    stat.step = pos + 1;

    if (pos == 0) {
      seen[part_t] = 1;
      table.append({part_t, p_t, unseen_of(part_t)});
      table.recompute(0);
      stat.kind = TransitionCase::Case2;
      stat.columns_recomputed = 1;
    } else {
      const PartId prev_part = ranked.part[pos - 1];
      seen[part_t] += 1;
      if (part_t == prev_part) {
        // Case 1: same induced relation up to the self tuple; swap it out.
        const std::size_t last = table.size() - 1;
        table.column(last).ann = {part_t, p_t, unseen_of(part_t)};
        table.recompute(last);
        stat.kind = TransitionCase::Case1;
        stat.columns_recomputed = 1;
      } else if (seen[part_t] == 1) {
        // Case 2: the previous self column becomes the event column of the
        // previous tuple's part; a fresh self column goes on the end.
        const std::size_t last = table.size() - 1;
        table.column(last).ann = {prev_part, prefix[prev_part], unseen_of(prev_part)};
        table.append({part_t, p_t, unseen_of(part_t)});
        table.recompute(last);
        table.recompute(last + 1);
        stat.kind = TransitionCase::Case2;
        stat.columns_recomputed = 2;
      } else {
        // Case 3: the part of t_{i+1} already owns a column; roll back to it.
        const std::size_t j = table.find_part(part_t);
        const std::size_t old_size = table.size();
        std::vector<PartId> carried;  // parts between col_j and the self column
        for (std::size_t c = j + 1; c + 1 < old_size; ++c)
          carried.push_back(table.columns()[c].ann.part);
        carried.push_back(prev_part);
        if (sort_by_unseen)
          std::stable_sort(carried.begin(), carried.end(),
                           [&](PartId a, PartId b) { return unseen_of(a) < unseen_of(b); });

        table.truncate(j);
        for (PartId part : carried)
          table.append({part, prefix[part], unseen_of(part)});
        table.append({part_t, p_t, unseen_of(part_t)});
        for (std::size_t c = j; c < table.size(); ++c) table.recompute(c);

        stat.kind = TransitionCase::Case3;
        stat.columns_recomputed = table.size() - j;
        stat.depth = stat.columns_recomputed - 1;
      }
    }

    prefix[part_t] += p_t;
    by_position[pos] = table.answer_value();
    heap.push(ranked.order[pos], by_position[pos]);
    run.stats.steps.push_back(stat);
    if (opts.record_snapshots)
      run.snapshots.push_back({pos + 1, table.columns()});
  }

  run.answers = heap.take();
  run.probs.assign(rel.size(), 0.0);
  for (std::size_t idx = 0; idx < rel.size(); ++idx)
    run.probs[idx] = by_position[ranked.position(rel.tuples()[idx].id)];
  return run;
}

}  // namespace

RollbackRun rollback_topk(const ProbRelation& rel, const ScoreAssignment& s,
                          int k, const RollbackOptions& opts) {
  return run_engine(rel, s, k, /*sort_by_unseen=*/false, nullptr, opts);
}

RollbackRun rollbacksort_topk(const ProbRelation& rel, const ScoreAssignment& s,
                              int k, const std::map<PartId, std::size_t>& part_sizes,
                              const RollbackOptions& opts) {
  for (const auto& [part, members] : rel.parts()) {
    auto it = part_sizes.find(part);
    if (it == part_sizes.end() || it->second != members.size())
      throw StatsMismatchError("part statistics disagree with the relation for part " +
                               std::to_string(part));
  }
  if (part_sizes.size() != rel.parts().size())
    throw StatsMismatchError("part statistics list unknown parts");
  return run_engine(rel, s, k, /*sort_by_unseen=*/true, &part_sizes, opts);
}

}  // namespace ptopk
