#ifndef PTOPK_DP_SIMPLE_HPP
#define PTOPK_DP_SIMPLE_HPP

#include <span>
#include <vector>

#include "ptopk/relation.hpp"

namespace ptopk {

/// The (k+1) x n table of accumulated probabilities q(k', i):
/// q(k', i) is the Global-Topk' probability of the i-th highest-scored tuple
/// (columns are 1-based to match that reading). q(0, i) = 0, q is
/// non-decreasing in k' and bounded by the tuple's own probability.
class DPTable {
 public:
  DPTable(int k, std::size_t n)
      : k_(k), n_(n), cells_(static_cast<std::size_t>(k + 1) * n, 0.0) {}

  double q(int kprime, std::size_t i) const {
    return cells_[(i - 1) * (k_ + 1) + kprime];
  }
  double& at(int kprime, std::size_t i) {
    return cells_[(i - 1) * (k_ + 1) + kprime];
  }
  int k() const { return k_; }
  std::size_t columns() const { return n_; }

 private:
  int k_;
  std::size_t n_;
  std::vector<double> cells_;  // column-major
};

// The probability recursion over a simple relation, probabilities given in
// score-descending order:
//   q(k',i) = (q(k',i-1) * (1-p_{i-1})/p_{i-1} + q(k'-1,i-1)) * p_i
// with q(0,.) = 0 and q(k'>=1, 1) = p_1. Full-table form.
DPTable ind_topk_sub_kernel(std::span<const double> probs, int k);

// Streaming form: O(k) space, one column at a time. `column` is overwritten
// with column i and handed to emit(i, column) for i = 1..n. Cell values are
// bitwise identical to the full table's.
template <typename Emit>
void ind_topk_sub_scan(std::span<const double> probs, int k, Emit&& emit) {
  std::vector<double> column(static_cast<std::size_t>(k) + 1, 0.0);
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double p = probs[i];
    if (i == 0) {
      for (int r = 1; r <= k; ++r) column[r] = p;
    } else {
      const double prev = probs[i - 1];
      const double ratio = (1.0 - prev) / prev;
      // In place, top row first: column[r] reads the old r and r-1 cells.
      for (int r = k; r >= 1; --r) column[r] = (column[r] * ratio + column[r - 1]) * p;
    }
    emit(i + 1, std::span<const double>(column));
  }
}

// q(k, n) only; the reduction engine's hot path.
double ind_topk_sub_last(std::span<const double> probs, int k);

/// Fixed-capacity selection of the k highest-probability tuples; never holds
/// more than k+1 entries. Ties keep the smaller id.
class BoundedHeap {
 public:
  explicit BoundedHeap(int k) : k_(k) {}

  void push(TupleId id, double prob);
  std::size_t size() const { return entries_.size(); }

  // Lowest kept probability; only meaningful once size() > 0.
  double worst_prob() const { return entries_.front().prob; }

  // Contents sorted by (prob desc, id asc).
  AnswerSet take();

 private:
  static bool worse(const ScoredTuple& a, const ScoredTuple& b) {
    if (a.prob != b.prob) return a.prob < b.prob;
    return a.id > b.id;
  }
  // Heap comparator: the worst entry surfaces at the front.
  static bool better(const ScoredTuple& a, const ScoredTuple& b) {
    return worse(b, a);
  }
  int k_;
  std::vector<ScoredTuple> entries_;  // min-heap on (prob, id desc)
};

// Full table over a pre-ranked view; sortedness asserted in debug builds.
DPTable ind_topk_sub(const RankedView& ranked, int k);

// Global-Topk probabilities of every tuple, in relation tuple order.
// Throws NotSimpleError / NotInjectiveError when out of domain.
std::vector<double> ind_topk_probs(const ProbRelation& rel,
                                   const ScoreAssignment& s, int k);

// Global-Topk answer set: the min(k, n) tuples of highest q(k, .).
AnswerSet ind_topk(const ProbRelation& rel, const ScoreAssignment& s, int k);

}  // namespace ptopk

#endif
