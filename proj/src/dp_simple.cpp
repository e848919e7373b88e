#include "ptopk/dp_simple.hpp"

#include <algorithm>
#include <cassert>

#include "ptopk/errors.hpp"

namespace ptopk {

DPTable ind_topk_sub_kernel(std::span<const double> probs, int k) {
  DPTable table(k, probs.size());
  ind_topk_sub_scan(probs, k, [&](std::size_t i, std::span<const double> column) {
    for (int r = 0; r <= k; ++r) table.at(r, i) = column[r];
  });
  return table;
}

double ind_topk_sub_last(std::span<const double> probs, int k) {
  double last = 0.0;
  ind_topk_sub_scan(probs, k, [&](std::size_t, std::span<const double> column) {
    last = column[k];
  });
  return last;
}

void BoundedHeap::push(TupleId id, double prob) {
  if (k_ <= 0) return;
  entries_.push_back({id, prob});
  std::push_heap(entries_.begin(), entries_.end(), better);
  if (entries_.size() > static_cast<std::size_t>(k_)) {
    std::pop_heap(entries_.begin(), entries_.end(), better);
    entries_.pop_back();
  }
}

AnswerSet BoundedHeap::take() {
  AnswerSet answer;
  answer.members = std::move(entries_);
  entries_.clear();
  std::sort(answer.members.begin(), answer.members.end(),
            [](const ScoredTuple& a, const ScoredTuple& b) { return worse(b, a); });
  return answer;
}

namespace {

void require_simple_injective(const ProbRelation& rel, const ScoreAssignment& s) {
  if (!rel.simple()) throw NotSimpleError("relation is not simple");
  if (!s.injective()) throw NotInjectiveError("scoring function is not injective");
}

[[maybe_unused]] bool sorted_by_score_desc(const RankedView& ranked) {
  for (std::size_t i = 1; i < ranked.size(); ++i)
    if (ranked.score[i - 1] < ranked.score[i]) return false;
  return true;
}

}  // namespace

DPTable ind_topk_sub(const RankedView& ranked, int k) {
  assert(sorted_by_score_desc(ranked));
  return ind_topk_sub_kernel(ranked.prob, k);
}

std::vector<double> ind_topk_probs(const ProbRelation& rel,
                                   const ScoreAssignment& s, int k) {
  require_simple_injective(rel, s);
  RankedView ranked = rank(rel, s);
  std::vector<double> by_position(ranked.size(), 0.0);
  if (k > 0)
    ind_topk_sub_scan(ranked.prob, k, [&](std::size_t i, std::span<const double> column) {
      by_position[i - 1] = column[k];
    });
  std::vector<double> out(rel.size(), 0.0);
  for (std::size_t idx = 0; idx < rel.size(); ++idx)
    out[idx] = by_position[ranked.position(rel.tuples()[idx].id)];
  return out;
}

AnswerSet ind_topk(const ProbRelation& rel, const ScoreAssignment& s, int k) {
  require_simple_injective(rel, s);
  if (k <= 0) return {};
  RankedView ranked = rank(rel, s);
  BoundedHeap heap(k);
  ind_topk_sub_scan(ranked.prob, k, [&](std::size_t i, std::span<const double> column) {
    heap.push(ranked.order[i - 1], column[k]);
  });
  return heap.take();
}

}  // namespace ptopk
