#include "ptopk/ta.hpp"

#include <algorithm>
#include <numeric>

#include "ptopk/dp_simple.hpp"
#include "ptopk/errors.hpp"

namespace ptopk {

SortedAccess make_sorted_access(const ProbRelation& rel, const ScoreAssignment& s) {
  if (!rel.simple()) throw NotSimpleError("relation is not simple");
  if (!s.injective()) throw NotInjectiveError("scoring function is not injective");
  SortedAccess access;
  access.by_score = rank(rel, s);
  access.by_prob.resize(access.by_score.size());
  std::iota(access.by_prob.begin(), access.by_prob.end(), std::size_t{0});
  std::sort(access.by_prob.begin(), access.by_prob.end(),
            [&](std::size_t a, std::size_t b) {
              if (access.by_score.prob[a] != access.by_score.prob[b])
                return access.by_score.prob[a] > access.by_score.prob[b];
              return access.by_score.order[a] < access.by_score.order[b];
            });
  return access;
}

std::pair<AnswerSet, TAStats> ta_ind_topk(const SortedAccess& access, int k) {
  const RankedView& T = access.by_score;
  const std::size_t n = T.size();
  TAStats stats;
  if (k <= 0) return {AnswerSet{}, stats};

  BoundedHeap heap(k);
  std::vector<bool> seen(n, false);
  std::vector<double> column(static_cast<std::size_t>(k) + 1, 0.0);
  std::size_t p_cursor = 0;

  for (std::size_t pos = 0; pos < n; ++pos) {
    const double p = T.prob[pos];
    if (pos == 0) {
      for (int r = 1; r <= k; ++r) column[r] = p;
    } else {
      const double prev = T.prob[pos - 1];
      const double ratio = (1.0 - prev) / prev;
      for (int r = k; r >= 1; --r) column[r] = (column[r] * ratio + column[r - 1]) * p;
    }
    seen[pos] = true;
    heap.push(T.order[pos], column[k]);
    stats.tuples_examined = pos + 1;
    stats.stop_index = pos + 1;

    if (pos + 1 < static_cast<std::size_t>(k)) continue;

    // The tightest legal schedule: threshold check after every score-path
    // step once k tuples are in hand. Advancing P past seen tuples keeps
    // underline(p) the best probability any unseen tuple can have.
    while (p_cursor < n && seen[access.by_prob[p_cursor]]) ++p_cursor;
    if (p_cursor == n) break;  // nothing unseen remains
    const double underline_p = T.prob[access.by_prob[p_cursor]];
    const double up = (column[k] * (1.0 - p) / p + column[k - 1]) * underline_p;
    if (heap.size() == static_cast<std::size_t>(k) && up <= heap.worst_prob())
      break;
  }
  return {heap.take(), stats};
}

std::pair<AnswerSet, TAStats> ta_ind_topk(const ProbRelation& rel,
                                          const ScoreAssignment& s, int k) {
  return ta_ind_topk(make_sorted_access(rel, s), k);
}

}  // namespace ptopk
