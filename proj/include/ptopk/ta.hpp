#ifndef PTOPK_TA_HPP
#define PTOPK_TA_HPP

#include <cstddef>
#include <vector>

#include "ptopk/relation.hpp"

namespace ptopk {

/// Two sorted access paths over one simple relation: T in score-descending
/// order (drives the DP) and P in probability-descending order (supplies the
/// threshold bound). Built in memory; the probability path plays the role of
/// an index on probability.
struct SortedAccess {
  RankedView by_score;
  std::vector<std::size_t> by_prob;  // positions into by_score, prob desc, id asc
};

SortedAccess make_sorted_access(const ProbRelation& rel, const ScoreAssignment& s);

struct TAStats {
  std::size_t tuples_examined = 0;  // tuples read from the score path
  std::size_t stop_index = 0;       // 1-based position in T at termination
};

// Threshold-guided evaluation. Walks T, filling DP columns and maintaining
// the running answer; after k tuples have been seen, every step advances P
// past seen tuples and stops as soon as
//   UP = (q(k,i) * (1-p(t_i))/p(t_i) + q(k-1,i)) * underline(p) <= LB_Ans,
// underline(p) being the highest probability among unseen tuples. The answer
// probability multiset is identical to ind_topk's.
std::pair<AnswerSet, TAStats> ta_ind_topk(const SortedAccess& access, int k);

// Convenience wrapper: checks the simple/injective domain and builds the
// access paths.
std::pair<AnswerSet, TAStats> ta_ind_topk(const ProbRelation& rel,
                                          const ScoreAssignment& s, int k);

}  // namespace ptopk

#endif
