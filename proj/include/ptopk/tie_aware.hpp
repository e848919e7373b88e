#ifndef PTOPK_TIE_AWARE_HPP
#define PTOPK_TIE_AWARE_HPP

#include <optional>
#include <span>
#include <vector>

#include "ptopk/dp_simple.hpp"
#include "ptopk/relation.hpp"

namespace ptopk {

// T(k, i): probability that exactly k of the i highest-scored tuples of a
// simple relation appear in a world. Read off a DP table computed under an
// order-preserving injective surrogate scoring:
//   T(0, i) = q(1, i+1) / p(t_{i+1})
//   T(k, i) = (q(k+1, i+1) - q(k, i+1)) / p(t_{i+1})
// with the empty-prefix convention T(0,0)=1, T(k>0,0)=0. `ranked_probs` are
// the same probabilities the table was built from. Requires k <= i <= n-1
// and a table with at least k+1 rows (IndexOutOfRange otherwise).
double big_t(const DPTable& dp, std::span<const double> ranked_probs, int k,
             std::size_t i);

// All-tie special case: every tuple ties with every other. The probability
// that t enters a top-k answer under Equal allocation,
//   p(t) * (sum_{j<=k} T(j-1, m-1) + sum_{j>k} (k/j) T(j-1, m-1)),
// T taken over the relation minus t. Returns p(t) outright when k >= m.
double all_tie_topk_prob(std::span<const double> other_probs, double p_t, int k);
double all_tie_topk_prob(const ProbRelation& tie_rel, int k, TupleId t);

// Simple relation, general scoring function: per-tuple Global-Topk
// probability under Equal allocation via the prefix-count decomposition
//   P(t_l) = sum_{k'=0}^{k-1} T(k', i_l) * P_tie(k-k', t_l),
// one shared outer DP plus one all-tie DP per tuple with tying peers.
std::vector<double> ind_topk_gen_probs(const ProbRelation& rel,
                                       const ScoreAssignment& s, int k);
AnswerSet ind_topk_gen(const ProbRelation& rel, const ScoreAssignment& s, int k);

/// Event-tuple pair induced per part: "a strictly higher tuple of the part
/// occurs" and "a tuple tying with t occurs". Exclusive within a pair,
/// independent across pairs; a pair is kept only if either probability is
/// positive, except the final self pair (0, p(t)) which is always present.
/// Zero-probability event tuples exist only here, never in user relations.
struct EventPair {
  std::optional<PartId> source;  // empty = the self pair
  double prob_succ = 0.0;
  double prob_sim = 0.0;
};

struct PairedEventRelation {
  std::vector<EventPair> pairs;  // self pair last
  // Number of pairs whose tie probability is positive.
  int b_max() const;
};

PairedEventRelation induce_event_relation_general(const ProbRelation& rel,
                                                  const ScoreAssignment& s,
                                                  TupleId t);

/// u_succ(k', i, b) / u_sim(k', i, b): probability that the succ (resp. sim)
/// tuple of pair i occurs, exactly k' tuples from pairs 1..i occur, and b of
/// them are sim tuples. Indices: k' in 0..m, i in 1..m, b in 0..b_max.
class MutualDPState {
 public:
  MutualDPState(int m, int b_max);
  double u_succ(int kprime, int i, int b) const;
  double u_sim(int kprime, int i, int b) const;
  int m() const { return m_; }
  int b_max() const { return b_max_; }

  double& succ_at(int kprime, int i, int b);
  double& sim_at(int kprime, int i, int b);

 private:
  std::size_t index(int kprime, int i, int b) const;
  int m_;
  int b_max_;
  std::vector<double> succ_, sim_;
};

// The mutual recursion over a paired event relation, full tables.
MutualDPState mutual_recursion(const PairedEventRelation& ev);

// Global-Topk probability of t in a general relation under a general scoring
// function: aggregate u_sim(., m, .) with coefficient 1 for k' <= k and
// (k-(k'-b))/b for k < k' <= k+b-1. Streaming over i, O(b_max * m) space.
double general_topk_prob(const ProbRelation& rel, int k,
                         const ScoreAssignment& s, TupleId t);

std::vector<double> general_topk_probs(const ProbRelation& rel,
                                       const ScoreAssignment& s, int k);
AnswerSet general_topk(const ProbRelation& rel, const ScoreAssignment& s, int k);

}  // namespace ptopk

#endif
