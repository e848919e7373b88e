#ifndef PTOPK_WORLDS_HPP
#define PTOPK_WORLDS_HPP

#include <map>
#include <vector>

#include "ptopk/relation.hpp"

namespace ptopk {

struct PossibleWorld {
  std::vector<TupleId> members;  // at most one per part
  double prob = 0.0;             // product formula, > 0
};

// Per-tuple Global-Topk probability, exhaustively computed.
using TopkProbVector = std::map<TupleId, double>;

// Enumeration cap, counted in parts. Default 22; the PTOPK_WORLD_CAP
// environment variable overrides it.
std::size_t default_world_cap();

// All possible worlds (zero-probability combinations omitted). Probabilities
// sum to 1 for a valid relation. Throws TooLargeError beyond the cap.
std::vector<PossibleWorld> enumerate_worlds(const ProbRelation& rel);
std::vector<PossibleWorld> enumerate_worlds(const ProbRelation& rel,
                                            std::size_t part_cap);

// All top-k answer sets of a deterministic world: every set of
// min(k, |world|) members that no excluded member outranks. Exactly one set
// unless a tie group straddles the k-boundary. Sets are sorted by id and
// listed in lexicographic order.
std::vector<std::vector<TupleId>> topk_answer_sets(
    const std::vector<TupleId>& world, int k, const ScoreAssignment& s);

// Equal-allocation coefficient of t in a world: with a = |strictly higher in
// world| and b = |tied in world, t included|, returns 1 when a<k and a+b<=k,
// (k-a)/b when a<k and a+b>k, and 0 when a>=k. The ratio is formed from the
// integer counts and divided once.
double allocation_coefficient(TupleId t, const PossibleWorld& world, int k,
                              const ScoreAssignment& s);

// Exact Global-Topk probabilities by full enumeration, Equal allocation.
// For injective scores every coefficient is 1.
TopkProbVector global_topk_oracle(const ProbRelation& rel, int k,
                                  const ScoreAssignment& s);

// Reference implementations of the competing semantics; injective scores
// only (NonInjectiveScores otherwise, surfaced as NotInjectiveError).

// Most probable top-k answer set; ties broken by the lexicographically
// smallest id sequence. The per-member merit is the set probability.
AnswerSet utopk_oracle(const ProbRelation& rel, int k,
                       const ScoreAssignment& s);

// Per-rank probability table: cell (r, t) is the probability that t is the
// r-th ranked tuple of a world's top-k answer, r = 1..k.
using RankTable = std::vector<std::map<TupleId, double>>;
RankTable ukranks_rank_table(const ProbRelation& rel, int k,
                             const ScoreAssignment& s);

// For each rank, the most probable tuple at that rank (ties by id asc);
// duplicates possible across ranks.
std::vector<TupleId> ukranks_oracle(const ProbRelation& rel, int k,
                                    const ScoreAssignment& s);

// Every tuple whose Global-Topk probability is at least p_tau, sorted by id.
std::vector<TupleId> ptk_oracle(const ProbRelation& rel, int k,
                                const ScoreAssignment& s, double p_tau);

}  // namespace ptopk

#endif
