#ifndef PTOPK_POSTULATES_HPP
#define PTOPK_POSTULATES_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ptopk/relation.hpp"

namespace ptopk {

// A semantics under test maps a query to the complete collection of
// admissible top-k answer sets (deterministic semantics return one). Pure.
using AnswerCollection = std::vector<std::vector<TupleId>>;
using SemanticsFn = std::function<AnswerCollection(
    const ProbRelation&, const ScoreAssignment&, int k)>;

enum class Semantics { GlobalTopk, UTopk, UkRanks, PTk };

// Oracle-backed collection semantics. Deterministic engines are widened to
// co-winner collections: tuples whose scores of merit tie within `tie_tol`
// are interchangeable. PT-k needs p_tau.
SemanticsFn make_semantics(Semantics which, double p_tau = 0.0,
                           double tie_tol = 1e-12);

enum class Postulate { ExactK, Faithfulness, Stability };

struct Perturbation {
  TupleId tuple = 0;
  enum class Target { Score, Prob } target = Target::Score;
  enum class Direction { Raise, Lower } direction = Direction::Raise;
  double new_value = 0.0;
};

struct PostulateWitness {
  std::string description;
  std::vector<TupleId> answer_set;       // offending set, when applicable
  std::optional<Perturbation> perturbation;
};

struct PostulateVerdict {
  Postulate postulate;
  bool holds = true;
  std::optional<PostulateWitness> witness;  // present iff !holds
};

// Exact k: every answer set has cardinality exactly k (guarded on |C| >= k;
// vacuously true below the guard).
PostulateVerdict check_exact_k(const SemanticsFn& sem, const ProbRelation& rel,
                               const ScoreAssignment& s, int k);

// Faithfulness: a tuple dominated in both score and probability never enters
// an answer set its dominator is excluded from.
PostulateVerdict check_faithfulness(const SemanticsFn& sem,
                                    const ProbRelation& rel,
                                    const ScoreAssignment& s, int k);

// Stability: raising a winner (score or probability) keeps it in the winner
// union; lowering a loser keeps it out. Identity perturbations hold
// vacuously; a perturbation moving the value the wrong way, or a probability
// leaving (0,1], is an InvalidPerturbation.
PostulateVerdict check_stability(const SemanticsFn& sem, const ProbRelation& rel,
                                 const ScoreAssignment& s, int k,
                                 const std::vector<Perturbation>& perturbations);

// Union of all answer sets, sorted by id: the winner set of the dynamic
// postulate.
std::vector<TupleId> winner_union(const SemanticsFn& sem, const ProbRelation& rel,
                                  const ScoreAssignment& s, int k);

}  // namespace ptopk

#endif
