#ifndef PTOPK_RELATION_HPP
#define PTOPK_RELATION_HPP

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ptopk {

using TupleId = std::uint64_t;
using PartId = std::uint64_t;

// Tolerance for the per-part probability-sum check on input data. Stored
// values are never renormalized.
inline constexpr double kPartSumTolerance = 1e-12;

struct TupleRecord {
  TupleId id = 0;
  PartId part = 0;
  double prob = 0.0;  // existence probability, in (0,1]
  // Opaque display-only attributes (extra file columns); never used by the
  // engines.
  std::map<std::string, std::string> payload;
};

/// A probabilistic relation: support tuples, a probability function and an
/// exclusivity partition. Tuples in the same part are mutually exclusive,
/// tuples in different parts independent. Immutable after construction.
class ProbRelation {
 public:
  ProbRelation() = default;
  explicit ProbRelation(std::vector<TupleRecord> tuples);

  const std::vector<TupleRecord>& tuples() const { return tuples_; }
  std::size_t size() const { return tuples_.size(); }
  bool empty() const { return tuples_.empty(); }

  // PartId -> member tuple ids, in tuple order. Covers every tuple.
  const std::map<PartId, std::vector<TupleId>>& parts() const { return parts_; }

  bool contains(TupleId id) const { return index_.count(id) != 0; }
  const TupleRecord& tuple(TupleId id) const;
  double prob(TupleId id) const { return tuple(id).prob; }
  PartId part_of(TupleId id) const { return tuple(id).part; }
  std::size_t part_size(PartId part) const;

  // True iff every part is a singleton (all tuples independent).
  bool simple() const;

 private:
  std::vector<TupleRecord> tuples_;
  std::map<PartId, std::vector<TupleId>> parts_;
  std::unordered_map<TupleId, std::size_t> index_;
};

/// Per-tuple real score. Induces the preference (>) and indifference (=)
/// relations used by every engine.
class ScoreAssignment {
 public:
  ScoreAssignment() = default;
  explicit ScoreAssignment(std::map<TupleId, double> scores)
      : scores_(std::move(scores)) {}

  void set(TupleId id, double score) { scores_[id] = score; }
  bool has(TupleId id) const { return scores_.count(id) != 0; }
  double score(TupleId id) const;
  const std::map<TupleId, double>& scores() const { return scores_; }

  // True iff all assigned scores are pairwise distinct.
  bool injective() const;
  bool total_over(const ProbRelation& rel) const;

 private:
  std::map<TupleId, double> scores_;
};

struct Violation {
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

// Report-style: lists every violated invariant (probability domain, part
// sums, duplicate ids). Empty report iff the relation is valid.
ValidationReport validate(const ProbRelation& rel);

/// Tuples sorted by (score desc, id asc) with tie-group bookkeeping.
/// For the tuple at 0-based position pos, strictly_higher(pos) is the number
/// of strictly higher-scored tuples (the paper's i_l) and higher_or_equal(pos)
/// the number of higher-or-equal ones (j_l); both are shared by all members
/// of a tie group.
struct RankedView {
  std::vector<TupleId> order;
  std::vector<double> score;    // aligned with order
  std::vector<double> prob;     // aligned with order
  std::vector<PartId> part;     // aligned with order
  std::vector<std::size_t> group_begin;  // i_l, aligned with order
  std::vector<std::size_t> group_end;    // j_l, aligned with order
  // Maximal runs of equal score, half-open [begin, end) position ranges.
  std::vector<std::pair<std::size_t, std::size_t>> tie_groups;

  std::size_t size() const { return order.size(); }
  std::size_t strictly_higher(std::size_t pos) const { return group_begin[pos]; }
  std::size_t higher_or_equal(std::size_t pos) const { return group_end[pos]; }
  std::size_t position(TupleId id) const;
  bool has_ties() const;

  std::unordered_map<TupleId, std::size_t> position_index;
};

// Stable order: score desc, ties by id asc. The id tie-break is only a
// deterministic traversal order; the semantics of tied tuples is handled by
// the allocation machinery, never by this order.
// Throws MissingScoreError if any tuple is unscored, Error on a non-finite
// score.
RankedView rank(const ProbRelation& rel, const ScoreAssignment& s);

/// A query answer: members with their score of merit (Global-Topk
/// probability, or the answer-set probability for U-Topk), sorted by
/// (merit desc, id asc).
struct ScoredTuple {
  TupleId id;
  double prob;
};

struct AnswerSet {
  std::vector<ScoredTuple> members;
  std::size_t size() const { return members.size(); }
  std::vector<TupleId> ids() const;
  bool contains(TupleId id) const;
};

}  // namespace ptopk

#endif
