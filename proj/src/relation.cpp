#include "ptopk/relation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ptopk/errors.hpp"

namespace ptopk {

ProbRelation::ProbRelation(std::vector<TupleRecord> tuples)
    : tuples_(std::move(tuples)) {
  for (std::size_t i = 0; i < tuples_.size(); ++i) {
    const TupleRecord& t = tuples_[i];
    parts_[t.part].push_back(t.id);
    index_.emplace(t.id, i);  // duplicates keep the first slot; validate() reports them
  }
}

const TupleRecord& ProbRelation::tuple(TupleId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw Error("unknown tuple id " + std::to_string(id));
  return tuples_[it->second];
}

std::size_t ProbRelation::part_size(PartId part) const {
  auto it = parts_.find(part);
  return it == parts_.end() ? 0 : it->second.size();
}

bool ProbRelation::simple() const {
  for (const auto& [part, members] : parts_)
    if (members.size() > 1) return false;
  return true;
}

double ScoreAssignment::score(TupleId id) const {
  auto it = scores_.find(id);
  if (it == scores_.end())
    throw MissingScoreError("no score for tuple " + std::to_string(id));
  return it->second;
}

bool ScoreAssignment::injective() const {
  std::vector<double> values;
  values.reserve(scores_.size());
  for (const auto& [id, s] : scores_) values.push_back(s);
  std::sort(values.begin(), values.end());
  return std::adjacent_find(values.begin(), values.end()) == values.end();
}

bool ScoreAssignment::total_over(const ProbRelation& rel) const {
  for (const TupleRecord& t : rel.tuples())
    if (!has(t.id)) return false;
  return true;
}

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const Violation& v : violations) out << v.message << '\n';
  return out.str();
}

ValidationReport validate(const ProbRelation& rel) {
  ValidationReport report;
  auto flag = [&](std::string msg) { report.violations.push_back({std::move(msg)}); };

  std::unordered_map<TupleId, std::size_t> seen;
  for (const TupleRecord& t : rel.tuples()) {
    if (++seen[t.id] == 2)
      flag("duplicate tuple id " + std::to_string(t.id));
    if (!(t.prob > 0.0) || !(t.prob <= 1.0) || !std::isfinite(t.prob))
      flag("tuple " + std::to_string(t.id) + ": prob out of (0,1]");
  }

  // Sum over records, not the id index, so duplicate ids still count.
  std::map<PartId, double> sums;
  for (const TupleRecord& t : rel.tuples()) sums[t.part] += t.prob;
  for (const auto& [part, sum] : sums) {
    if (sum > 1.0 + kPartSumTolerance) {
      std::ostringstream msg;
      msg << "part " << part << ": part sum " << sum << " > 1";
      flag(msg.str());
    }
  }
  return report;
}

std::size_t RankedView::position(TupleId id) const {
  auto it = position_index.find(id);
  if (it == position_index.end())
    throw Error("tuple " + std::to_string(id) + " not in ranked view");
  return it->second;
}

bool RankedView::has_ties() const {
  for (const auto& [b, e] : tie_groups)
    if (e - b > 1) return true;
  return false;
}

RankedView rank(const ProbRelation& rel, const ScoreAssignment& s) {
  RankedView view;
  const std::size_t n = rel.size();
  view.order.reserve(n);
  for (const TupleRecord& t : rel.tuples()) {
    double sc = s.score(t.id);  // throws MissingScoreError
    if (!std::isfinite(sc))
      throw Error("non-finite score for tuple " + std::to_string(t.id));
    view.order.push_back(t.id);
  }
  std::sort(view.order.begin(), view.order.end(), [&](TupleId a, TupleId b) {
    double sa = s.score(a), sb = s.score(b);
    if (sa != sb) return sa > sb;
    return a < b;
  });

  view.score.resize(n);
  view.prob.resize(n);
  view.part.resize(n);
  view.group_begin.resize(n);
  view.group_end.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const TupleRecord& t = rel.tuple(view.order[i]);
    view.score[i] = s.score(t.id);
    view.prob[i] = t.prob;
    view.part[i] = t.part;
    view.position_index.emplace(t.id, i);
  }

  std::size_t begin = 0;
  while (begin < n) {
    std::size_t end = begin + 1;
    while (end < n && view.score[end] == view.score[begin]) ++end;
    view.tie_groups.emplace_back(begin, end);
    for (std::size_t i = begin; i < end; ++i) {
      view.group_begin[i] = begin;
      view.group_end[i] = end;
    }
    begin = end;
  }
  return view;
}

std::vector<TupleId> AnswerSet::ids() const {
  std::vector<TupleId> out;
  out.reserve(members.size());
  for (const ScoredTuple& m : members) out.push_back(m.id);
  return out;
}

bool AnswerSet::contains(TupleId id) const {
  return std::any_of(members.begin(), members.end(),
                     [&](const ScoredTuple& m) { return m.id == id; });
}

}  // namespace ptopk
