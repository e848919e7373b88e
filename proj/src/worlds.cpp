#include "ptopk/worlds.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>

#include "ptopk/errors.hpp"

namespace ptopk {
namespace {

struct PartChoices {
  std::vector<TupleId> members;
  std::vector<double> probs;
  double absent;  // 1 - sum of member probs, clamped at 0
};

std::vector<PartChoices> part_choices(const ProbRelation& rel) {
  std::vector<PartChoices> parts;
  parts.reserve(rel.parts().size());
  for (const auto& [part, members] : rel.parts()) {
    PartChoices pc;
    double sum = 0.0;
    for (TupleId id : members) {
      pc.members.push_back(id);
      pc.probs.push_back(rel.prob(id));
      sum += rel.prob(id);
    }
    pc.absent = std::max(0.0, 1.0 - sum);
    parts.push_back(std::move(pc));
  }
  return parts;
}

void require_injective(const ScoreAssignment& s) {
  if (!s.injective())
    throw NotInjectiveError("NonInjectiveScores: this semantics is defined for injective scoring only");
}

// a = strictly-higher count, b = tied count including the tuple itself.
double coefficient(std::size_t a, std::size_t b, int k) {
  if (static_cast<long long>(a) >= k) return 0.0;
  if (a + b <= static_cast<std::size_t>(k)) return 1.0;
  return static_cast<double>(k - static_cast<long long>(a)) / static_cast<double>(b);
}

}  // namespace

std::size_t default_world_cap() {
  static const std::size_t cap = [] {
    if (const char* env = std::getenv("PTOPK_WORLD_CAP")) {
      char* end = nullptr;
      unsigned long v = std::strtoul(env, &end, 10);
      if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return std::size_t{22};
  }();
  return cap;
}

std::vector<PossibleWorld> enumerate_worlds(const ProbRelation& rel) {
  return enumerate_worlds(rel, default_world_cap());
}

std::vector<PossibleWorld> enumerate_worlds(const ProbRelation& rel,
                                            std::size_t part_cap) {
  if (rel.parts().size() > part_cap)
    throw TooLargeError("relation has " + std::to_string(rel.parts().size()) +
                        " parts, enumeration cap is " + std::to_string(part_cap));

  std::vector<PartChoices> parts = part_choices(rel);
  std::vector<PossibleWorld> worlds;
  std::vector<TupleId> current;
  // Depth-first over per-part choices, carrying the probability product.
  std::function<void(std::size_t, double)> walk = [&](std::size_t depth, double prob) {
    if (depth == parts.size()) {
      worlds.push_back({current, prob});
      return;
    }
    const PartChoices& pc = parts[depth];
    if (pc.absent > 0.0) walk(depth + 1, prob * pc.absent);
    for (std::size_t i = 0; i < pc.members.size(); ++i) {
      if (pc.probs[i] <= 0.0) continue;
      current.push_back(pc.members[i]);
      walk(depth + 1, prob * pc.probs[i]);
      current.pop_back();
    }
  };
  walk(0, 1.0);
  return worlds;
}

std::vector<std::vector<TupleId>> topk_answer_sets(
    const std::vector<TupleId>& world, int k, const ScoreAssignment& s) {
  std::vector<TupleId> sorted = world;
  std::sort(sorted.begin(), sorted.end(), [&](TupleId a, TupleId b) {
    double sa = s.score(a), sb = s.score(b);
    if (sa != sb) return sa > sb;
    return a < b;
  });

  const std::size_t take = std::min<std::size_t>(sorted.size(),
                                                 k < 0 ? 0 : static_cast<std::size_t>(k));
  if (take == sorted.size())
    return {[&] {
      std::vector<TupleId> all = sorted;
      std::sort(all.begin(), all.end());
      return all;
    }()};

  // Members strictly above the boundary tie group are mandatory; the group
  // straddling the boundary contributes every r-subset.
  std::size_t group_begin = take;
  while (group_begin > 0 && s.score(sorted[group_begin - 1]) == s.score(sorted[take]))
    --group_begin;
  std::size_t group_end = take;
  while (group_end < sorted.size() && s.score(sorted[group_end]) == s.score(sorted[take]))
    ++group_end;
  if (group_begin == take) {
    // No straddle: boundary falls exactly between groups.
    std::vector<TupleId> set(sorted.begin(), sorted.begin() + take);
    std::sort(set.begin(), set.end());
    return {set};
  }

  std::vector<TupleId> mandatory(sorted.begin(), sorted.begin() + group_begin);
  std::vector<TupleId> group(sorted.begin() + group_begin, sorted.begin() + group_end);
  std::sort(group.begin(), group.end());
  const std::size_t r = take - group_begin;

  std::vector<std::vector<TupleId>> sets;
  std::vector<std::size_t> pick(r);
  for (std::size_t i = 0; i < r; ++i) pick[i] = i;
  while (true) {
    std::vector<TupleId> set = mandatory;
    for (std::size_t i : pick) set.push_back(group[i]);
    std::sort(set.begin(), set.end());
    sets.push_back(std::move(set));
    // next combination of r indices out of group.size()
    std::size_t i = r;
    while (i > 0 && pick[i - 1] == group.size() - r + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < r; ++j) pick[j] = pick[j - 1] + 1;
  }
  std::sort(sets.begin(), sets.end());
  return sets;
}

double allocation_coefficient(TupleId t, const PossibleWorld& world, int k,
                              const ScoreAssignment& s) {
  const double st = s.score(t);
  std::size_t a = 0, b = 0;
  bool present = false;
  for (TupleId other : world.members) {
    if (other == t) present = true;
    double so = s.score(other);
    if (so > st)
      ++a;
    else if (so == st)
      ++b;  // includes t itself
  }
  if (!present) throw Error("allocation coefficient: tuple not in world");
  return coefficient(a, b, k);
}

TopkProbVector global_topk_oracle(const ProbRelation& rel, int k,
                                  const ScoreAssignment& s) {
  TopkProbVector result;
  for (const TupleRecord& t : rel.tuples()) result[t.id] = 0.0;
  if (k <= 0) return result;

  for (const PossibleWorld& w : enumerate_worlds(rel)) {
    std::vector<TupleId> sorted = w.members;
    std::sort(sorted.begin(), sorted.end(), [&](TupleId a, TupleId b) {
      return s.score(a) > s.score(b);
    });
    std::size_t i = 0;
    while (i < sorted.size()) {
      std::size_t j = i + 1;
      while (j < sorted.size() && s.score(sorted[j]) == s.score(sorted[i])) ++j;
      double alpha = coefficient(i, j - i, k);
      if (alpha > 0.0)
        for (std::size_t l = i; l < j; ++l) result[sorted[l]] += alpha * w.prob;
      i = j;
    }
  }
  return result;
}

AnswerSet utopk_oracle(const ProbRelation& rel, int k,
                       const ScoreAssignment& s) {
  require_injective(s);
  std::map<std::vector<TupleId>, double> set_probs;
  for (const PossibleWorld& w : enumerate_worlds(rel)) {
    auto sets = topk_answer_sets(w.members, k, s);
    set_probs[sets.front()] += w.prob;  // unique under injective scoring
  }
  const std::vector<TupleId>* best = nullptr;
  double best_prob = -1.0;
  for (const auto& [set, prob] : set_probs) {
    if (prob > best_prob) {
      best = &set;
      best_prob = prob;
    }
    // map order already gives the lexicographically smallest set of equals
  }
  AnswerSet answer;
  if (best)
    for (TupleId id : *best) answer.members.push_back({id, best_prob});
  return answer;
}

RankTable ukranks_rank_table(const ProbRelation& rel, int k,
                             const ScoreAssignment& s) {
  require_injective(s);
  RankTable table(k > 0 ? static_cast<std::size_t>(k) : 0);
  for (auto& row : table)
    for (const TupleRecord& t : rel.tuples()) row[t.id] = 0.0;

  for (const PossibleWorld& w : enumerate_worlds(rel)) {
    std::vector<TupleId> sorted = w.members;
    std::sort(sorted.begin(), sorted.end(), [&](TupleId a, TupleId b) {
      return s.score(a) > s.score(b);
    });
    const std::size_t limit = std::min(sorted.size(), table.size());
    for (std::size_t r = 0; r < limit; ++r) table[r][sorted[r]] += w.prob;
  }
  return table;
}

std::vector<TupleId> ukranks_oracle(const ProbRelation& rel, int k,
                                    const ScoreAssignment& s) {
  RankTable table = ukranks_rank_table(rel, k, s);
  std::vector<TupleId> winners;
  winners.reserve(table.size());
  for (const auto& row : table) {
    TupleId best = 0;
    double best_prob = 0.0;
    bool found = false;
    for (const auto& [id, prob] : row) {
      if (prob > best_prob) {  // ties keep the smallest id (map order)
        best = id;
        best_prob = prob;
        found = true;
      }
    }
    // A rank nobody reaches with positive probability has no winner.
    if (found) winners.push_back(best);
  }
  return winners;
}

std::vector<TupleId> ptk_oracle(const ProbRelation& rel, int k,
                                const ScoreAssignment& s, double p_tau) {
  require_injective(s);
  if (!(p_tau > 0.0) || !(p_tau <= 1.0))
    throw Error("p_tau must be in (0,1]");
  std::vector<TupleId> result;
  for (const auto& [id, prob] : global_topk_oracle(rel, k, s))
    if (prob >= p_tau) result.push_back(id);
  return result;
}

}  // namespace ptopk
