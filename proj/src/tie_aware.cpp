#include "ptopk/tie_aware.hpp"

#include <algorithm>
#include <cassert>
#include <unordered_map>

#include "ptopk/errors.hpp"

namespace ptopk {

double big_t(const DPTable& dp, std::span<const double> ranked_probs, int k,
             std::size_t i) {
  if (i == 0) return k == 0 ? 1.0 : 0.0;
  if (k < 0 || static_cast<std::size_t>(k) > i || i >= ranked_probs.size())
    throw IndexOutOfRangeError("big_t requires 0 <= k <= i <= n-1");
  if (dp.k() < k + 1)
    throw IndexOutOfRangeError("DP table too shallow for big_t; need k+1 rows");
  const double p_next = ranked_probs[i];  // p(t_{i+1}), columns are 1-based
  return (dp.q(k + 1, i + 1) - dp.q(k, i + 1)) / p_next;
}

double all_tie_topk_prob(std::span<const double> other_probs, double p_t, int k) {
  if (k <= 0) return 0.0;
  const int m = static_cast<int>(other_probs.size()) + 1;
  if (k >= m) return p_t;

  // DP over the tie relation with t placed last, full m rows.
  std::vector<double> probs(other_probs.begin(), other_probs.end());
  probs.push_back(p_t);
  DPTable dp = ind_topk_sub_kernel(probs, m);

  // T[j] = probability that exactly j of the other m-1 tuples appear.
  std::vector<double> t_values(m);
  for (int j = 0; j < m; ++j)
    t_values[j] = (dp.q(j + 1, m) - dp.q(j, m)) / p_t;

  double sum = 0.0;
  for (int j = 1; j <= k; ++j) sum += t_values[j - 1];
  for (int j = k + 1; j <= m; ++j)
    sum += static_cast<double>(k) / static_cast<double>(j) * t_values[j - 1];
  return p_t * sum;
}

double all_tie_topk_prob(const ProbRelation& tie_rel, int k, TupleId t) {
  if (!tie_rel.simple()) throw NotSimpleError("tie relation must be simple");
  std::vector<double> others;
  others.reserve(tie_rel.size());
  double p_t = 0.0;
  for (const TupleRecord& rec : tie_rel.tuples()) {
    if (rec.id == t)
      p_t = rec.prob;
    else
      others.push_back(rec.prob);
  }
  if (others.size() == tie_rel.size())
    throw Error("tuple " + std::to_string(t) + " not in the tie relation");
  return all_tie_topk_prob(others, p_t, k);
}

std::vector<double> ind_topk_gen_probs(const ProbRelation& rel,
                                       const ScoreAssignment& s, int k) {
  if (!rel.simple()) throw NotSimpleError("relation is not simple");
  std::vector<double> out(rel.size(), 0.0);
  if (k <= 0 || rel.empty()) return out;

  RankedView ranked = rank(rel, s);
  const std::size_t n = ranked.size();
  // Outer DP under the order-preserving injective surrogate; k+1 rows so
  // big_t can reach row k'+1 for k' up to k-1... the kernel with parameter k
  // already holds rows 0..k, exactly enough.
  DPTable outer = ind_topk_sub_kernel(ranked.prob, k);

  std::vector<double> by_position(n, 0.0);
  for (std::size_t l = 0; l < n; ++l) {
    const std::size_t i_l = ranked.group_begin[l];
    const std::size_t j_l = ranked.group_end[l];
    const std::size_t m = j_l - i_l;
    if (m == 1) {
      by_position[l] = outer.q(k, l + 1);
      continue;
    }

    // Tie-group peers of t_l, probabilities only.
    std::vector<double> others;
    others.reserve(m - 1);
    for (std::size_t pos = i_l; pos < j_l; ++pos)
      if (pos != l) others.push_back(ranked.prob[pos]);
    const double p_t = ranked.prob[l];

    // P_tie(k'') for every k'' we may need, one tie DP.
    std::vector<double> p_tie(static_cast<std::size_t>(k) + 1, 0.0);
    for (int kpp = 1; kpp <= k; ++kpp)
      p_tie[kpp] = all_tie_topk_prob(others, p_t, kpp);

    double total = 0.0;
    for (int kp = 0; kp < k; ++kp) {
      if (static_cast<std::size_t>(kp) > i_l) break;  // T(k',i_l) = 0 beyond
      double t_val;
      if (i_l == 0)
        t_val = kp == 0 ? 1.0 : 0.0;
      else
        t_val = (outer.q(kp + 1, i_l + 1) - outer.q(kp, i_l + 1)) / ranked.prob[i_l];
      total += t_val * p_tie[k - kp];
    }
    by_position[l] = total;
  }

  for (std::size_t idx = 0; idx < rel.size(); ++idx)
    out[idx] = by_position[ranked.position(rel.tuples()[idx].id)];
  return out;
}

AnswerSet ind_topk_gen(const ProbRelation& rel, const ScoreAssignment& s, int k) {
  std::vector<double> probs = ind_topk_gen_probs(rel, s, k);
  BoundedHeap heap(k);
  for (std::size_t idx = 0; idx < rel.size(); ++idx)
    heap.push(rel.tuples()[idx].id, probs[idx]);
  return heap.take();
}

int PairedEventRelation::b_max() const {
  int count = 0;
  for (const EventPair& pair : pairs)
    if (pair.prob_sim > 0.0) ++count;
  return count;
}

PairedEventRelation induce_event_relation_general(const ProbRelation& rel,
                                                  const ScoreAssignment& s,
                                                  TupleId t) {
  RankedView ranked = rank(rel, s);
  const std::size_t target = ranked.position(t);
  const PartId own = ranked.part[target];
  const std::size_t higher_end = ranked.group_begin[target];
  const std::size_t tie_end = ranked.group_end[target];

  std::vector<PartId> encounter;
  std::unordered_map<PartId, std::pair<double, double>> sums;  // succ, sim
  for (std::size_t pos = 0; pos < tie_end; ++pos) {
    if (pos == target) continue;
    const PartId part = ranked.part[pos];
    if (part == own) continue;
    auto [it, inserted] = sums.emplace(part, std::make_pair(0.0, 0.0));
    if (inserted) encounter.push_back(part);
    if (pos < higher_end)
      it->second.first += ranked.prob[pos];
    else
      it->second.second += ranked.prob[pos];
  }

  PairedEventRelation out;
  for (PartId part : encounter) {
    const auto& [succ, sim] = sums[part];
    if (succ == 0.0 && sim == 0.0) continue;  // postprocess step
    out.pairs.push_back({part, succ, sim});
  }
  out.pairs.push_back({std::nullopt, 0.0, ranked.prob[target]});
  return out;
}

namespace {

// u values for a fixed pair index i: (m+1) x (b_max+1) each.
struct Plane {
  int m, b_cap;
  std::vector<double> succ, sim;
  Plane(int m_, int b_cap_)
      : m(m_), b_cap(b_cap_),
        succ(static_cast<std::size_t>(m_ + 1) * (b_cap_ + 1), 0.0),
        sim(static_cast<std::size_t>(m_ + 1) * (b_cap_ + 1), 0.0) {}
  std::size_t at(int kp, int b) const {
    return static_cast<std::size_t>(kp) * (b_cap + 1) + b;
  }
};

Plane initial_plane(const PairedEventRelation& ev, int b_max) {
  const int m = static_cast<int>(ev.pairs.size());
  Plane plane(m, b_max);
  plane.succ[plane.at(1, 0)] = ev.pairs[0].prob_succ;
  if (b_max >= 1) plane.sim[plane.at(1, 1)] = ev.pairs[0].prob_sim;
  return plane;
}

// One step of the mutual recursion: the plane for pair i from the plane for
// pair i-1 (i is the 0-based index of the new pair).
Plane advance_plane(const Plane& prev, const PairedEventRelation& ev, int i) {
  const int m = prev.m, b_max = prev.b_cap;
  const double ps_prev = ev.pairs[i - 1].prob_succ;
  const double pm_prev = ev.pairs[i - 1].prob_sim;
  const double ps = ev.pairs[i].prob_succ;
  const double pm = ev.pairs[i].prob_sim;
  const double gap = 1.0 - ps_prev - pm_prev;  // pair absent entirely
  // Pairs surviving the postprocess step carry positive mass somewhere.
  assert(ps_prev > 0.0 || pm_prev > 0.0);

  Plane next(m, b_max);
  for (int kp = 1; kp <= m; ++kp) {
    for (int b = 0; b <= b_max; ++b) {
      // "pair i-1 absent, k'-1 tuples among pairs 1..i-2, b ties" expressed
      // through whichever of the pair's tuples carries positive probability.
      double absent;
      if (ps_prev > 0.0)
        absent = prev.succ[prev.at(kp, b)] * gap / ps_prev;
      else
        absent = b < b_max ? prev.sim[prev.at(kp, b + 1)] * gap / pm_prev : 0.0;
      next.succ[next.at(kp, b)] =
          (absent + prev.succ[prev.at(kp - 1, b)] + prev.sim[prev.at(kp - 1, b)]) * ps;

      if (b >= 1) {
        double absent_sim;
        if (pm_prev > 0.0)
          absent_sim = prev.sim[prev.at(kp, b)] * gap / pm_prev;
        else
          absent_sim = prev.succ[prev.at(kp, b - 1)] * gap / ps_prev;
        next.sim[next.at(kp, b)] = (absent_sim + prev.succ[prev.at(kp - 1, b - 1)] +
                                    prev.sim[prev.at(kp - 1, b - 1)]) *
                                   pm;
      }
    }
  }
  return next;
}

double aggregate(const Plane& final_plane, int k) {
  if (k <= 0) return 0.0;
  const int m = final_plane.m, b_max = final_plane.b_cap;
  double total = 0.0;
  for (int b = 1; b <= b_max; ++b) {
    for (int kp = 1; kp <= std::min(k, m); ++kp)
      total += final_plane.sim[final_plane.at(kp, b)];
    for (int kp = k + 1; kp <= std::min(k + b - 1, m); ++kp)
      total += static_cast<double>(k - (kp - b)) / static_cast<double>(b) *
               final_plane.sim[final_plane.at(kp, b)];
  }
  return total;
}

}  // namespace

MutualDPState::MutualDPState(int m, int b_max)
    : m_(m), b_max_(b_max),
      succ_(static_cast<std::size_t>(m + 1) * m * (b_max + 1), 0.0),
      sim_(succ_.size(), 0.0) {}

std::size_t MutualDPState::index(int kprime, int i, int b) const {
  assert(kprime >= 0 && kprime <= m_ && i >= 1 && i <= m_ && b >= 0 && b <= b_max_);
  return (static_cast<std::size_t>(i - 1) * (m_ + 1) + kprime) * (b_max_ + 1) + b;
}

double MutualDPState::u_succ(int kprime, int i, int b) const {
  return succ_[index(kprime, i, b)];
}
double MutualDPState::u_sim(int kprime, int i, int b) const {
  return sim_[index(kprime, i, b)];
}
double& MutualDPState::succ_at(int kprime, int i, int b) {
  return succ_[index(kprime, i, b)];
}
double& MutualDPState::sim_at(int kprime, int i, int b) {
  return sim_[index(kprime, i, b)];
}

MutualDPState mutual_recursion(const PairedEventRelation& ev) {
  const int m = static_cast<int>(ev.pairs.size());
  const int b_max = ev.b_max();
  MutualDPState state(m, b_max);
  Plane plane = initial_plane(ev, b_max);
  for (int i = 1; i <= m; ++i) {
    if (i > 1) plane = advance_plane(plane, ev, i - 1);
    for (int kp = 0; kp <= m; ++kp)
      for (int b = 0; b <= b_max; ++b) {
        state.succ_at(kp, i, b) = plane.succ[plane.at(kp, b)];
        state.sim_at(kp, i, b) = plane.sim[plane.at(kp, b)];
      }
  }
  return state;
}

double general_topk_prob(const ProbRelation& rel, int k,
                         const ScoreAssignment& s, TupleId t) {
  if (k <= 0) return 0.0;
  PairedEventRelation ev = induce_event_relation_general(rel, s, t);
  const int m = static_cast<int>(ev.pairs.size());
  const int b_max = ev.b_max();
  Plane plane = initial_plane(ev, b_max);
  for (int i = 1; i < m; ++i) plane = advance_plane(plane, ev, i);
  return aggregate(plane, k);
}

std::vector<double> general_topk_probs(const ProbRelation& rel,
                                       const ScoreAssignment& s, int k) {
  std::vector<double> out(rel.size(), 0.0);
  for (std::size_t idx = 0; idx < rel.size(); ++idx)
    out[idx] = general_topk_prob(rel, k, s, rel.tuples()[idx].id);
  return out;
}

AnswerSet general_topk(const ProbRelation& rel, const ScoreAssignment& s, int k) {
  std::vector<double> probs = general_topk_probs(rel, s, k);
  BoundedHeap heap(k);
  for (std::size_t idx = 0; idx < rel.size(); ++idx)
    heap.push(rel.tuples()[idx].id, probs[idx]);
  return heap.take();
}

}  // namespace ptopk
