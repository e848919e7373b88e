// Command-line surface: query a relation file under one of the four
// semantics, benchmark engines on synthetic workloads, generate workloads,
// and run the randomized verification suite.

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ptopk/dp_simple.hpp"
#include "ptopk/errors.hpp"
#include "ptopk/event_relation.hpp"
#include "ptopk/io.hpp"
#include "ptopk/rollback.hpp"
#include "ptopk/ta.hpp"
#include "ptopk/tie_aware.hpp"
#include "ptopk/verify.hpp"
#include "ptopk/worlds.hpp"

namespace {

using namespace ptopk;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitMismatch = 3;

const char* case_name(TransitionCase c) {
  switch (c) {
    case TransitionCase::Case1: return "case1";
    case TransitionCase::Case2: return "case2";
    case TransitionCase::Case3: return "case3";
  }
  return "?";
}

void print_rows(const AnswerSet& answer) {
  for (const ScoredTuple& m : answer.members)
    std::cout << m.id << '\t' << format_double(m.prob) << '\n';
}

void write_trace(const std::string& path, const RecomputeStats& stats) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << "step\tcase\tdepth\tcolumns_recomputed\n";
  for (const StepStat& s : stats.steps)
    out << s.step << '\t' << case_name(s.kind) << '\t' << s.depth << '\t'
        << s.columns_recomputed << '\n';
}

std::map<PartId, std::size_t> part_sizes_of(const ProbRelation& rel) {
  std::map<PartId, std::size_t> sizes;
  for (const auto& [part, members] : rel.parts()) sizes[part] = members.size();
  return sizes;
}

struct EngineOutput {
  AnswerSet answer;
  RecomputeStats stats;  // rollback engines only
  bool has_stats = false;
};

EngineOutput run_engine(const std::string& engine, const Dataset& data, int k) {
  EngineOutput out;
  if (engine == "oracle") {
    TopkProbVector probs = global_topk_oracle(data.rel, k, data.scores);
    BoundedHeap heap(k);
    for (const auto& [id, p] : probs) heap.push(id, p);
    out.answer = heap.take();
  } else if (engine == "basic") {
    out.answer = ind_topk(data.rel, data.scores, k);
  } else if (engine == "ta") {
    out.answer = ta_ind_topk(data.rel, data.scores, k).first;
  } else if (engine == "reduction") {
    out.answer = indexp_topk(data.rel, data.scores, k);
  } else if (engine == "rollback") {
    RollbackRun run = rollback_topk(data.rel, data.scores, k);
    out.answer = std::move(run.answers);
    out.stats = std::move(run.stats);
    out.has_stats = true;
  } else if (engine == "rollbacksort") {
    RollbackRun run = rollbacksort_topk(data.rel, data.scores, k, part_sizes_of(data.rel));
    out.answer = std::move(run.answers);
    out.stats = std::move(run.stats);
    out.has_stats = true;
  } else if (engine == "gen-simple") {
    out.answer = ind_topk_gen(data.rel, data.scores, k);
  } else if (engine == "gen-full") {
    out.answer = general_topk(data.rel, data.scores, k);
  } else {
    throw Error("unknown engine " + engine);
  }
  return out;
}

int cmd_query(const std::string& input, int k, const std::string& semantics,
              double tau, bool tau_set, const std::string& engine,
              const std::string& trace) {
  Dataset data;
  try {
    data = load_relation(input);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    if (semantics == "global-topk") {
      EngineOutput out = run_engine(engine, data, k);
      print_rows(out.answer);
      if (!trace.empty() && out.has_stats) write_trace(trace, out.stats);
      return kExitOk;
    }
    // The competing semantics exist as brute-force references only.
    if (engine != "oracle") {
      std::cerr << "error: semantics '" << semantics
                << "' is only available with --engine oracle\n";
      return kExitMismatch;
    }
    if (semantics == "u-topk") {
      print_rows(utopk_oracle(data.rel, k, data.scores));
      return kExitOk;
    }
    if (semantics == "u-kranks") {
      RankTable table = ukranks_rank_table(data.rel, k, data.scores);
      std::vector<TupleId> winners = ukranks_oracle(data.rel, k, data.scores);
      std::map<TupleId, double> merit;  // best probability over won ranks
      for (std::size_t r = 0; r < winners.size(); ++r) {
        double p = table[r][winners[r]];
        auto [it, inserted] = merit.emplace(winners[r], p);
        if (!inserted) it->second = std::max(it->second, p);
      }
      AnswerSet rows;
      for (const auto& [id, p] : merit) rows.members.push_back({id, p});
      std::sort(rows.members.begin(), rows.members.end(),
                [](const ScoredTuple& a, const ScoredTuple& b) {
                  if (a.prob != b.prob) return a.prob > b.prob;
                  return a.id < b.id;
                });
      print_rows(rows);
      return kExitOk;
    }
    if (semantics == "pt-k") {
      if (!tau_set) {
        std::cerr << "error: --semantics pt-k requires --tau\n";
        return kExitMismatch;
      }
      TopkProbVector probs = global_topk_oracle(data.rel, k, data.scores);
      AnswerSet rows;
      for (TupleId id : ptk_oracle(data.rel, k, data.scores, tau))
        rows.members.push_back({id, probs[id]});
      std::sort(rows.members.begin(), rows.members.end(),
                [](const ScoredTuple& a, const ScoredTuple& b) {
                  if (a.prob != b.prob) return a.prob > b.prob;
                  return a.id < b.id;
                });
      print_rows(rows);
      return kExitOk;
    }
    std::cerr << "error: unknown semantics '" << semantics << "'\n";
    return kExitMismatch;
  } catch (const NotSimpleError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitMismatch;
  } catch (const NotInjectiveError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitMismatch;
  } catch (const TooLargeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitMismatch;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitMismatch;
  }
}

WorkloadSpec parse_gen_spec(const std::string& text) {
  WorkloadSpec spec;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos
                                                                   : comma - pos);
    pos = comma == std::string::npos ? text.size() : comma + 1;
    std::size_t eq = item.find('=');
    if (eq == std::string::npos) throw Error("bad --gen item '" + item + "'");
    std::string key = item.substr(0, eq), value = item.substr(eq + 1);
    if (key == "n")
      spec.n = std::stoull(value);
    else if (key == "x")
      spec.x = std::stod(value);
    else if (key == "smax")
      spec.s_max = std::stoull(value);
    else if (key == "seed")
      spec.seed = std::stoull(value);
    else
      throw Error("unknown --gen key '" + key + "'");
  }
  return spec;
}

int cmd_bench(const std::string& gen, const std::string& engines_csv, int k,
              int repeat, const std::string& trace) {
  WorkloadSpec spec = parse_gen_spec(gen);
  Dataset data = generate(spec);

  std::vector<std::string> engines;
  std::size_t pos = 0;
  while (pos <= engines_csv.size()) {
    std::size_t comma = engines_csv.find(',', pos);
    engines.push_back(engines_csv.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }

  std::cout << "engine\tn\tx\tsmax\tseed\tk\trepeat\tmedian_ms\ttuples\trollbacks\tcolumns_recomputed\n";
  for (const std::string& engine : engines) {
    std::vector<double> times;
    EngineOutput last;
    for (int r = 0; r < repeat; ++r) {
      auto start = std::chrono::steady_clock::now();
      last = run_engine(engine, data, k);
      auto end = std::chrono::steady_clock::now();
      times.push_back(std::chrono::duration<double, std::milli>(end - start).count());
    }
    std::sort(times.begin(), times.end());
    const double median = times[times.size() / 2];
    std::size_t rollbacks = 0, columns = 0;
    if (last.has_stats) {
      columns = last.stats.total_columns_recomputed();
      for (const StepStat& s : last.stats.steps)
        if (s.kind == TransitionCase::Case3) ++rollbacks;
      if (!trace.empty()) write_trace(trace + "." + engine + ".tsv", last.stats);
    }
    std::cout << engine << '\t' << spec.n << '\t' << format_double(spec.x) << '\t'
              << spec.s_max << '\t' << spec.seed << '\t' << k << '\t' << repeat << '\t'
              << format_double(median) << '\t' << spec.n << '\t' << rollbacks << '\t'
              << columns << '\n';
  }
  return kExitOk;
}

int cmd_verify(std::uint64_t seed, int trials, int max_n,
               const std::string& engines_csv, const std::string& out_dir) {
  VerifyOptions opts;
  opts.seed = seed;
  opts.trials = trials;
  opts.max_n = max_n;
  opts.reproducer_dir = out_dir;
  if (!engines_csv.empty()) {
    std::size_t pos = 0;
    while (pos <= engines_csv.size()) {
      std::size_t comma = engines_csv.find(',', pos);
      opts.engines.push_back(engines_csv.substr(
          pos, comma == std::string::npos ? std::string::npos : comma - pos));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  VerifyReport report = run_verification(opts);
  std::cout << "trials\t" << report.trials << "\nfailures\t" << report.failures.size()
            << '\n';
  for (const VerifyFailure& f : report.failures)
    std::cerr << "FAIL " << f.property << " (k=" << f.k << "): " << f.detail
              << "\n  reproducer: " << f.reproducer_path << '\n';
  return report.ok() ? kExitOk : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Top-k query evaluation over probabilistic relations"};
  app.require_subcommand(1);

  // query
  std::string q_input, q_semantics = "global-topk", q_engine = "oracle", q_trace;
  int q_k = 0;
  double q_tau = 0.0;
  auto* query = app.add_subcommand("query", "evaluate a top-k query over a relation file");
  query->add_option("--input", q_input, "relation TSV file")->required();
  query->add_option("--k", q_k, "answer size")->required();
  query->add_option("--semantics", q_semantics,
                    "global-topk | u-topk | u-kranks | pt-k");
  auto* tau_opt = query->add_option("--tau", q_tau, "PT-k probability threshold");
  query->add_option("--engine", q_engine,
                    "oracle | basic | ta | reduction | rollback | rollbacksort | "
                    "gen-simple | gen-full");
  query->add_option("--trace", q_trace, "write rollback step stats TSV here");

  // bench
  std::string b_gen, b_engines, b_trace;
  int b_k = 100, b_repeat = 5;
  auto* bench = app.add_subcommand("bench", "time engines on a synthetic workload");
  bench->add_option("--gen", b_gen, "n=...,x=...,smax=...,seed=...")->required();
  bench->add_option("--engines", b_engines, "comma-separated engine list")->required();
  bench->add_option("--k", b_k, "answer size");
  bench->add_option("--repeat", b_repeat, "runs per engine; median reported");
  bench->add_option("--trace", b_trace, "rollback step stats TSV prefix");

  // verify
  std::uint64_t v_seed = 1;
  int v_trials = 200, v_max_n = 10;
  std::string v_engines, v_out = ".";
  auto* verify = app.add_subcommand("verify", "randomized engine-vs-oracle checks");
  verify->add_option("--seed", v_seed, "RNG seed");
  verify->add_option("--trials", v_trials, "number of random instances");
  verify->add_option("--max-n", v_max_n, "max tuples per instance");
  verify->add_option("--engines", v_engines, "comma-separated engine list (default all)");
  verify->add_option("--out", v_out, "directory for reproducer files");

  // gen
  std::string g_gen;
  auto* gen = app.add_subcommand("gen", "print a synthetic relation TSV");
  gen->add_option("--gen", g_gen, "n=...,x=...,smax=...,seed=...")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*query)
      return cmd_query(q_input, q_k, q_semantics, q_tau, tau_opt->count() > 0,
                       q_engine, q_trace);
    if (*bench) return cmd_bench(b_gen, b_engines, b_k, b_repeat, b_trace);
    if (*verify) return cmd_verify(v_seed, v_trials, v_max_n, v_engines, v_out);
    if (*gen) {
      std::cout << render_relation(generate(parse_gen_spec(g_gen)));
      return kExitOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitMismatch;
  }
  return kExitOk;
}
