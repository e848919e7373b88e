#include "ptopk/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "ptopk/errors.hpp"

namespace ptopk {
namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

std::uint64_t parse_uint(std::string_view field, std::size_t line, const char* what) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw ParseError(line, std::string("invalid ") + what + " '" + std::string(field) + "'");
  return value;
}

double parse_double(std::string_view field, std::size_t line, const char* what) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw ParseError(line, std::string("invalid ") + what + " '" + std::string(field) + "'");
  return value;
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

Dataset parse_relation(std::string_view text) {
  Dataset data;
  std::vector<TupleRecord> tuples;
  std::map<TupleId, double> scores;

  bool header_seen = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos
                                                 ? text.size() - pos
                                                 : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;

    std::vector<std::string_view> fields = split_tabs(line);
    if (!header_seen) {
      if (fields.size() < 4 || fields[0] != "id" || fields[1] != "part" ||
          fields[2] != "score" || fields[3] != "prob")
        throw ParseError(line_no, "expected header 'id\\tpart\\tscore\\tprob'");
      for (std::size_t c = 4; c < fields.size(); ++c)
        data.payload_columns.emplace_back(fields[c]);
      header_seen = true;
      continue;
    }

    if (fields.size() != 4 + data.payload_columns.size())
      throw ParseError(line_no, "expected " + std::to_string(4 + data.payload_columns.size()) +
                                    " fields, got " + std::to_string(fields.size()));
    TupleRecord rec;
    rec.id = parse_uint(fields[0], line_no, "id");
    rec.part = parse_uint(fields[1], line_no, "part");
    double score = parse_double(fields[2], line_no, "score");
    if (!std::isfinite(score)) throw ParseError(line_no, "score must be finite");
    rec.prob = parse_double(fields[3], line_no, "prob");
    for (std::size_t c = 0; c < data.payload_columns.size(); ++c)
      rec.payload[data.payload_columns[c]] = std::string(fields[4 + c]);
    if (scores.count(rec.id))
      throw ParseError(line_no, "duplicate tuple id " + std::to_string(rec.id));
    scores[rec.id] = score;
    tuples.push_back(std::move(rec));
  }
  if (!header_seen) throw ParseError(line_no, "missing header line");

  data.rel = ProbRelation(std::move(tuples));
  data.scores = ScoreAssignment(std::move(scores));
  ValidationReport report = validate(data.rel);
  if (!report.ok()) throw ValidationError("invalid relation:\n" + report.to_string());
  return data;
}

Dataset load_relation(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_relation(buffer.str());
}

std::string render_relation(const Dataset& data) {
  std::ostringstream out;
  out << "id\tpart\tscore\tprob";
  for (const std::string& col : data.payload_columns) out << '\t' << col;
  out << '\n';
  for (const TupleRecord& t : data.rel.tuples()) {
    out << t.id << '\t' << t.part << '\t' << format_double(data.scores.score(t.id))
        << '\t' << format_double(t.prob);
    for (const std::string& col : data.payload_columns) {
      auto it = t.payload.find(col);
      out << '\t' << (it == t.payload.end() ? "" : it->second);
    }
    out << '\n';
  }
  return out.str();
}

void save_relation(const Dataset& data, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << render_relation(data);
}

Dataset generate(const WorkloadSpec& spec) {
  if (spec.n < 1) throw Error("workload needs n >= 1");
  if (spec.x < 0.0 || spec.x > 1.0) throw Error("x must be in [0,1]");
  if (spec.s_max < 2) throw Error("s_max must be >= 2");

  std::mt19937_64 rng(spec.seed);
  std::size_t exclusive = static_cast<std::size_t>(std::ceil(spec.n * spec.x));
  if (exclusive > spec.n) exclusive = spec.n;
  if (exclusive == 1) exclusive = 0;  // a lone tuple cannot form a non-trivial part

  // Non-trivial part sizes; the last draw is truncated to fit, and a
  // remainder of 1 is absorbed by the previous part.
  std::vector<std::size_t> sizes;
  std::uniform_int_distribution<std::size_t> size_dist(2, spec.s_max);
  std::size_t remaining = exclusive;
  while (remaining > 0) {
    std::size_t size = std::min(size_dist(rng), remaining);
    if (size == 1) {
      sizes.back() += 1;
      break;
    }
    sizes.push_back(size);
    remaining -= size;
  }

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::set<double> used_scores;
  auto fresh_score = [&] {
    double s;
    do {
      s = unit(rng);
    } while (!used_scores.insert(s).second);
    return s;
  };

  std::vector<TupleRecord> tuples(spec.n);
  std::map<TupleId, double> scores;
  PartId next_part = 0;
  std::size_t cursor = 0;
  for (std::size_t size : sizes) {
    for (std::size_t i = 0; i < size; ++i) tuples[cursor + i].part = next_part;
    cursor += size;
    ++next_part;
  }
  for (; cursor < spec.n; ++cursor) tuples[cursor].part = next_part++;

  for (std::size_t i = 0; i < spec.n; ++i) {
    tuples[i].id = i;
    scores[i] = fresh_score();
    tuples[i].prob = 1.0 - unit(rng);  // (0,1]
  }

  // Keep every non-trivial part feasible.
  cursor = 0;
  for (std::size_t size : sizes) {
    double sum = 0.0;
    for (std::size_t i = 0; i < size; ++i) sum += tuples[cursor + i].prob;
    if (sum > 1.0) {
      const double scale = 0.99 / sum;
      for (std::size_t i = 0; i < size; ++i) tuples[cursor + i].prob *= scale;
    }
    cursor += size;
  }

  Dataset data;
  data.rel = ProbRelation(std::move(tuples));
  data.scores = ScoreAssignment(std::move(scores));
  return data;
}

}  // namespace ptopk
