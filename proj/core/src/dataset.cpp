#include "kgqagen/dataset.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "kgqagen/errors.hpp"
#include "kgqagen/ids.hpp"
#include "kgqagen/rng.hpp"

namespace kgqagen {

namespace {
using nlohmann::json;
using nlohmann::ordered_json;
}  // namespace

InstanceRecord record_from_candidate(const CandidateInstance& candidate) {
  InstanceRecord record;
  record.id = candidate.id;
  record.seed = candidate.seed;
  record.question = candidate.question;
  record.answers = candidate.answers;
  for (const Triple& t : candidate.proof) record.proof.push_back(triple_surface(t));
  record.sparql = candidate.sparql;
  record.meta.iterations = candidate.meta.iterations;
  record.meta.validation_attempts = 0;
  record.meta.model = candidate.meta.model;
  record.meta.created_at = candidate.meta.created_at;
  return record;
}

std::string to_jsonl_line(const InstanceRecord& record) {
  ordered_json doc;
  doc["id"] = record.id;
  doc["seed"] = {{"label", record.seed.label}, {"qid", record.seed.qid}};
  doc["question"] = record.question;
  doc["answers"] = record.answers;
  doc["proof"] = json::array();
  for (const auto& p : record.proof) doc["proof"].push_back({p[0], p[1], p[2]});
  doc["sparql"] = record.sparql;
  doc["meta"] = {{"iterations", record.meta.iterations},
                 {"validation_attempts", record.meta.validation_attempts},
                 {"model", record.meta.model},
                 {"created_at", record.meta.created_at}};
  return doc.dump();
}

namespace {

[[noreturn]] void fail_line(const std::string& origin, std::size_t line_no,
                            const std::string& what) {
  std::ostringstream os;
  os << origin << ":" << line_no << ": " << what;
  throw SchemaError(os.str());
}

InstanceRecord parse_record(const json& doc, const std::string& origin, std::size_t line_no,
                            ReadMode mode) {
  InstanceRecord r;
  if (!doc.is_object()) fail_line(origin, line_no, "expected a JSON object");

  if (doc.contains("id") && doc["id"].is_string()) r.id = doc["id"].get<std::string>();

  if (!doc.contains("question") || !doc["question"].is_string())
    fail_line(origin, line_no, "missing 'question'");
  r.question = doc["question"].get<std::string>();

  const char* answers_key = doc.contains("answers") ? "answers" : "answer";
  if (!doc.contains(answers_key) || !doc[answers_key].is_array())
    fail_line(origin, line_no, "missing 'answers'");
  for (const auto& a : doc[answers_key]) {
    if (a.is_string())
      r.answers.push_back(a.get<std::string>());
    else if (mode == ReadMode::Lenient)
      r.answers.push_back(a.dump());  // numbers/dates in external files
    else
      fail_line(origin, line_no, "'answers' entries must be strings");
  }

  if (doc.contains("proof") && doc["proof"].is_array()) {
    for (const auto& entry : doc["proof"]) {
      if (!entry.is_array() || entry.size() != 3 ||
          !std::all_of(entry.begin(), entry.end(), [](const json& v) { return v.is_string(); })) {
        if (mode == ReadMode::Strict)
          fail_line(origin, line_no, "'proof' entries must be 3-string arrays");
        continue;
      }
      r.proof.push_back({entry[0].get<std::string>(), entry[1].get<std::string>(),
                         entry[2].get<std::string>()});
    }
  }

  if (doc.contains("sparql") && doc["sparql"].is_string())
    r.sparql = doc["sparql"].get<std::string>();

  if (doc.contains("seed") && doc["seed"].is_object()) {
    const auto& seed = doc["seed"];
    if (seed.contains("qid") && seed["qid"].is_string()) r.seed.qid = seed["qid"];
    if (seed.contains("label") && seed["label"].is_string()) r.seed.label = seed["label"];
    if (r.seed.label.empty()) r.seed.label = r.seed.qid;
  }

  if (doc.contains("meta") && doc["meta"].is_object()) {
    const auto& meta = doc["meta"];
    if (meta.contains("iterations") && meta["iterations"].is_number_unsigned())
      r.meta.iterations = meta["iterations"].get<std::uint64_t>();
    if (meta.contains("validation_attempts") && meta["validation_attempts"].is_number_unsigned())
      r.meta.validation_attempts = meta["validation_attempts"].get<std::uint64_t>();
    if (meta.contains("model") && meta["model"].is_string()) r.meta.model = meta["model"];
    if (meta.contains("created_at") && meta["created_at"].is_string())
      r.meta.created_at = meta["created_at"];
  }

  if (mode == ReadMode::Strict) {
    if (r.id.empty()) fail_line(origin, line_no, "missing 'id'");
    if (!is_qid(r.seed.qid)) fail_line(origin, line_no, "missing or invalid 'seed.qid'");
    if (r.question.empty()) fail_line(origin, line_no, "'question' is empty");
    if (r.answers.empty()) fail_line(origin, line_no, "'answers' is empty");
    if (r.proof.empty()) fail_line(origin, line_no, "'proof' is empty");
    if (!doc.contains("sparql") || !doc["sparql"].is_string())
      fail_line(origin, line_no, "missing 'sparql'");
  } else if (r.id.empty()) {
    r.id = "line-" + std::to_string(line_no);
  }
  return r;
}

}  // namespace

std::vector<InstanceRecord> parse_jsonl(const std::string& content, const std::string& origin,
                                        ReadMode mode) {
  std::vector<InstanceRecord> records;
  std::unordered_map<std::string, std::size_t> id_lines;
  std::istringstream in(content);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    json doc;
    try {
      doc = json::parse(line);
    } catch (const json::exception& e) {
      fail_line(origin, line_no, std::string("invalid JSON: ") + e.what());
    }
    InstanceRecord r = parse_record(doc, origin, line_no, mode);
    if (mode == ReadMode::Strict) {
      auto [it, inserted] = id_lines.emplace(r.id, line_no);
      if (!inserted)
        fail_line(origin, line_no,
                  "duplicate id '" + r.id + "' (first seen on line " +
                      std::to_string(it->second) + ")");
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<InstanceRecord> read_jsonl(const std::string& path, ReadMode mode) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open dataset file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_jsonl(buf.str(), path, mode);
}

std::size_t write_jsonl(const std::vector<InstanceRecord>& records, const std::string& path) {
  std::unordered_map<std::string, bool> seen;
  for (const auto& r : records) {
    if (r.id.empty()) throw SchemaError("record with empty id cannot be written");
    if (!seen.emplace(r.id, true).second)
      throw SchemaError("duplicate id '" + r.id + "' in records to write");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write dataset file: " + path);
  for (const auto& r : records) out << to_jsonl_line(r) << '\n';
  return records.size();
}

SplitResult split(std::vector<InstanceRecord> records, const SplitSpec& spec) {
  const std::size_t n = records.size();
  if (spec.dev_fraction <= 0 || spec.test_fraction <= 0 ||
      spec.dev_fraction + spec.test_fraction >= 1.0)
    throw ConfigError("split fractions must be positive and sum below 1");
  const auto dev_n = static_cast<std::size_t>(std::llround(n * spec.dev_fraction));
  const auto test_n = static_cast<std::size_t>(std::llround(n * spec.test_fraction));
  if (dev_n == 0 || test_n == 0 || dev_n + test_n >= n)
    throw ConfigError("split fractions infeasible for " + std::to_string(n) + " records");

  Rng rng(spec.seed);
  shuffle(records, rng);

  SplitResult out;
  out.dev.assign(records.begin(), records.begin() + dev_n);
  out.test.assign(records.begin() + dev_n, records.begin() + dev_n + test_n);
  out.train.assign(records.begin() + dev_n + test_n, records.end());
  return out;
}

namespace {

std::size_t word_count(const std::string& text) {
  std::istringstream in(text);
  std::string token;
  std::size_t n = 0;
  while (in >> token) ++n;
  return n;
}

double pct(std::size_t part, std::size_t total) {
  if (total == 0) return 0.0;
  return std::round(1000.0 * part / total) / 10.0;
}

}  // namespace

DatasetStats stats(const std::vector<InstanceRecord>& records) {
  DatasetStats s;
  s.count = records.size();
  for (const auto& r : records) {
    const std::size_t words = word_count(r.question);
    if (words <= 15)
      ++s.words_le15;
    else if (words <= 30)
      ++s.words_16_30;
    else
      ++s.words_gt30;
    if (r.answers.size() <= 1)
      ++s.answers_1;
    else if (r.answers.size() == 2)
      ++s.answers_2;
    else
      ++s.answers_3plus;
  }
  s.pct_words_le15 = pct(s.words_le15, s.count);
  s.pct_words_16_30 = pct(s.words_16_30, s.count);
  s.pct_words_gt30 = pct(s.words_gt30, s.count);
  s.pct_answers_1 = pct(s.answers_1, s.count);
  s.pct_answers_2 = pct(s.answers_2, s.count);
  s.pct_answers_3plus = pct(s.answers_3plus, s.count);
  return s;
}

std::string stats_table(const DatasetStats& s) {
  std::ostringstream os;
  char line[128];
  os << "records: " << s.count << "\n";
  os << "question length (words)\n";
  std::snprintf(line, sizeof(line), "  <=15   %8zu  %5.1f%%\n", s.words_le15, s.pct_words_le15);
  os << line;
  std::snprintf(line, sizeof(line), "  16-30  %8zu  %5.1f%%\n", s.words_16_30, s.pct_words_16_30);
  os << line;
  std::snprintf(line, sizeof(line), "  >30    %8zu  %5.1f%%\n", s.words_gt30, s.pct_words_gt30);
  os << line;
  os << "answer-set size\n";
  std::snprintf(line, sizeof(line), "  1      %8zu  %5.1f%%\n", s.answers_1, s.pct_answers_1);
  os << line;
  std::snprintf(line, sizeof(line), "  2      %8zu  %5.1f%%\n", s.answers_2, s.pct_answers_2);
  os << line;
  std::snprintf(line, sizeof(line), "  >=3    %8zu  %5.1f%%\n", s.answers_3plus,
                s.pct_answers_3plus);
  os << line;
  return os.str();
}

std::string stats_json(const DatasetStats& s) {
  ordered_json doc;
  doc["count"] = s.count;
  doc["question_words"] = {
      {"le15", {{"count", s.words_le15}, {"pct", s.pct_words_le15}}},
      {"w16_30", {{"count", s.words_16_30}, {"pct", s.pct_words_16_30}}},
      {"gt30", {{"count", s.words_gt30}, {"pct", s.pct_words_gt30}}},
  };
  doc["answer_set_size"] = {
      {"one", {{"count", s.answers_1}, {"pct", s.pct_answers_1}}},
      {"two", {{"count", s.answers_2}, {"pct", s.pct_answers_2}}},
      {"three_plus", {{"count", s.answers_3plus}, {"pct", s.pct_answers_3plus}}},
  };
  return doc.dump(2);
}

}  // namespace kgqagen
