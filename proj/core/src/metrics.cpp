#include "kgqagen/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kgqagen/errors.hpp"
#include "kgqagen/ids.hpp"
#include "kgqagen/llm/contracts.hpp"
#include "kgqagen/llm/prompts.hpp"

namespace kgqagen::eval {

namespace {
using nlohmann::json;
using nlohmann::ordered_json;
}  // namespace

std::string normalize(const std::string& answer) {
  std::string rest;
  strip_trailing_id(answer, 'Q', &rest);
  return collapse_whitespace(to_lower(rest));
}

std::string to_string(MatchMode mode) { return mode == MatchMode::EM ? "em" : "lasm"; }

std::vector<PredictionRecord> parse_predictions(const std::string& content,
                                                const std::string& origin) {
  std::vector<PredictionRecord> out;
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
      throw SchemaError(origin + ":" + std::to_string(line_no) + ": invalid JSON: " + e.what());
    }
    if (!doc.is_object() || !doc.contains("id") || !doc["id"].is_string())
      throw SchemaError(origin + ":" + std::to_string(line_no) + ": missing 'id'");
    PredictionRecord r;
    r.id = doc["id"].get<std::string>();
    if (!doc.contains("predictions") || !doc["predictions"].is_array())
      throw SchemaError(origin + ":" + std::to_string(line_no) + ": missing 'predictions'");
    for (const auto& p : doc["predictions"])
      r.predictions.push_back(p.is_string() ? p.get<std::string>() : p.dump());
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<PredictionRecord> read_predictions(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open prediction file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_predictions(buf.str(), path);
}

JudgeCache::JudgeCache(std::string path) : path_(std::move(path)) {
  std::ifstream in(path_, std::ios::binary);
  if (!in) return;  // cache grows on first use
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    json doc = json::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.contains("pred") || !doc.contains("gold") ||
        !doc.contains("equivalent"))
      continue;  // tolerate torn tail lines from interrupted runs
    verdicts_.emplace(doc["pred"].get<std::string>() + "\t" + doc["gold"].get<std::string>(),
                      doc["equivalent"].get<bool>());
  }
}

std::optional<bool> JudgeCache::lookup(const std::string& normalized_pred,
                                       const std::string& normalized_gold) const {
  std::lock_guard lock(mu_);
  auto it = verdicts_.find(normalized_pred + "\t" + normalized_gold);
  if (it == verdicts_.end()) return std::nullopt;
  return it->second;
}

void JudgeCache::store(const std::string& normalized_pred, const std::string& normalized_gold,
                       bool verdict) {
  std::lock_guard lock(mu_);
  const std::string key = normalized_pred + "\t" + normalized_gold;
  if (!verdicts_.emplace(key, verdict).second) return;  // immutable once written
  if (path_.empty()) return;
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  ordered_json doc;
  doc["pred"] = normalized_pred;
  doc["gold"] = normalized_gold;
  doc["equivalent"] = verdict;
  out << doc.dump() << '\n';
}

std::size_t JudgeCache::size() const {
  std::lock_guard lock(mu_);
  return verdicts_.size();
}

MatchResult match_em(const std::vector<std::string>& preds, const std::vector<std::string>& gold) {
  MatchResult result;
  result.mode = MatchMode::EM;
  std::vector<bool> gold_taken(gold.size(), false);
  std::vector<std::string> gold_norm(gold.size());
  for (std::size_t j = 0; j < gold.size(); ++j) gold_norm[j] = normalize(gold[j]);

  for (std::size_t i = 0; i < preds.size(); ++i) {
    const std::string p = normalize(preds[i]);
    for (std::size_t j = 0; j < gold.size(); ++j) {
      if (gold_taken[j] || gold_norm[j] != p) continue;
      gold_taken[j] = true;
      result.pairs.emplace_back(i, j);
      break;
    }
  }
  return result;
}

namespace {

bool judge_verdict(llm::Provider& judge, const std::string& judge_model,
                   const std::string& question, const std::string& pred,
                   const std::string& gold) {
  llm::ChatRequest request;
  request.model = judge_model;
  request.max_tokens = 4;
  request.messages = {{llm::Role::User, llm::render_judge_prompt(question, pred, gold)}};
  for (int attempt = 0; attempt < 2; ++attempt) {
    const std::string raw = judge.complete(request);
    const std::string reply = to_lower(trim(llm::strip_code_fence(raw)));
    if (reply.starts_with("yes")) return true;
    if (reply.starts_with("no")) return false;
    // one re-ask on a malformed verdict
  }
  throw TransportError("judge returned neither yes nor no twice in a row");
}

}  // namespace

MatchResult match_lasm(const std::vector<std::string>& preds, const std::vector<std::string>& gold,
                       const std::string& question, llm::Provider& judge,
                       const std::string& judge_model, JudgeCache& cache, JudgeStats& stats) {
  MatchResult result = match_em(preds, gold);
  result.mode = MatchMode::LASM;

  std::vector<bool> pred_taken(preds.size(), false);
  std::vector<bool> gold_taken(gold.size(), false);
  for (const auto& [pi, gi] : result.pairs) {
    pred_taken[pi] = true;
    gold_taken[gi] = true;
  }

  for (std::size_t pi = 0; pi < preds.size(); ++pi) {
    if (pred_taken[pi]) continue;
    const std::string pred_norm = normalize(preds[pi]);
    for (std::size_t gi = 0; gi < gold.size(); ++gi) {
      if (gold_taken[gi]) continue;
      const std::string gold_norm = normalize(gold[gi]);
      bool verdict;
      if (auto cached = cache.lookup(pred_norm, gold_norm)) {
        ++stats.cache_hits;
        verdict = *cached;
      } else {
        verdict = judge_verdict(judge, judge_model, question, preds[pi], gold[gi]);
        ++stats.calls;
        cache.store(pred_norm, gold_norm, verdict);
      }
      if (verdict) {
        result.pairs.emplace_back(pi, gi);
        pred_taken[pi] = true;
        gold_taken[gi] = true;
        break;
      }
    }
  }
  std::sort(result.pairs.begin(), result.pairs.end());
  return result;
}

InstanceScores score_instance(const MatchResult& match, const std::vector<std::string>& preds,
                              const std::vector<std::string>& gold) {
  InstanceScores s;
  const double matched = static_cast<double>(match.pairs.size());
  s.precision = preds.empty() ? 0.0 : matched / static_cast<double>(preds.size());
  s.recall = gold.empty() ? 0.0 : matched / static_cast<double>(gold.size());
  s.f1 = (s.precision + s.recall) > 0 ? 2 * s.precision * s.recall / (s.precision + s.recall)
                                      : 0.0;
  for (const auto& [pi, gi] : match.pairs)
    if (pi == 0) s.hit1 = 1.0;
  s.accuracy = s.recall;
  return s;
}

MetricReport aggregate(const std::vector<InstanceScores>& scores, MatchMode mode,
                       const JudgeStats& judge_stats) {
  if (scores.empty()) throw ConfigError("cannot aggregate zero instances");
  auto mean100 = [&](auto field) {
    double sum = 0;
    for (const auto& s : scores) sum += s.*field;
    return std::round(sum / static_cast<double>(scores.size()) * 10000.0) / 100.0;
  };
  MetricReport r;
  r.mode = mode;
  r.accuracy = mean100(&InstanceScores::accuracy);
  r.hit1 = mean100(&InstanceScores::hit1);
  r.f1 = mean100(&InstanceScores::f1);
  r.precision = mean100(&InstanceScores::precision);
  r.recall = mean100(&InstanceScores::recall);
  r.instances = scores.size();
  r.judge_calls = judge_stats.calls;
  r.cache_hits = judge_stats.cache_hits;
  return r;
}

EvalRun evaluate_predictions(const std::vector<InstanceRecord>& gold,
                             const std::vector<PredictionRecord>& preds, MatchMode mode,
                             llm::Provider* judge, const std::string& judge_model,
                             JudgeCache* cache) {
  std::unordered_map<std::string, const PredictionRecord*> by_id;
  for (const auto& p : preds) by_id.emplace(p.id, &p);

  std::unordered_map<std::string, bool> gold_ids;
  for (const auto& g : gold) gold_ids.emplace(g.id, true);
  for (const auto& p : preds)
    if (!gold_ids.count(p.id))
      throw SchemaError("prediction id '" + p.id + "' does not occur in the gold set");

  static const std::vector<std::string> kNoPredictions;
  std::vector<InstanceScores> em_scores;
  std::vector<InstanceScores> lasm_scores;
  JudgeStats judge_stats;
  JudgeCache local_cache;
  JudgeCache& the_cache = cache ? *cache : local_cache;

  for (const auto& g : gold) {
    auto it = by_id.find(g.id);
    const std::vector<std::string>& predictions =
        it == by_id.end() ? kNoPredictions : it->second->predictions;

    MatchResult em = match_em(predictions, g.answers);
    em.instance_id = g.id;
    em_scores.push_back(score_instance(em, predictions, g.answers));

    if (mode == MatchMode::LASM) {
      if (!judge) throw ConfigError("LASM scoring requires a judge provider");
      MatchResult lasm = match_lasm(predictions, g.answers, g.question, *judge, judge_model,
                                    the_cache, judge_stats);
      lasm.instance_id = g.id;
      lasm_scores.push_back(score_instance(lasm, predictions, g.answers));
    }
  }

  EvalRun run;
  run.em = aggregate(em_scores, MatchMode::EM);
  if (mode == MatchMode::LASM)
    run.lasm = aggregate(lasm_scores, MatchMode::LASM, judge_stats);
  return run;
}

namespace {

ordered_json report_block(const MetricReport& r) {
  ordered_json block;
  block["accuracy"] = r.accuracy;
  block["hit1"] = r.hit1;
  block["f1"] = r.f1;
  block["precision"] = r.precision;
  block["recall"] = r.recall;
  block["instances"] = r.instances;
  if (r.mode == MatchMode::LASM) {
    block["judge_calls"] = r.judge_calls;
    block["cache_hits"] = r.cache_hits;
  }
  return block;
}

}  // namespace

std::string report_json(const EvalRun& run) {
  ordered_json doc;
  doc["em"] = report_block(run.em);
  doc["lasm"] = run.lasm ? report_block(*run.lasm) : ordered_json(nullptr);
  return doc.dump(2);
}

std::string report_table(const EvalRun& run) {
  std::ostringstream os;
  char line[96];
  os << "metric        EM";
  if (run.lasm) os << "      LASM";
  os << "\n";
  auto row = [&](const char* name, double em, double lasm) {
    if (run.lasm)
      std::snprintf(line, sizeof(line), "%-10s%8.2f%10.2f\n", name, em, lasm);
    else
      std::snprintf(line, sizeof(line), "%-10s%8.2f\n", name, em);
    os << line;
  };
  row("Accuracy", run.em.accuracy, run.lasm ? run.lasm->accuracy : 0);
  row("Hit@1", run.em.hit1, run.lasm ? run.lasm->hit1 : 0);
  row("F1", run.em.f1, run.lasm ? run.lasm->f1 : 0);
  row("Precision", run.em.precision, run.lasm ? run.lasm->precision : 0);
  row("Recall", run.em.recall, run.lasm ? run.lasm->recall : 0);
  if (run.lasm)
    os << "judge calls: " << run.lasm->judge_calls << ", cache hits: " << run.lasm->cache_hits
       << "\n";
  return os.str();
}

}  // namespace kgqagen::eval
