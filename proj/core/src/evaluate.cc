// Copyright 2026 The Forge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "forge/evaluate.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "forge/error.h"
#include "forge/parallel.h"
#include "forge/text.h"

namespace forge {
namespace {

using nlohmann::json;

constexpr std::array<std::string_view, kMetricCount> kNames = {
    "BL_At", "RL_At", "BL_Ad", "RL_Ad", "BL_Tt", "RL_Tt",
    "BL_Tq", "RL_Tq", "PPL",   "P_pt",  "R_pt",  "F1_pt",
    "P_qs",  "R_qs",  "F1_qs", "BL_qa", "RL_qa", "BE_qa"};

std::vector<json> ReadJsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileUnreadable, "cannot read " + path.string());
  std::vector<json> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json row = json::parse(line, nullptr, false);
    if (row.is_discarded() || !row.is_object()) {
      throw Error(ErrorCode::kMalformedInput,
                  path.string() + ":" + std::to_string(line_no) + ": bad row");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string Fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

// Text metrics against one reference; an empty generation scores zero
// rather than aborting the run.
struct TextScores {
  double bleu = 0.0;
  double rouge = 0.0;
};

TextScores ScoreText(const Tokens& cand, std::string_view reference,
                     const EvalOptions& options) {
  const Tokens ref = Tokenize(CleanText(reference));
  if (ref.empty()) {
    throw Error(ErrorCode::kEmptyReference, "reference has no tokens");
  }
  if (cand.empty()) return {};
  return {Bleu(cand, ref, options.bleu_epsilon),
          RougeL(cand, ref, options.rouge_beta)};
}

double Mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

std::span<const std::string_view> MetricNames() { return kNames; }

double GmFromRaw(std::span<const double> raw_values) {
  if (raw_values.size() != kMetricCount) {
    throw Error(ErrorCode::kWrongArity, "expected 18 metric values");
  }
  std::array<double, kMetricCount> v{};
  std::copy(raw_values.begin(), raw_values.end(), v.begin());
  v[kPplIndex] = PplTransform(v[kPplIndex]);
  return GeometricMean(v);
}

void MetricReport::AssembleGm() {
  gm.reset();
  std::array<double, kMetricCount> raw{};
  for (std::size_t i = 0; i < kMetricCount; ++i) {
    if (!values[i]) return;
    raw[i] = *values[i];
    if (i == kPplIndex ? raw[i] <= 1.0 : raw[i] <= 0.0) return;
  }
  gm = GmFromRaw(raw);
}

json MetricReport::ToJson() const {
  json j = json::object();
  for (std::size_t i = 0; i < kMetricCount; ++i) {
    j[std::string(kNames[i])] = values[i] ? json(*values[i]) : json(nullptr);
  }
  j["GM"] = gm ? json(*gm) : json(nullptr);
  return j;
}

MetricReport MetricReport::FromJson(const json& j) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kMalformedInput, "report is not an object");
  }
  MetricReport r;
  for (std::size_t i = 0; i < kMetricCount; ++i) {
    auto it = j.find(std::string(kNames[i]));
    if (it != j.end() && it->is_number()) r.values[i] = it->get<double>();
  }
  if (auto it = j.find("GM"); it != j.end() && it->is_number()) {
    r.gm = it->get<double>();
  }
  return r;
}

std::string RenderTable(
    std::span<const std::pair<std::string, MetricReport>> rows) {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header{"Model"};
  for (auto name : kNames) header.emplace_back(name);
  header.emplace_back("GM");
  cells.push_back(header);
  for (const auto& [name, report] : rows) {
    std::vector<std::string> line{name};
    for (const auto& v : report.values) line.push_back(v ? Fmt(*v) : "-");
    line.push_back(report.gm ? Fmt(*report.gm) : "-");
    cells.push_back(std::move(line));
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      width[c] = std::max(width[c], line[c].size());
    }
  }
  std::string out;
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      // First column left aligned, numbers right aligned.
      const std::string pad(width[c] - line[c].size(), ' ');
      if (c > 0) out += "  ";
      out += c == 0 ? line[c] + pad : pad + line[c];
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += '\n';
  }
  return out;
}

json EvalReference::ToJson() const {
  return json{{"id", id},
              {"task", TaskName(task)},
              {"texts", texts},
              {"label", label ? json(label->name()) : json(nullptr)}};
}

EvalReference EvalReference::FromJson(const json& j) {
  EvalReference r;
  try {
    r.id = j.at("id").get<std::string>();
    auto task = ParseTask(j.at("task").get<std::string>());
    if (!task) throw Error(ErrorCode::kMalformedInput, "unknown task");
    r.task = *task;
    if (auto it = j.find("texts"); it != j.end() && !it->is_null()) {
      r.texts = it->get<std::vector<std::string>>();
    }
    if (auto it = j.find("label"); it != j.end() && !it->is_null()) {
      r.label = TaxonomyLabel::Parse(it->get<std::string>());
      if (!r.label) throw Error(ErrorCode::kMalformedInput, "unknown label");
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedInput,
                std::string("bad reference row: ") + e.what());
  }
  return r;
}

std::vector<EvalReference> LoadReferences(const std::filesystem::path& path) {
  std::vector<EvalReference> out;
  for (const auto& row : ReadJsonl(path)) out.push_back(EvalReference::FromJson(row));
  return out;
}

std::vector<EvalGeneration> LoadGenerations(const std::filesystem::path& path) {
  std::vector<EvalGeneration> out;
  for (const auto& row : ReadJsonl(path)) {
    auto id = row.find("id");
    auto text = row.find("output");
    if (id == row.end() || !id->is_string() || text == row.end() ||
        !text->is_string()) {
      throw Error(ErrorCode::kMalformedInput,
                  path.string() + ": rows need string id and output");
    }
    out.push_back({id->get<std::string>(), text->get<std::string>()});
  }
  return out;
}

MetricReport EvaluateRun(const EvalInput& input, const ModelClient& scorer,
                         const EvalOptions& options) {
  MetricReport report;
  for (TaskKind task : kAllTasks) {
    auto gen_it = input.generations.find(task);
    if (gen_it == input.generations.end() || gen_it->second.empty()) {
      report.missing_tasks.emplace_back(TaskName(task));
      continue;
    }
    auto ref_it = input.references.find(task);
    if (ref_it == input.references.end() || ref_it->second.empty()) {
      throw Error(ErrorCode::kMisaligned, std::string("no references for ") +
                                              std::string(TaskName(task)));
    }
    const auto& refs = ref_it->second;
    std::map<std::string, const EvalGeneration*> by_id;
    for (const auto& g : gen_it->second) {
      if (!by_id.emplace(g.id, &g).second) {
        throw Error(ErrorCode::kMisaligned, "duplicate generation id " + g.id);
      }
    }
    std::set<std::string> ref_ids;
    for (const auto& r : refs) {
      ref_ids.insert(r.id);
      if (!by_id.count(r.id)) {
        throw Error(ErrorCode::kMisaligned,
                    "missing generation for sample id " + r.id);
      }
    }
    for (const auto& g : gen_it->second) {
      if (!ref_ids.count(g.id)) {
        throw Error(ErrorCode::kMisaligned, "no reference for sample id " + g.id);
      }
    }

    const std::size_t n = refs.size();
    if (IsClassificationTask(task)) {
      std::vector<std::optional<TaxonomyLabel>> predicted(n);
      std::vector<TaxonomyLabel> gold;
      gold.reserve(n);
      for (std::size_t i = 0; i < n; ++i) {
        if (!refs[i].label) {
          throw Error(ErrorCode::kMissingField, "reference " + refs[i].id +
                                                    " has no gold label");
        }
        gold.push_back(*refs[i].label);
        predicted[i] = NormalizeLabel(by_id.at(refs[i].id)->text);
      }
      const Prf prf = MacroPrf(predicted, gold);
      const bool pt = task == TaskKind::kProductClassification;
      report.at(pt ? Metric::kPPt : Metric::kPQs) = prf.precision;
      report.at(pt ? Metric::kRPt : Metric::kRQs) = prf.recall;
      report.at(pt ? Metric::kF1Pt : Metric::kF1Qs) = prf.f1;
      continue;
    }

    const std::size_t n_refs = task == TaskKind::kGeneralQa ? 1 : 2;
    // Per sample: bleu/rouge per reference, then PPL or BE in the last slot.
    std::vector<std::array<double, 5>> per(n);
    ParallelFor(n, options.concurrency, [&](std::size_t i) {
      const auto& ref = refs[i];
      if (ref.texts.size() != n_refs) {
        throw Error(ErrorCode::kMissingField,
                    "reference " + ref.id + " needs " + std::to_string(n_refs) +
                        " texts");
      }
      const std::string gen = CleanText(by_id.at(ref.id)->text);
      const Tokens cand = Tokenize(gen);
      for (std::size_t r = 0; r < n_refs; ++r) {
        const TextScores s = ScoreText(cand, ref.texts[r], options);
        per[i][2 * r] = s.bleu;
        per[i][2 * r + 1] = s.rouge;
      }
      if (task == TaskKind::kTitleRewriting) {
        if (cand.empty()) {
          throw Error(ErrorCode::kEmptySequence,
                      "cannot score perplexity of empty generation " + ref.id);
        }
        per[i][4] = Perplexity(scorer.ScoreLogprobs(gen, options.ppl_model));
      } else if (task == TaskKind::kGeneralQa) {
        if (cand.empty()) {
          per[i][4] = 0.0;
        } else {
          const auto cv = scorer.EmbedTokens(gen, options.embed_model);
          const auto rv = scorer.EmbedTokens(CleanText(ref.texts[0]),
                                             options.embed_model);
          per[i][4] = BertStyleScore(cv, rv).f1;
        }
      }
    });
    auto column = [&](std::size_t slot) {
      std::vector<double> v(n);
      for (std::size_t i = 0; i < n; ++i) v[i] = per[i][slot];
      return Mean(v);
    };
    switch (task) {
      case TaskKind::kAdsGeneration:
        report.at(Metric::kBlAt) = column(0);
        report.at(Metric::kRlAt) = column(1);
        report.at(Metric::kBlAd) = column(2);
        report.at(Metric::kRlAd) = column(3);
        break;
      case TaskKind::kTitleRewriting:
        report.at(Metric::kBlTt) = column(0);
        report.at(Metric::kRlTt) = column(1);
        report.at(Metric::kBlTq) = column(2);
        report.at(Metric::kRlTq) = column(3);
        report.at(Metric::kPpl) = column(4);
        break;
      case TaskKind::kGeneralQa:
        report.at(Metric::kBlQa) = column(0);
        report.at(Metric::kRlQa) = column(1);
        report.at(Metric::kBeQa) = column(4);
        break;
      default:
        break;
    }
  }
  if (!report.partial()) report.AssembleGm();
  return report;
}

std::vector<ReplayRow> ReplayFromJson(const json& j) {
  const json* rows = &j;
  if (j.is_object() && j.contains("rows")) rows = &j.at("rows");
  if (!rows->is_array()) {
    throw Error(ErrorCode::kMalformedInput, "replay file needs a rows array");
  }
  std::vector<ReplayRow> out;
  for (const auto& row : *rows) {
    ReplayRow r;
    try {
      r.model = row.at("model").get<std::string>();
      const auto& values = row.at("values");
      if (values.is_array()) {
        if (values.size() != kMetricCount) {
          throw Error(ErrorCode::kWrongArity,
                      r.model + ": replay row needs 18 values");
        }
        for (std::size_t i = 0; i < kMetricCount; ++i) {
          r.values[i] = values[i].get<double>();
        }
      } else {
        for (std::size_t i = 0; i < kMetricCount; ++i) {
          r.values[i] = values.at(std::string(kNames[i])).get<double>();
        }
      }
      if (auto it = row.find("gm"); it != row.end() && it->is_number()) {
        r.expected_gm = it->get<double>();
      }
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kMalformedInput,
                  std::string("bad replay row: ") + e.what());
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ReplayRow> LoadReplay(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileUnreadable, "cannot read " + path.string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) {
    throw Error(ErrorCode::kMalformedInput, path.string() + " is not JSON");
  }
  return ReplayFromJson(j);
}

MetricReport ReplayReport(const ReplayRow& row) {
  MetricReport r;
  for (std::size_t i = 0; i < kMetricCount; ++i) r.values[i] = row.values[i];
  r.AssembleGm();
  if (!r.gm) {
    throw Error(ErrorCode::kNonPositiveValue,
                row.model + ": replay values must be positive with PPL > 1");
  }
  return r;
}

}  // namespace forge
