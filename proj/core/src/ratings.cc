// Copyright 2026 The faithctl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <sstream>
#include <unordered_map>

#include "faithctl/analysis.h"
#include "faithctl/errors.h"
#include "json.hpp"

namespace faithctl::analysis {

std::string_view QualityName(Quality q) {
  switch (q) {
    case Quality::kFluency:
      return "fluency";
    case Quality::kRelevance:
      return "relevance";
    case Quality::kFaithfulness:
      return "faithfulness";
    case Quality::kObjectivity:
      return "objectivity";
  }
  return "fluency";
}

std::string_view MeasureName(Measure m) {
  switch (m) {
    case Measure::kNoFirstPerson:
      return "no_first_person";
    case Measure::kLexPrecision:
      return "lex_precision";
    case Measure::kLexRecall:
      return "lex_recall";
    case Measure::kEntailed:
      return "entailed";
  }
  return "no_first_person";
}

RatingsMatrix::RatingsMatrix(std::vector<std::string> items, std::vector<std::string> raters,
                             int min_rating, int max_rating)
    : items_(std::move(items)),
      raters_(std::move(raters)),
      min_rating_(min_rating),
      max_rating_(max_rating) {
  if (raters_.size() < 2) throw InvalidArgument("ratings need at least 2 raters");
  if (min_rating_ > max_rating_) throw InvalidArgument("empty rating range");
  for (Grid& g : grids_) {
    g.assign(items_.size(), std::vector<std::optional<double>>(raters_.size()));
  }
}

void RatingsMatrix::Set(std::size_t item, std::size_t rater, Quality q,
                        std::optional<double> rating) {
  if (rating && !(*rating >= min_rating_ && *rating <= max_rating_)) {
    throw InvalidArgument("rating outside [" + std::to_string(min_rating_) + "," +
                          std::to_string(max_rating_) + "]");
  }
  grids_[static_cast<std::size_t>(q)].at(item).at(rater) = rating;
}

std::optional<double> RatingsMatrix::ItemMean(std::size_t item, Quality q) const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& v : grid(q).at(item)) {
    if (v) {
      sum += *v;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

namespace {

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

RatingsMatrix ReadRatingsCsv(std::istream& in) {
  const std::vector<std::string> kHeader = {"item_id",   "rater_id",     "fluency",
                                            "relevance", "faithfulness", "objectivity"};
  struct Row {
    std::size_t item;
    std::size_t rater;
    std::array<std::optional<double>, 4> values;
    std::size_t line;
  };

  std::string line;
  std::size_t line_no = 0;
  bool seen_header = false;
  std::vector<std::string> items;
  std::vector<std::string> raters;
  std::unordered_map<std::string, std::size_t> item_index;
  std::unordered_map<std::string, std::size_t> rater_index;
  std::vector<Row> rows;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = SplitCsvLine(line);
    if (!seen_header) {
      if (cells != kHeader) {
        throw ParseError("ratings header must be item_id,rater_id,fluency,relevance,"
                         "faithfulness,objectivity", line_no);
      }
      seen_header = true;
      continue;
    }
    if (cells.size() != kHeader.size()) {
      throw ParseError("expected 6 cells, got " + std::to_string(cells.size()), line_no);
    }
    if (cells[0].empty() || cells[1].empty()) {
      throw RecordError("empty item_id or rater_id", line_no);
    }
    Row row{};
    row.line = line_no;
    auto [it, added] = item_index.emplace(cells[0], items.size());
    if (added) items.push_back(cells[0]);
    row.item = it->second;
    auto [rt, radded] = rater_index.emplace(cells[1], raters.size());
    if (radded) raters.push_back(cells[1]);
    row.rater = rt->second;
    for (std::size_t q = 0; q < 4; ++q) {
      const std::string& c = cells[q + 2];
      if (c.empty()) continue;
      std::size_t used = 0;
      int v = 0;
      try {
        v = std::stoi(c, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != c.size()) throw ParseError("rating is not an integer: " + c, line_no);
      row.values[q] = v;
    }
    rows.push_back(row);
  }
  if (!seen_header) throw ParseError("ratings file is empty", 0);

  RatingsMatrix m(std::move(items), std::move(raters));
  std::vector<std::vector<bool>> seen(m.items().size(),
                                      std::vector<bool>(m.raters().size(), false));
  for (const Row& row : rows) {
    if (seen[row.item][row.rater]) {
      throw RecordError("duplicate rating row for item/rater pair", row.line);
    }
    seen[row.item][row.rater] = true;
    for (std::size_t q = 0; q < 4; ++q) {
      try {
        m.Set(row.item, row.rater, kAllQualities[q], row.values[q]);
      } catch (const InvalidArgument& e) {
        throw RecordError(e.what(), row.line);
      }
    }
  }
  return m;
}

double KrippendorffAlpha(const RatingsMatrix::Grid& units) {
  // Sum over ordered pairs i != j of (v_i - v_j)^2 = 2 m S2 - 2 S1^2.
  auto pair_sum = [](double m, double s1, double s2) { return 2.0 * m * s2 - 2.0 * s1 * s1; };

  double n = 0.0;
  double total_s1 = 0.0;
  double total_s2 = 0.0;
  double observed = 0.0;
  for (const auto& unit : units) {
    double m = 0.0;
    double s1 = 0.0;
    double s2 = 0.0;
    for (const auto& v : unit) {
      if (!v) continue;
      m += 1.0;
      s1 += *v;
      s2 += *v * *v;
    }
    if (m < 2.0) continue;
    n += m;
    total_s1 += s1;
    total_s2 += s2;
    observed += pair_sum(m, s1, s2) / (m - 1.0);
  }
  if (n < 2.0) throw InvalidArgument("krippendorff alpha needs at least 2 pairable values");

  const double d_o = observed / n;
  if (d_o <= 0.0) return 1.0;
  const double d_e = pair_sum(n, total_s1, total_s2) / (n * (n - 1.0));
  return 1.0 - d_o / d_e;
}

std::map<std::string, ItemMeasures> ReadItemMeasures(std::istream& in) {
  using nlohmann::json;
  std::map<std::string, ItemMeasures> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const json obj = json::parse(line, nullptr, false);
    if (obj.is_discarded()) throw ParseError("malformed JSON", line_no);
    const auto id = obj.find("id");
    const auto m = obj.find("measures");
    if (!obj.is_object() || id == obj.end() || !id->is_string() || m == obj.end() ||
        !m->is_object()) {
      throw RecordError("expected {\"id\": str, \"measures\": {...}}", line_no);
    }
    auto number = [&](const char* key) {
      const auto it = m->find(key);
      if (it == m->end() || !(it->is_number() || it->is_boolean())) {
        throw RecordError(std::string("measures lack \"") + key + "\"", line_no);
      }
      return it->is_boolean() ? (it->get<bool>() ? 1.0 : 0.0) : it->get<double>();
    };
    ItemMeasures im;
    im.no_first_person = number("objective_voice");
    im.lex_precision = number("lex_precision");
    im.lex_recall = number("lex_recall");
    if (const auto e = m->find("entailed"); e != m->end() && !e->is_null()) {
      im.entailed = number("entailed");
    }
    if (!out.emplace(id->get<std::string>(), im).second) {
      throw RecordError("duplicate id " + id->get<std::string>(), line_no);
    }
  }
  return out;
}

CorrelationTable Correlate(const RatingsMatrix& ratings,
                           const std::map<std::string, ItemMeasures>& measures) {
  CorrelationTable table;
  const std::size_t n_items = ratings.items().size();

  for (Quality q : kAllQualities) {
    const auto qi = static_cast<std::size_t>(q);
    try {
      table.alpha[qi] = KrippendorffAlpha(ratings.grid(q));
    } catch (const InvalidArgument& e) {
      table.alpha_error[qi] = e.what();
    }
  }

  for (Measure m : kAllMeasures) {
    for (Quality q : kAllQualities) {
      CorrelationCell& cell =
          table.cells[static_cast<std::size_t>(m)][static_cast<std::size_t>(q)];
      std::vector<double> xs;
      std::vector<double> ys;
      for (std::size_t i = 0; i < n_items; ++i) {
        const auto rating = ratings.ItemMean(i, q);
        const auto it = measures.find(ratings.items()[i]);
        std::optional<double> value;
        if (it != measures.end()) {
          switch (m) {
            case Measure::kNoFirstPerson:
              value = it->second.no_first_person;
              break;
            case Measure::kLexPrecision:
              value = it->second.lex_precision;
              break;
            case Measure::kLexRecall:
              value = it->second.lex_recall;
              break;
            case Measure::kEntailed:
              value = it->second.entailed;
              break;
          }
        }
        if (!rating || !value) {
          ++cell.n_dropped;
          continue;
        }
        xs.push_back(*value);
        ys.push_back(*rating);
      }
      cell.n_pairs = xs.size();
      try {
        cell.r = Pearson(xs, ys);
      } catch (const InvalidArgument& e) {
        cell.error = e.what();
      }
    }
  }
  return table;
}

std::string CorrelationToJson(const CorrelationTable& table) {
  using nlohmann::json;
  json pearson = json::object();
  for (Measure m : kAllMeasures) {
    json row = json::object();
    for (Quality q : kAllQualities) {
      const CorrelationCell& c = table.at(m, q);
      json cell = {{"n_pairs", c.n_pairs}, {"n_dropped", c.n_dropped}};
      if (c.r) {
        cell["r"] = *c.r;
      } else {
        cell["r"] = nullptr;
        cell["error"] = c.error;
      }
      row[std::string(QualityName(q))] = std::move(cell);
    }
    pearson[std::string(MeasureName(m))] = std::move(row);
  }
  json alpha = json::object();
  for (Quality q : kAllQualities) {
    const auto qi = static_cast<std::size_t>(q);
    if (table.alpha[qi]) {
      alpha[std::string(QualityName(q))] = *table.alpha[qi];
    } else {
      alpha[std::string(QualityName(q))] = nullptr;
    }
  }
  return json{{"pearson", pearson}, {"krippendorff_alpha", alpha}}.dump();
}

}  // namespace faithctl::analysis
