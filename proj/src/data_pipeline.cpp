#include "rdbn/data_pipeline.hpp"

#include "rdbn/csv.hpp"
#include "rdbn/warnings.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace rdbn {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string cell_name(const std::string& country, int year) {
  return country + "/" + std::to_string(year);
}

}  // namespace

void IndicatorTable::insert(const std::string& country, int year, IndicatorRow row) {
  if (year < kFirstYear || year > kLastYear)
    throw ValidationError("year " + std::to_string(year) + " outside " +
                          std::to_string(kFirstYear) + ".." + std::to_string(kLastYear));
  auto [it, inserted] = rows_.emplace(std::make_pair(country, year), row);
  if (!inserted)
    throw ValidationError("duplicate indicator row for " + cell_name(country, year));
}

const IndicatorRow* IndicatorTable::find(const std::string& country, int year) const {
  auto it = rows_.find({country, year});
  return it == rows_.end() ? nullptr : &it->second;
}

std::vector<std::string> IndicatorTable::countries() const {
  std::vector<std::string> out;
  for (const auto& [key, row] : rows_) {
    if (out.empty() || out.back() != key.first) out.push_back(key.first);
  }
  return out;
}

void IndicatorTable::derive_all() {
  for (auto& [key, row] : rows_) {
    row.tot_exp.reset();
    row.tot_rd.reset();
    row.exp_per_rd.reset();
    if (row.expend && row.gdp)
      row.tot_exp = compute_total_expenditure(*row.expend, *row.gdp);
    if (row.numbrd && row.pop)
      row.tot_rd = compute_total_researchers(*row.numbrd, *row.pop);
    if (row.tot_exp && row.tot_rd)
      row.exp_per_rd = compute_exp_per_researcher(*row.tot_exp, *row.tot_rd);
  }
}

Subject parse_subject(const std::string& text) {
  if (text == "math") return Subject::math;
  if (text == "reading") return Subject::reading;
  if (text == "science") return Subject::science;
  throw ValidationError("unknown subject '" + text + "' (expected math|reading|science)");
}

std::string subject_name(Subject subject) {
  switch (subject) {
    case Subject::math: return "math";
    case Subject::reading: return "reading";
    default: return "science";
  }
}

std::string subject_display(const std::string& subject_tag) {
  if (subject_tag == "reading") return "Read";
  if (subject_tag == "math") return "Math";
  if (subject_tag == "science") return "Science";
  return "Y";
}

void ScoreTable::set(const std::string& country, Subject subject, double score) {
  if (!std::isfinite(score))
    throw ValidationError("non-finite score for country " + country);
  auto [it, inserted] = scores_.emplace(
      std::make_pair(country, static_cast<int>(subject)), score);
  if (!inserted)
    throw ValidationError("duplicate score for country " + country + ", subject " +
                          subject_name(subject));
}

std::optional<double> ScoreTable::find(const std::string& country, Subject subject) const {
  auto it = scores_.find({country, static_cast<int>(subject)});
  if (it == scores_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> ScoreTable::countries(Subject subject) const {
  std::vector<std::string> out;
  for (const auto& [key, score] : scores_) {
    if (key.second == static_cast<int>(subject)) out.push_back(key.first);
  }
  return out;
}

MergedDataset::MergedDataset(std::string subject, std::vector<std::string> countries,
                             std::vector<std::string> columns, Matrix values,
                             BoolMatrix mask)
    : subject_(std::move(subject)),
      countries_(std::move(countries)),
      columns_(std::move(columns)),
      values_(std::move(values)),
      mask_(std::move(mask)) {
  if (values_.rows() != static_cast<Index>(countries_.size()) ||
      values_.cols() != static_cast<Index>(columns_.size()) ||
      mask_.rows() != values_.rows() || mask_.cols() != values_.cols())
    throw ValidationError("merged dataset shape mismatch");
  for (Index r = 0; r < values_.rows(); ++r) {
    if (mask_(r, 0))
      throw ValidationError("outcome missing for country " + countries_[static_cast<std::size_t>(r)]);
  }
}

long MergedDataset::missing_count() const {
  long count = 0;
  for (Index r = 0; r < mask_.rows(); ++r) {
    for (Index c = 1; c < mask_.cols(); ++c) {
      if (mask_(r, c)) ++count;
    }
  }
  return count;
}

DataTable MergedDataset::table() const {
  if (!complete())
    throw ValidationError("dataset still has " + std::to_string(missing_count()) +
                          " missing cells");
  return {columns_, values_};
}

MergedDataset MergedDataset::with_values(Matrix completed) const {
  if (completed.rows() != values_.rows() || completed.cols() != values_.cols())
    throw ValidationError("completed matrix shape mismatch");
  MergedDataset out = *this;
  out.values_ = std::move(completed);
  out.mask_ = BoolMatrix::Constant(values_.rows(), values_.cols(), false);
  return out;
}

double compute_total_expenditure(double expend_pct_gdp, double gdp_dollars) {
  if (expend_pct_gdp < 0.0 || expend_pct_gdp > 100.0)
    throw ValidationError("expenditure share must lie in [0, 100]");
  if (gdp_dollars < 0.0) throw ValidationError("GDP must be nonnegative");
  return expend_pct_gdp * gdp_dollars * 1e-2;
}

double compute_total_researchers(double researchers_per_million, double population) {
  if (researchers_per_million < 0.0)
    throw ValidationError("researcher density must be nonnegative");
  if (population < 0.0) throw ValidationError("population must be nonnegative");
  return researchers_per_million * population * 1e-6;
}

std::optional<double> compute_exp_per_researcher(double total_expenditure,
                                                 double total_researchers) {
  if (total_researchers < 0.0)
    throw ValidationError("researcher count must be nonnegative");
  if (total_researchers == 0.0) {
    warn("expenditure per researcher undefined: zero researchers");
    return std::nullopt;
  }
  return total_expenditure / total_researchers;
}

std::optional<double> log_transform(double exp_per_researcher) {
  if (exp_per_researcher <= 0.0) {
    warn("log transform undefined for non-positive value " +
         csv::format(exp_per_researcher));
    return std::nullopt;
  }
  return std::log(exp_per_researcher);
}

void derive_indicators(IndicatorTable& table) { table.derive_all(); }

ScoreTable aggregate_national_scores(const std::vector<ScoreRecord>& records) {
  std::map<std::pair<std::string, int>, std::pair<double, long>> sums;
  for (const ScoreRecord& r : records) {
    if (!std::isfinite(r.mark))
      throw ValidationError("non-finite mark for country " + r.country);
    auto& [sum, count] = sums[{r.country, static_cast<int>(r.subject)}];
    sum += r.mark;
    ++count;
  }
  ScoreTable table;
  for (const auto& [key, acc] : sums) {
    table.set(key.first, static_cast<Subject>(key.second),
              acc.first / static_cast<double>(acc.second));
  }
  return table;
}

MergedDataset merge(const ScoreTable& scores, const IndicatorTable& indicators,
                    Subject subject) {
  std::vector<std::string> indicator_countries = indicators.countries();
  std::vector<std::string> merged_countries;
  for (const std::string& country : scores.countries(subject)) {
    if (std::binary_search(indicator_countries.begin(), indicator_countries.end(), country))
      merged_countries.push_back(country);
  }
  if (merged_countries.empty())
    throw ValidationError("no countries shared between scores and indicators");

  std::vector<std::string> columns{"Y"};
  for (int year = kFirstYear; year <= kLastYear; ++year)
    columns.push_back("X" + std::to_string(year));

  const auto n = static_cast<Index>(merged_countries.size());
  const auto cols = static_cast<Index>(columns.size());
  Matrix values = Matrix::Constant(n, cols, kNaN);
  BoolMatrix mask = BoolMatrix::Constant(n, cols, true);

  for (Index r = 0; r < n; ++r) {
    const std::string& country = merged_countries[static_cast<std::size_t>(r)];
    values(r, 0) = *scores.find(country, subject);
    mask(r, 0) = false;
    for (int year = kFirstYear; year <= kLastYear; ++year) {
      const Index c = 1 + static_cast<Index>(year - kFirstYear);
      const IndicatorRow* row = indicators.find(country, year);
      if (row == nullptr || !row->exp_per_rd) continue;
      std::optional<double> logged = log_transform(*row->exp_per_rd);
      if (!logged) continue;
      values(r, c) = *logged;
      mask(r, c) = false;
    }
  }
  return MergedDataset(subject_name(subject), std::move(merged_countries),
                       std::move(columns), std::move(values), std::move(mask));
}

MissingnessSummary missingness_summary(const MergedDataset& dataset) {
  MissingnessSummary summary;
  const auto& mask = dataset.mask();
  for (Index c = 1; c < mask.cols(); ++c)
    summary.per_column[dataset.columns()[static_cast<std::size_t>(c)]] = 0;
  for (Index r = 0; r < mask.rows(); ++r)
    summary.per_country[dataset.countries()[static_cast<std::size_t>(r)]] = 0;
  for (Index r = 0; r < mask.rows(); ++r) {
    for (Index c = 1; c < mask.cols(); ++c) {
      if (!mask(r, c)) continue;
      ++summary.per_column[dataset.columns()[static_cast<std::size_t>(c)]];
      ++summary.per_country[dataset.countries()[static_cast<std::size_t>(r)]];
      ++summary.total;
    }
  }
  return summary;
}

IndicatorTable read_indicator_csv(const std::string& text) {
  auto rows = csv::parse(text);
  const std::vector<std::string> header{"country", "year", "expend",
                                        "numbrd", "gdp", "pop"};
  if (rows.empty())
    throw ValidationError("indicator CSV is empty");
  if (rows[0] != header) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i >= rows[0].size() || rows[0][i] != header[i])
        throw ValidationError("indicator CSV header: expected column '" + header[i] +
                              "' at position " + std::to_string(i + 1));
    }
    throw ValidationError("indicator CSV header has extra columns");
  }

  IndicatorTable table;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const int line = static_cast<int>(i + 1);
    const auto& fields = rows[i];
    if (fields.size() != header.size())
      throw ValidationError("line " + std::to_string(line) + ": expected " +
                            std::to_string(header.size()) + " fields, got " +
                            std::to_string(fields.size()));
    if (fields[0].empty())
      throw ValidationError("line " + std::to_string(line) + ": empty country code");
    IndicatorRow row;
    int year = static_cast<int>(csv::parse_long(fields[1], line, "year"));
    try {
      row.expend = csv::parse_optional(fields[2], line, "expend");
      row.numbrd = csv::parse_optional(fields[3], line, "numbrd");
      row.gdp = csv::parse_optional(fields[4], line, "gdp");
      row.pop = csv::parse_optional(fields[5], line, "pop");
      if (row.expend && (*row.expend < 0.0 || *row.expend > 100.0))
        throw ValidationError("expend outside [0, 100]");
      if (row.numbrd && *row.numbrd < 0.0) throw ValidationError("negative numbrd");
      if (row.gdp && *row.gdp < 0.0) throw ValidationError("negative gdp");
      if (row.pop && *row.pop < 0.0) throw ValidationError("negative pop");
      table.insert(fields[0], year, row);
    } catch (const ValidationError& e) {
      std::string what = e.what();
      if (what.rfind("line ", 0) == 0) throw;
      throw ValidationError("line " + std::to_string(line) + ": " + what);
    }
  }
  derive_indicators(table);
  return table;
}

ScoreTable read_score_csv(const std::string& text) {
  auto rows = csv::parse(text);
  if (rows.empty()) throw ValidationError("score CSV is empty");
  const std::vector<std::string> aggregated{"country", "subject", "score"};
  const std::vector<std::string> individual{"country", "subject", "mark"};

  bool is_individual;
  if (rows[0] == aggregated) {
    is_individual = false;
  } else if (rows[0] == individual) {
    is_individual = true;
  } else {
    throw ValidationError(
        "score CSV header must be country,subject,score or country,subject,mark");
  }

  std::vector<ScoreRecord> records;
  ScoreTable table;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const int line = static_cast<int>(i + 1);
    const auto& fields = rows[i];
    if (fields.size() != 3)
      throw ValidationError("line " + std::to_string(line) + ": expected 3 fields");
    if (fields[0].empty())
      throw ValidationError("line " + std::to_string(line) + ": empty country code");
    Subject subject;
    try {
      subject = parse_subject(fields[1]);
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(line) + ": " + e.what());
    }
    double value = csv::parse_double(fields[2], line, is_individual ? "mark" : "score");
    if (is_individual) {
      records.push_back({fields[0], subject, value});
    } else {
      try {
        table.set(fields[0], subject, value);
      } catch (const ValidationError& e) {
        throw ValidationError("line " + std::to_string(line) + ": " + e.what());
      }
    }
  }
  return is_individual ? aggregate_national_scores(records) : table;
}

std::string merged_to_csv(const MergedDataset& dataset) {
  std::vector<std::string> header{"country"};
  header.insert(header.end(), dataset.columns().begin(), dataset.columns().end());
  std::string out = csv::join(header) + "\n";
  for (Index r = 0; r < dataset.n(); ++r) {
    std::vector<std::string> fields{dataset.countries()[static_cast<std::size_t>(r)]};
    for (Index c = 0; c < dataset.values().cols(); ++c) {
      fields.push_back(dataset.mask()(r, c) ? "" : csv::format(dataset.values()(r, c)));
    }
    out += csv::join(fields) + "\n";
  }
  return out;
}

MergedDataset merged_from_csv(const std::string& text, const std::string& subject) {
  auto rows = csv::parse(text);
  if (rows.empty()) throw ValidationError("merged CSV is empty");
  const auto& header = rows[0];
  if (header.size() < 3 || header[0] != "country" || header[1] != "Y")
    throw ValidationError("merged CSV header must start with country,Y");

  std::vector<std::string> columns(header.begin() + 1, header.end());
  const auto n = static_cast<Index>(rows.size() - 1);
  const auto cols = static_cast<Index>(columns.size());
  if (n == 0) throw ValidationError("merged CSV has no data rows");

  std::vector<std::string> countries;
  Matrix values = Matrix::Constant(n, cols, kNaN);
  BoolMatrix mask = BoolMatrix::Constant(n, cols, true);
  for (Index r = 0; r < n; ++r) {
    const int line = static_cast<int>(r + 2);
    const auto& fields = rows[static_cast<std::size_t>(r + 1)];
    if (fields.size() != header.size())
      throw ValidationError("line " + std::to_string(line) + ": expected " +
                            std::to_string(header.size()) + " fields");
    countries.push_back(fields[0]);
    for (Index c = 0; c < cols; ++c) {
      auto value = csv::parse_optional(fields[static_cast<std::size_t>(c + 1)], line,
                                       columns[static_cast<std::size_t>(c)]);
      if (value) {
        values(r, c) = *value;
        mask(r, c) = false;
      }
    }
  }
  return MergedDataset(subject, std::move(countries), std::move(columns),
                       std::move(values), std::move(mask));
}

std::string merged_sidecar_json(const MergedDataset& dataset) {
  nlohmann::json doc;
  doc["subject"] = dataset.subject();
  doc["n"] = dataset.n();
  doc["p"] = dataset.p();
  doc["missing_cells"] = dataset.missing_count();
  doc["cell_universe"] = dataset.cell_universe();
  return doc.dump(2);
}

}  // namespace rdbn
