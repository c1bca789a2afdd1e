#pragma once

#include "rdbn/types.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rdbn {

// Year coverage of the R&D indicator series.
inline constexpr int kFirstYear = 1997;
inline constexpr int kLastYear = 2014;
inline constexpr int kYearCount = kLastYear - kFirstYear + 1;

/// Derivation chain for one (country, year): raw indicator cells and the
/// values computed from them. A derived cell is present iff all its inputs
/// are, and expenditure-per-researcher additionally needs researchers > 0.
struct IndicatorRow {
  std::optional<double> expend;   // R&D expenditure, % of GDP
  std::optional<double> numbrd;   // researchers per million people
  std::optional<double> gdp;      // current US dollars
  std::optional<double> pop;      // persons
  std::optional<double> tot_exp;  // dollars
  std::optional<double> tot_rd;   // persons
  std::optional<double> exp_per_rd;  // dollars per researcher
};

class IndicatorTable {
 public:
  void insert(const std::string& country, int year, IndicatorRow row);
  const IndicatorRow* find(const std::string& country, int year) const;
  std::vector<std::string> countries() const;
  std::size_t size() const { return rows_.size(); }
  /// Recomputes the derived columns of every row from its raw cells.
  void derive_all();

 private:
  std::map<std::pair<std::string, int>, IndicatorRow> rows_;
};

enum class Subject { math, reading, science };

Subject parse_subject(const std::string& text);
std::string subject_name(Subject subject);
/// Display form for graph labels ("Read", "Math", "Science").
std::string subject_display(const std::string& subject_tag);

/// National mean score per (country, subject).
class ScoreTable {
 public:
  void set(const std::string& country, Subject subject, double score);
  std::optional<double> find(const std::string& country, Subject subject) const;
  std::vector<std::string> countries(Subject subject) const;

 private:
  std::map<std::pair<std::string, int>, double> scores_;
};

struct ScoreRecord {
  std::string country;
  Subject subject;
  double mark;
};

/// Observation matrix [Y, X_1997..X_2014] with an explicit missing mask.
/// Column 0 is always the outcome; the outcome column is always complete.
class MergedDataset {
 public:
  MergedDataset() = default;
  MergedDataset(std::string subject, std::vector<std::string> countries,
                std::vector<std::string> columns, Matrix values, BoolMatrix mask);

  Index n() const { return values_.rows(); }
  Index p() const { return values_.cols() - 1; }  // predictor columns
  const std::string& subject() const { return subject_; }
  const std::vector<std::string>& countries() const { return countries_; }
  const std::vector<std::string>& columns() const { return columns_; }
  const Matrix& values() const { return values_; }
  const BoolMatrix& mask() const { return mask_; }

  long missing_count() const;  // |S_NA|
  long cell_universe() const { return static_cast<long>(n() * p()); }  // |S_T|
  bool complete() const { return missing_count() == 0; }

  /// Complete view; throws when any cell is still missing.
  DataTable table() const;

  /// Same dataset with the predictor block replaced by completed values.
  MergedDataset with_values(Matrix completed) const;

 private:
  std::string subject_;
  std::vector<std::string> countries_;
  std::vector<std::string> columns_;
  Matrix values_;   // NaN at masked cells
  BoolMatrix mask_;
};

// Eqs of the derivation chain. Missing inputs propagate as missing through
// the optional-lifted wrappers; invalid magnitudes throw ValidationError.
double compute_total_expenditure(double expend_pct_gdp, double gdp_dollars);
double compute_total_researchers(double researchers_per_million, double population);
/// Returns nullopt (with a warning) when researchers == 0.
std::optional<double> compute_exp_per_researcher(double total_expenditure,
                                                 double total_researchers);
/// Natural log; nullopt (with a warning) for non-positive input.
std::optional<double> log_transform(double exp_per_researcher);

/// Fills the derived columns of every row from its raw cells.
void derive_indicators(IndicatorTable& table);

/// Unweighted mean mark per (country, subject).
ScoreTable aggregate_national_scores(const std::vector<ScoreRecord>& records);

/// Inner join on country code; countries lacking the chosen score are
/// dropped. X columns are log expenditure-per-researcher, 1997..2014.
MergedDataset merge(const ScoreTable& scores, const IndicatorTable& indicators,
                    Subject subject);

struct MissingnessSummary {
  std::map<std::string, long> per_column;
  std::map<std::string, long> per_country;
  long total = 0;
};

MissingnessSummary missingness_summary(const MergedDataset& dataset);

// CSV interfaces. Headers are fixed; violations throw ValidationError
// naming the offending line or column.
IndicatorTable read_indicator_csv(const std::string& text);
ScoreTable read_score_csv(const std::string& text);

std::string merged_to_csv(const MergedDataset& dataset);
MergedDataset merged_from_csv(const std::string& text, const std::string& subject);
std::string merged_sidecar_json(const MergedDataset& dataset);

}  // namespace rdbn
