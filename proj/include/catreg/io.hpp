#pragma once

// Table input (delimited text or a JSON document with a "counts" array) and
// JSON encodings of the report types.

#include <cctype>
#include <charconv>
#include <istream>
#include <iterator>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "catreg/association.hpp"
#include "catreg/bootstrap.hpp"
#include "catreg/error.hpp"
#include "catreg/estimators.hpp"
#include "catreg/hypothesis.hpp"
#include "catreg/mutual_information.hpp"
#include "catreg/table.hpp"

namespace catreg {

enum class InputFormat { Auto, Delimited, Json };

namespace detail {

struct Field {
  std::string_view text;
  std::size_t column;  // 1-based character column of the first non-blank character
};

inline bool is_blank(char c) { return c == ' ' || c == '\r' || c == '\v' || c == '\f'; }

// Splits one line on commas and tabs, trimming spaces around each field.
inline std::vector<Field> split_fields(std::string_view line) {
  std::vector<Field> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t end = line.find_first_of(",\t", start);
    if (end == std::string_view::npos) end = line.size();
    std::size_t b = start;
    std::size_t e = end;
    while (b < e && is_blank(line[b])) ++b;
    while (e > b && is_blank(line[e - 1])) --e;
    fields.push_back({line.substr(b, e - b), b + 1});
    if (end == line.size()) break;
    start = end + 1;
  }
  return fields;
}

template <class Cell, class Convert>
std::vector<std::vector<Cell>> parse_delimited_rows(std::string_view text, Convert convert) {
  std::vector<std::vector<Cell>> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string_view line = text.substr(pos, nl - pos);
    ++line_no;
    pos = nl + 1;

    std::size_t first = 0;
    while (first < line.size() && (is_blank(line[first]) || line[first] == '\t')) ++first;
    if (first == line.size() || line[first] == '#') continue;

    std::vector<Cell> row;
    for (const Field& f : split_fields(line)) {
      if (f.text.empty()) throw ParseError(ErrorCode::ParseError, "empty field", line_no, f.column);
      row.push_back(convert(f, line_no));
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError(ErrorCode::ParseError,
                       "ragged row: " + std::to_string(row.size()) + " fields, expected " +
                           std::to_string(rows.front().size()),
                       line_no, 0);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(ErrorCode::EmptyTable, "no rows in input", 0, 0);
  return rows;
}

inline std::pair<std::size_t, std::size_t> line_and_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline nlohmann::json parse_json_document(std::string_view text) {
  try {
    return nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = line_and_column(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError(ErrorCode::ParseError, "malformed JSON document", line, col);
  }
}

inline InputFormat sniff(std::string_view text) {
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '{' ? InputFormat::Json : InputFormat::Delimited;
  }
  return InputFormat::Delimited;
}

}  // namespace detail

inline std::vector<std::vector<Count>> parse_count_rows_delimited(std::string_view text) {
  return detail::parse_delimited_rows<Count>(text, [](const detail::Field& f, std::size_t line) {
    Count v = 0;
    const char* begin = f.text.data();
    const char* end = begin + f.text.size();
    if (*begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec == std::errc::result_out_of_range)
      throw ParseError(ErrorCode::ParseError, "count out of range: '" + std::string(f.text) + "'", line, f.column);
    if (ec != std::errc() || ptr != end)
      throw ParseError(ErrorCode::ParseError, "not an integer: '" + std::string(f.text) + "'", line, f.column);
    if (v < 0) throw ParseError(ErrorCode::NegativeCell, "negative count " + std::to_string(v), line, f.column);
    return v;
  });
}

inline std::vector<std::vector<Count>> parse_count_rows_json(std::string_view text) {
  const nlohmann::json doc = detail::parse_json_document(text);
  if (!doc.is_object() || !doc.contains("counts"))
    throw ParseError(ErrorCode::ParseError, "document has no \"counts\" member", 0, 0);
  const auto& counts = doc.at("counts");
  if (!counts.is_array() || counts.empty()) throw ParseError(ErrorCode::EmptyTable, "\"counts\" must be a nonempty array", 0, 0);
  std::vector<std::vector<Count>> rows;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const auto& row = counts[i];
    const std::string where = "counts[" + std::to_string(i) + "]";
    if (!row.is_array()) throw ParseError(ErrorCode::ParseError, where + " is not an array", 0, 0);
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError(ErrorCode::ParseError, "ragged row " + where, 0, 0);
    std::vector<Count> r;
    for (std::size_t j = 0; j < row.size(); ++j) {
      const auto& v = row[j];
      const std::string cell = where + "[" + std::to_string(j) + "]";
      if (!v.is_number_integer()) throw ParseError(ErrorCode::ParseError, cell + " is not an integer", 0, 0);
      if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<Count>::max()))
        throw ParseError(ErrorCode::ParseError, cell + " is out of range", 0, 0);
      const auto c = v.get<Count>();
      if (c < 0) throw ParseError(ErrorCode::NegativeCell, cell + " is negative", 0, 0);
      r.push_back(c);
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

/// Parses a contingency table; Auto treats input starting with '{' as JSON.
inline ContingencyTable parse_table(std::string_view text, InputFormat format = InputFormat::Auto) {
  if (format == InputFormat::Auto) format = detail::sniff(text);
  auto rows = format == InputFormat::Json ? parse_count_rows_json(text) : parse_count_rows_delimited(text);
  return ContingencyTable::from_rows(rows);
}

inline ContingencyTable parse_table(std::istream& in, InputFormat format = InputFormat::Auto) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_table(text, format);
}

/// Rectangular matrix of reals in delimited text (used for MI targets).
inline std::vector<std::vector<double>> parse_real_matrix(std::string_view text) {
  return detail::parse_delimited_rows<double>(text, [](const detail::Field& f, std::size_t line) {
    const std::string s(f.text);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || used == 0 || !std::isfinite(v))
      throw ParseError(ErrorCode::ParseError, "not a finite number: '" + s + "'", line, f.column);
    return v;
  });
}

// ---------------------------------------------------------------------------
// JSON encodings.

inline nlohmann::json to_json(const ContingencyTable& t) { return t.to_rows(); }

inline nlohmann::json to_json(const TestReport& r) {
  return {{"statistic", r.statistic},
          {"scaled_statistic", r.scaled_statistic},
          {"lambda", r.lambda},
          {"reference", std::string(to_string(r.reference))},
          {"p_two_sided", r.p_two_sided},
          {"p_one_sided_upper", r.p_one_sided_upper},
          {"p_one_sided_lower", r.p_one_sided_lower},
          {"calibration_warning", r.calibration_warning}};
}

inline nlohmann::json to_json(const AssociationReport& r) {
  return {{"pearson_c", r.pearson_c}, {"phi", r.phi},         {"cramers_v", r.cramers_v},
          {"lambda", r.lambda},       {"z_star", r.z_star},   {"n", r.n}};
}

inline nlohmann::json to_json(const MIResult& r) {
  return {{"value_nats", r.value}, {"value_bits", r.bits()}, {"lambda", r.lambda}, {"cells_elided", r.cells_elided}};
}

inline nlohmann::json to_json(const BootstrapReport& r) {
  nlohmann::json quantiles = nlohmann::json::array();
  for (const auto& [level, q] : r.empirical_quantiles) quantiles.push_back({{"level", level}, {"value", q}});
  return {{"empirical_quantiles", quantiles},
          {"rejection_rate", r.rejection_rate},
          {"critical_value", r.critical_value},
          {"observed_scaled", r.observed_scaled},
          {"p_value", r.p_value},
          {"degenerate_replicates", r.degenerate_replicates},
          {"replicates", r.replicates},
          {"seed", r.seed},
          {"alpha", r.alpha},
          {"lambda", r.lambda}};
}

}  // namespace catreg
