#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "opmean/errors.hpp"
#include "opmean/matfun.hpp"
#include "opmean/means.hpp"

namespace opmean {

enum class FileFormat { json, csv };

inline constexpr std::string_view to_string(FileFormat f) { return f == FileFormat::json ? "json" : "csv"; }

inline std::optional<FileFormat> parse_file_format(std::string_view s) {
  if (s == "json") return FileFormat::json;
  if (s == "csv") return FileFormat::csv;
  return std::nullopt;
}

// An ordered list of symmetric matrices of one dimension. CSV files carry no labels.
struct MatrixFile {
  std::size_t dim = 0;
  std::vector<SymMatrix> matrices;
  std::vector<std::string> labels;

  static MatrixFile from_tuple(const SpdTuple& t) {
    MatrixFile f;
    f.dim = t.dim();
    for (std::size_t i = 0; i < t.size(); ++i) {
      f.matrices.push_back(t[i]);
      f.labels.push_back("A" + std::to_string(i + 1));
    }
    return f;
  }

  static MatrixFile single(const SymMatrix& m, std::string label) {
    return MatrixFile{m.dim(), {m}, {std::move(label)}};
  }

  // Certifies every matrix as SPD; errors name the offending index.
  SpdTuple to_tuple() const {
    if (matrices.empty()) throw input_error("matrix file contains no matrices");
    std::vector<SpdMatrix> out;
    out.reserve(matrices.size());
    for (std::size_t i = 0; i < matrices.size(); ++i) {
      if (matrices[i].dim() != dim)
        throw input_error("matrix " + std::to_string(i) + ": dimension does not match file dim");
      try {
        out.push_back(SpdMatrix::certify(matrices[i]));
      } catch (const domain_error& e) {
        throw input_error("matrix " + std::to_string(i) + ": " + e.what());
      }
    }
    return SpdTuple(std::move(out));
  }
};

namespace detail {

inline SymMatrix checked_symmetric(std::size_t index, std::size_t n, std::vector<double> entries) {
  try {
    return SymMatrix(Matrix(n, std::move(entries)));
  } catch (const error& e) {
    throw input_error("matrix " + std::to_string(index) + ": " + e.what());
  }
}

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s, std::size_t line) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw input_error("csv line " + std::to_string(line) + ": invalid number '" + std::string(s) + "'");
  return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

inline bool blank(std::string_view s) { return s.find_first_not_of(" \t\r") == std::string_view::npos; }

}  // namespace detail

inline MatrixFile parse_json(std::string_view text) {
  using json = nlohmann::ordered_json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw input_error(std::string("json: ") + e.what());
  }
  if (!doc.is_object()) throw input_error("json: top level must be an object");
  if (!doc.contains("dim") || !doc["dim"].is_number_integer() || doc["dim"].get<long long>() <= 0)
    throw input_error("json: 'dim' must be a positive integer");
  if (!doc.contains("matrices") || !doc["matrices"].is_array()) throw input_error("json: 'matrices' must be an array");

  MatrixFile f;
  f.dim = doc["dim"].get<std::size_t>();
  const std::size_t n = f.dim;
  const auto& mats = doc["matrices"];
  for (std::size_t idx = 0; idx < mats.size(); ++idx) {
    const auto& m = mats[idx];
    const std::string where = "matrix " + std::to_string(idx);
    if (!m.is_array() || m.size() != n) throw input_error(where + ": expected " + std::to_string(n) + " rows");
    std::vector<double> entries;
    entries.reserve(n * n);
    for (const auto& row : m) {
      if (!row.is_array() || row.size() != n)
        throw input_error(where + ": every row must have " + std::to_string(n) + " entries");
      for (const auto& v : row) {
        if (!v.is_number()) throw input_error(where + ": entries must be numbers");
        entries.push_back(v.get<double>());
      }
    }
    f.matrices.push_back(detail::checked_symmetric(idx, n, std::move(entries)));
  }
  if (doc.contains("labels")) {
    const auto& labels = doc["labels"];
    if (!labels.is_array() || labels.size() != f.matrices.size())
      throw input_error("json: 'labels' must be an array with one string per matrix");
    for (const auto& l : labels) {
      if (!l.is_string()) throw input_error("json: labels must be strings");
      f.labels.push_back(l.get<std::string>());
    }
  }
  return f;
}

inline std::string to_json(const MatrixFile& f) {
  using json = nlohmann::ordered_json;
  json doc;
  doc["dim"] = f.dim;
  json mats = json::array();
  for (const auto& m : f.matrices) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
      json row = json::array();
      for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(m(i, j));
      rows.push_back(std::move(row));
    }
    mats.push_back(std::move(rows));
  }
  doc["matrices"] = std::move(mats);
  doc["labels"] = f.labels;
  return doc.dump() + "\n";
}

inline MatrixFile parse_csv(std::string_view text) {
  std::vector<std::string_view> lines = detail::split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw input_error("csv: empty input");

  const auto header = detail::split(lines[0], ',');
  if (header.size() != 2 || header[0] != "dim") throw input_error("csv line 1: header must be 'dim,n'");
  const double nd = detail::parse_double(header[1], 1);
  if (!(nd >= 1) || nd != static_cast<double>(static_cast<std::size_t>(nd)))
    throw input_error("csv line 1: dim must be a positive integer");

  MatrixFile f;
  f.dim = static_cast<std::size_t>(nd);
  const std::size_t n = f.dim;
  std::vector<double> entries;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (detail::blank(lines[li])) {
      if (!entries.empty())
        throw input_error("matrix " + std::to_string(f.matrices.size()) + ": expected " + std::to_string(n) +
                          " rows");
      continue;
    }
    const auto cells = detail::split(lines[li], ',');
    if (cells.size() != n)
      throw input_error("matrix " + std::to_string(f.matrices.size()) + ": csv line " + std::to_string(li + 1) +
                        " has " + std::to_string(cells.size()) + " entries, expected " + std::to_string(n));
    for (auto c : cells) entries.push_back(detail::parse_double(c, li + 1));
    if (entries.size() == n * n) {
      f.matrices.push_back(detail::checked_symmetric(f.matrices.size(), n, std::move(entries)));
      entries.clear();
    }
  }
  if (!entries.empty())
    throw input_error("matrix " + std::to_string(f.matrices.size()) + ": truncated at end of input");
  return f;
}

inline std::string to_csv(const MatrixFile& f) {
  std::string out = "dim," + std::to_string(f.dim) + "\n";
  for (std::size_t idx = 0; idx < f.matrices.size(); ++idx) {
    if (idx > 0) out += "\n";
    const auto& m = f.matrices[idx];
    for (std::size_t i = 0; i < m.dim(); ++i) {
      for (std::size_t j = 0; j < m.dim(); ++j) {
        if (j > 0) out += ",";
        out += detail::format_double(m(i, j));
      }
      out += "\n";
    }
  }
  return out;
}

inline MatrixFile parse_matrix_file(std::string_view text, FileFormat format) {
  return format == FileFormat::json ? parse_json(text) : parse_csv(text);
}

inline std::string serialize(const MatrixFile& f, FileFormat format) {
  return format == FileFormat::json ? to_json(f) : to_csv(f);
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw input_error("cannot open '" + path + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw input_error("write to '" + path + "' failed");
}

inline MatrixFile read_matrix_file(const std::string& path, FileFormat format) {
  return parse_matrix_file(read_text(path), format);
}

}  // namespace opmean
