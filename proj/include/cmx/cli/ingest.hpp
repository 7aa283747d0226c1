#pragma once

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cmx/core.hpp"
#include "cmx/outcome_spaces.hpp"

namespace cmx::cli {

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(Axis::Io, what) {}
};

enum class InputFormat { Csv, RawF64, Pgm };

inline InputFormat parse_input_format(std::string_view s) {
  if (s == "csv") return InputFormat::Csv;
  if (s == "raw-f64") return InputFormat::RawF64;
  if (s == "pgm" || s == "pgm-image") return InputFormat::Pgm;
  throw IoError("unknown input format '" + std::string(s) + "' (expected csv, raw-f64 or pgm)");
}

// Selected CSV columns, each a header name or a 0-based index. Empty selects
// every column.
struct CsvOptions {
  std::vector<std::string> columns;
  std::optional<bool> header;  // nullopt: header iff the first row is not numeric
};

using Dataset = std::variant<TimeSeries, StateSpaceSet, Matrix>;

inline DataView view(const Dataset& d) {
  return std::visit([](const auto& v) { return DataView(v); }, d);
}

inline std::string read_file(const std::string& path, bool binary) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed for '" + path + "'");
  return s;
}

namespace detail {

inline std::optional<double> parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

struct CsvRow {
  std::size_t line = 0;  // 1-based line where the record starts
  std::vector<std::string> fields;
};

// RFC 4180 records: quoted fields may contain separators, doubled quotes and
// line breaks. Blank lines are skipped.
inline std::vector<CsvRow> split_csv(std::string_view text) {
  std::vector<CsvRow> rows;
  std::size_t i = 0, line = 1;
  while (i < text.size()) {
    CsvRow row;
    row.line = line;
    std::string field;
    bool in_quotes = false, quoted = false, end_of_record = false;
    while (i < text.size() && !end_of_record) {
      const char c = text[i];
      if (in_quotes) {
        if (c == '"') {
          if (i + 1 < text.size() && text[i + 1] == '"') {
            field += '"';
            i += 2;
            continue;
          }
          in_quotes = false;
        } else {
          if (c == '\n') ++line;
          field += c;
        }
        ++i;
        continue;
      }
      switch (c) {
        case '"':
          if (!field.empty() || quoted)
            throw IoError("line " + std::to_string(line) + ": unexpected quote inside unquoted field");
          in_quotes = quoted = true;
          break;
        case ',':
          row.fields.push_back(std::move(field));
          field.clear();
          quoted = false;
          break;
        case '\r':
          break;
        case '\n':
          ++line;
          end_of_record = true;
          break;
        default:
          if (quoted) throw IoError("line " + std::to_string(line) + ": text after closing quote");
          field += c;
      }
      ++i;
    }
    if (in_quotes) throw IoError("line " + std::to_string(row.line) + ": unterminated quoted field");
    row.fields.push_back(std::move(field));
    const bool blank = row.fields.size() == 1 && row.fields[0].empty() && !quoted;
    if (!blank) rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

// One selected column gives a TimeSeries, several give a StateSpaceSet with one
// dimension per column.
inline Dataset parse_csv(std::string_view text, const CsvOptions& opt = {}) {
  auto rows = detail::split_csv(text);
  if (rows.empty()) throw IoError("CSV input has no rows");
  const std::size_t width = rows.front().fields.size();
  for (const auto& r : rows)
    if (r.fields.size() != width)
      throw IoError("line " + std::to_string(r.line) + ": expected " + std::to_string(width) + " fields, got " +
                    std::to_string(r.fields.size()));

  bool header = false;
  if (opt.header) {
    header = *opt.header;
  } else {
    for (const auto& f : rows.front().fields) header = header || !detail::parse_double(f);
  }
  const std::vector<std::string>* names = header ? &rows.front().fields : nullptr;

  std::vector<std::size_t> cols;
  if (opt.columns.empty()) {
    for (std::size_t c = 0; c < width; ++c) cols.push_back(c);
  }
  for (const auto& sel : opt.columns) {
    std::optional<std::size_t> idx;
    if (names) {
      for (std::size_t c = 0; c < width && !idx; ++c)
        if ((*names)[c] == sel) idx = c;
    }
    if (!idx && !sel.empty() && sel.find_first_not_of("0123456789") == std::string::npos) idx = std::stoul(sel);
    if (!idx || *idx >= width) throw IoError("CSV has no column '" + sel + "'");
    cols.push_back(*idx);
  }

  const std::size_t first = header ? 1 : 0;
  const std::size_t n = rows.size() - first;
  std::vector<double> data;
  data.reserve(n * cols.size());
  for (std::size_t r = first; r < rows.size(); ++r) {
    for (std::size_t c : cols) {
      const auto& f = rows[r].fields[c];
      const auto v = detail::parse_double(f);
      if (!v) throw IoError("line " + std::to_string(rows[r].line) + ": cannot parse '" + f + "' as a number");
      if (!std::isfinite(*v))
        throw IoError("line " + std::to_string(rows[r].line) + ": non-finite value '" + f + "'");
      data.push_back(*v);
    }
  }
  if (cols.size() == 1) return TimeSeries(std::move(data));
  return StateSpaceSet(cols.size(), std::move(data));
}

// Contiguous little-endian IEEE-754 doubles.
inline TimeSeries parse_raw_f64(std::string_view bytes) {
  if (bytes.size() % 8 != 0)
    throw IoError("raw-f64 input has " + std::to_string(bytes.size()) + " bytes, not a multiple of 8");
  TimeSeries x(bytes.size() / 8);
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::uint64_t u = 0;
    std::memcpy(&u, bytes.data() + 8 * i, 8);
    if constexpr (std::endian::native == std::endian::big) u = __builtin_bswap64(u);
    x[i] = std::bit_cast<double>(u);
    if (!std::isfinite(x[i])) throw IoError("raw-f64 value " + std::to_string(i) + " (byte offset " +
                                            std::to_string(8 * i) + ") is not finite");
  }
  return x;
}

// Plain (P2) or raw (P5) greymap, each pixel divided by maxval.
inline Matrix parse_pgm(std::string_view bytes) {
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto integer = [&](const char* what) -> std::uint64_t {
    skip_space();
    const std::size_t begin = pos;
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(bytes.data() + pos, bytes.data() + bytes.size(), v);
    if (ec != std::errc()) throw IoError(std::string("PGM: cannot read ") + what + " at byte offset " + std::to_string(begin));
    pos = static_cast<std::size_t>(p - bytes.data());
    return v;
  };
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5'))
    throw IoError("PGM: expected magic P2 or P5");
  const bool binary = bytes[1] == '5';
  pos = 2;
  const auto cols = integer("width");
  const auto rows = integer("height");
  const auto maxval = integer("maxval");
  if (cols == 0 || rows == 0) throw IoError("PGM: empty image");
  if (maxval == 0 || maxval > 65535) throw IoError("PGM: maxval must be in 1..65535");
  const double scale = static_cast<double>(maxval);
  std::vector<double> data(rows * cols);
  if (binary) {
    ++pos;  // single whitespace byte after maxval
    const std::size_t sample = maxval < 256 ? 1 : 2;
    if (bytes.size() < pos + data.size() * sample)
      throw IoError("PGM: raster truncated, expected " + std::to_string(data.size() * sample) + " bytes");
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto* b = reinterpret_cast<const unsigned char*>(bytes.data() + pos + i * sample);
      const unsigned v = sample == 1 ? b[0] : (static_cast<unsigned>(b[0]) << 8 | b[1]);
      if (v > maxval) throw IoError("PGM: pixel " + std::to_string(i) + " exceeds maxval");
      data[i] = v / scale;
    }
  } else {
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto v = integer("pixel");
      if (v > maxval) throw IoError("PGM: pixel " + std::to_string(i) + " exceeds maxval");
      data[i] = static_cast<double>(v) / scale;
    }
  }
  return Matrix(rows, cols, std::move(data));
}

inline Dataset ingest(const std::string& path, InputFormat format, const CsvOptions& csv = {}) {
  switch (format) {
    case InputFormat::Csv: return parse_csv(read_file(path, false), csv);
    case InputFormat::RawF64: return parse_raw_f64(read_file(path, true));
    case InputFormat::Pgm: return parse_pgm(read_file(path, true));
  }
  throw IoError("unsupported format");
}

}  // namespace cmx::cli
