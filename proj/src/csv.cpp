#include "instab/csv.hpp"

#include <cstdio>
#include <fstream>

#include "instab/error.hpp"

namespace instab {

namespace {

std::string quote(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) throw DomainError("csv: empty header");
}

CsvWriter::Row& CsvWriter::Row::operator<<(double v) {
  cells_.push_back(format_double(v));
  return *this;
}
CsvWriter::Row& CsvWriter::Row::operator<<(int v) {
  cells_.push_back(std::to_string(v));
  return *this;
}
CsvWriter::Row& CsvWriter::Row::operator<<(long v) {
  cells_.push_back(std::to_string(v));
  return *this;
}
CsvWriter::Row& CsvWriter::Row::operator<<(long long v) {
  cells_.push_back(std::to_string(v));
  return *this;
}
CsvWriter::Row& CsvWriter::Row::operator<<(unsigned long v) {
  cells_.push_back(std::to_string(v));
  return *this;
}
CsvWriter::Row& CsvWriter::Row::operator<<(unsigned long long v) {
  cells_.push_back(std::to_string(v));
  return *this;
}
CsvWriter::Row& CsvWriter::Row::operator<<(std::string_view v) {
  cells_.emplace_back(v);
  return *this;
}

CsvWriter::Row::~Row() noexcept(false) { w_.add_row(std::move(cells_)); }

void CsvWriter::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) throw DomainError("csv: row width does not match header");
  rows_.push_back(std::move(cells));
}

std::string CsvWriter::str() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += quote(cells[i]);
    }
    out += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

void CsvWriter::write(const std::string& path) const { write_text_file(path, str()); }

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false, any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(cell));
      cell.clear();
      any = true;
    } else if (c == '\n') {
      row.push_back(std::move(cell));
      cell.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else if (c != '\r') {
      cell += c;
      any = true;
    }
  }
  if (any) {
    row.push_back(std::move(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace instab
