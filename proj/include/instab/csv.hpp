#pragma once

// Deterministic CSV output: fixed column order, %.17g floats, LF endings.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace instab {

std::string format_double(double v);

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  class Row {
   public:
    Row& operator<<(double v);
    Row& operator<<(int v);
    Row& operator<<(long v);
    Row& operator<<(long long v);
    Row& operator<<(unsigned long v);
    Row& operator<<(unsigned long long v);
    Row& operator<<(std::string_view v);
    Row& operator<<(const char* v) { return *this << std::string_view(v); }
    ~Row() noexcept(false);
    Row(const Row&) = delete;
    Row& operator=(const Row&) = delete;

   private:
    friend class CsvWriter;
    explicit Row(CsvWriter& w) : w_(w) {}
    CsvWriter& w_;
    std::vector<std::string> cells_;
  };

  /// Cells streamed into the returned object form one row when it is destroyed.
  Row row() { return Row(*this); }
  void add_row(std::vector<std::string> cells);

  std::size_t columns() const { return header_.size(); }
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;
  void write(const std::string& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Splits CSV text into rows of cells (quoted cells are unescaped).
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

/// Writes `text` to `path` in binary mode; throws Error on failure.
void write_text_file(const std::string& path, std::string_view text);

}  // namespace instab
