// Copyright 2026 The hitlab Authors.
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

#ifndef HITLAB_CSV_HPP_
#define HITLAB_CSV_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace hitlab {

/// Shortest round-trip decimal form; "inf", "-inf" and "nan" for non-finite.
std::string format_number(double value);
std::string format_number(std::uint64_t value);
std::string format_number(std::int64_t value);
inline std::string format_number(int value) { return format_number(static_cast<std::int64_t>(value)); }
inline std::string format_number(unsigned value) {
  return format_number(static_cast<std::uint64_t>(value));
}
inline std::string format_number(unsigned long long value) {
  return format_number(static_cast<std::uint64_t>(value));
}
inline std::string format_number(const std::string& value) { return value; }
inline std::string format_number(const char* value) { return value; }

/// An in-memory CSV table: comma-separated, '.' decimal point, lowercase
/// header row, LF line endings.
class CsvTable {
 public:
  /// Throws std::invalid_argument on an empty or non-lowercase column name.
  explicit CsvTable(std::vector<std::string> columns);

  template <typename... Ts>
  void add(const Ts&... cells) {
    add_row({format_number(cells)...});
  }
  /// Throws std::invalid_argument if the cell count does not match.
  void add_row(std::vector<std::string> cells);

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  std::size_t rows() const noexcept { return rows_.size(); }
  const std::vector<std::string>& row(std::size_t i) const { return rows_.at(i); }

  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace hitlab

#endif  // HITLAB_CSV_HPP_
