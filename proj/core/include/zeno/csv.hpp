// Copyright 2026 The zeno-nh Authors
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


// CSV output: UTF-8, one header row, %.17g numbers.

#pragma once

#include <cstdio>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace zeno {

/// Shortest text that round-trips through %.17g.
std::string format_number(double v);

using CsvCell = std::variant<double, long long, std::string>;

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(const std::vector<double>& values);
  void row(const std::vector<CsvCell>& cells);
  std::size_t rows() const noexcept { return rows_; }
  /// Flushes and closes; throws ResourceError on I/O failure.
  void close();

 private:
  void write_line(const std::string& line);

  std::filesystem::path path_;
  std::FILE* file_ = nullptr;
  std::size_t columns_ = 0;
  std::size_t rows_ = 0;
};

/// Quotes a cell when it contains a comma, quote or newline.
std::string csv_escape(std::string_view cell);

}  // namespace zeno
