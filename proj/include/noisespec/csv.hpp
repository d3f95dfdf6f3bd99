// Copyright 2026 The noisespec Authors
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

#pragma once

#include <initializer_list>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace noisespec {

/// Fixed-precision, locale-independent rendering used by every CSV and
/// summary writer, so that equal values always produce equal bytes.
std::string format_number(double value, int digits = 12);

/// UTF-8 CSV with `#`-prefixed metadata lines ahead of the header row.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  CsvWriter& meta(std::string_view key, std::string_view value);
  CsvWriter& meta(std::string_view key, double value);
  CsvWriter& header(std::initializer_list<std::string_view> columns);
  CsvWriter& header(const std::vector<std::string>& columns);
  CsvWriter& row(std::initializer_list<double> values);
  CsvWriter& row(const std::vector<double>& values);
  /// Mixed row; fields are written verbatim.
  CsvWriter& raw_row(const std::vector<std::string>& fields);

 private:
  std::ostream& out_;
};

}  // namespace noisespec
