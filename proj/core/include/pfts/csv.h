// Copyright 2026 The PF-TS Authors
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

#ifndef PFTS_CSV_H_
#define PFTS_CSV_H_

#include <istream>
#include <string>
#include <vector>

namespace pfts {

// Comma-separated table with a header row. Fields may be double-quoted;
// a doubled quote inside a quoted field is a literal quote.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a named column. Throws kParseError naming the column.
  size_t Column(const std::string& name) const;
};

// Throws kParseError (with 1-based line number) on ragged rows.
CsvTable ReadCsv(std::istream& in);
CsvTable ReadCsvFile(const std::string& path);

// Strict numeric parse of a whole field. Throws kNonNumeric.
double ParseNumber(const std::string& field, size_t line,
                   const std::string& column);

}  // namespace pfts

#endif  // PFTS_CSV_H_
