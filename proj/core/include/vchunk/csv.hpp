// Copyright 2026 The vchunk Authors.
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

#ifndef VCHUNK_CSV_HPP
#define VCHUNK_CSV_HPP

#include <string>
#include <string_view>
#include <vector>

namespace vchunk {

/// RFC-4180 field quoting: fields containing a comma, quote, CR or LF are
/// wrapped in quotes with embedded quotes doubled.
std::string csv_escape(std::string_view field);
std::string csv_join(const std::vector<std::string>& fields);

/// Parses RFC-4180 text into rows of fields. Accepts LF or CRLF endings;
/// a trailing newline does not produce an empty row.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

double parse_double(std::string_view token);

}  // namespace vchunk

#endif  // VCHUNK_CSV_HPP
