// Copyright 2026 The qeforge Authors
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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Small string helpers shared by the record codec, file readers and the CLI.
namespace qeforge::text {

// Backslash-escapes tab, LF, CR and backslash so a value fits in one TSV
// field.
std::string escape_field(std::string_view raw);

// Inverse of escape_field. Returns nullopt on a dangling or unknown escape.
std::optional<std::string> unescape_field(std::string_view escaped);

// Splits on every occurrence of `sep`; n separators always yield n+1 parts.
std::vector<std::string_view> split(std::string_view s, char sep);

// Splits on runs of ASCII whitespace, dropping empty pieces.
std::vector<std::string> split_whitespace(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

std::string_view trim(std::string_view s);

bool is_blank(std::string_view s);

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

// Fixed-point rendering for human-readable reports.
std::string format_fixed(double v, int decimals);

// Strict parsers: the whole view must be consumed.
std::optional<long long> parse_int(std::string_view s);
std::optional<std::uint64_t> parse_uint64(std::string_view s);
std::optional<double> parse_double(std::string_view s);

// Reads a UTF-8 text file into lines with the trailing LF (and an optional
// CR before it) removed. Throws qeforge::Error when the file cannot be read.
std::vector<std::string> read_lines(const std::string& path);

// Writes content to path via a sibling temp file and rename, so readers
// never observe a half-written file.
void write_file_atomic(const std::string& path, std::string_view content);

std::string read_file(const std::string& path);

}  // namespace qeforge::text
