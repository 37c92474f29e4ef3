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
#include "doctest.h"
#include "helpers.hpp"
#include "qeforge/errors.hpp"
#include "qeforge/text.hpp"

using namespace qeforge::text;

TEST_CASE("escape round trip") {
  for (std::string raw : {"", "plain", "a\tb", "line\nbreak", "back\\slash", "\r\n\t\\",
                          "עברית\tמילה"}) {
    auto esc = escape_field(raw);
    CHECK(esc.find('\t') == std::string::npos);
    CHECK(esc.find('\n') == std::string::npos);
    REQUIRE(unescape_field(esc).has_value());
    CHECK(*unescape_field(esc) == raw);
  }
  CHECK(escape_field("a\tb") == "a\\tb");
  CHECK_FALSE(unescape_field("dangling\\").has_value());
  CHECK_FALSE(unescape_field("bad\\q").has_value());
  CHECK_FALSE(unescape_field("raw\ttab").has_value());
}

TEST_CASE("split keeps empty pieces") {
  CHECK(split("a\t\tb", '\t').size() == 3);
  CHECK(split("", '\t').size() == 1);
  CHECK(split_whitespace("  a  b\tc\n") == std::vector<std::string>{"a", "b", "c"});
  CHECK(split_whitespace("   ").empty());
}

TEST_CASE("numbers") {
  CHECK(parse_int("-12") == -12);
  CHECK_FALSE(parse_int("12x").has_value());
  CHECK_FALSE(parse_int("").has_value());
  CHECK(parse_uint64("18446744073709551615") == UINT64_MAX);
  CHECK_FALSE(parse_uint64("-1").has_value());
  CHECK(parse_double("0.85") == 0.85);
  CHECK_FALSE(parse_double("nan?").has_value());
  CHECK(format_double(0.1) == "0.1");
  CHECK(*parse_double(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(format_fixed(0.5, 3) == "0.500");
}

TEST_CASE("atomic write and read back") {
  testutil::TempDir dir;
  const auto path = dir.file("x.txt");
  write_file_atomic(path, "one\ntwo\n");
  CHECK(read_file(path) == "one\ntwo\n");
  CHECK(read_lines(path) == std::vector<std::string>{"one", "two"});
  CHECK_THROWS_AS(read_file(dir.file("missing")), qeforge::Error);
}
