// Copyright 2026 The foodframe Authors.
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

// Small string helpers shared by the readers.

#ifndef FOODFRAME_TEXT_H_
#define FOODFRAME_TEXT_H_

#include <cstddef>
#include <istream>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

namespace foodframe {

std::string ToLower(std::string_view s);
std::string_view Trim(std::string_view s);

std::vector<std::string> Split(std::string_view s, char delim);

// Collapses runs of whitespace to one space and trims the ends.
std::string CollapseWhitespace(std::string_view s);

// Number of whitespace-delimited tokens.
std::size_t CountWhitespaceTokens(std::string_view s);

bool IsValidUtf8(std::string_view s);

// Reads a line-oriented list file: one entry per line, '#' starts a comment,
// blank lines ignored. Entries are trimmed.
std::vector<std::string> ReadListFile(const std::string& path);
std::vector<std::string> ReadList(std::istream& in);

// Compiles case-insensitive ECMAScript patterns; throws ConfigError naming
// the first pattern that fails to compile.
std::vector<std::regex> CompilePatterns(const std::vector<std::string>& patterns);

bool AnyMatch(const std::vector<std::regex>& patterns, const std::string& text);

std::string ReadFile(const std::string& path);

}  // namespace foodframe

#endif  // FOODFRAME_TEXT_H_
