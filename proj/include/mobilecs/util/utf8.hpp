// Copyright 2026 The MobileCS Toolkit Authors.
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

// Spans everywhere in the toolkit index Unicode scalar values, not bytes.

#include <string>
#include <string_view>

namespace mobilecs::utf8 {

// Throws std::invalid_argument on malformed UTF-8.
std::u32string Decode(std::string_view text);
std::string Encode(std::u32string_view text);
std::string Encode(char32_t c);

// Number of scalar values.
int Length(std::string_view text);

// Slice [start, end) in scalar values; clamps nothing, throws on bad bounds.
std::string Slice(std::string_view text, int start, int end);

// Strips ASCII and ideographic whitespace.
std::string StripSpaces(std::string_view text);

}  // namespace mobilecs::utf8
