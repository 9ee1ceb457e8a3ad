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

#include <filesystem>
#include <string>

#include "json.hpp"

namespace mobilecs {

using Json = nlohmann::json;

// Parses a JSON file; failures become ParseError carrying the line number.
Json ReadJsonFile(const std::filesystem::path& path);
Json ParseJsonText(const std::string& text, const std::string& source_name);

// Writes pretty-printed UTF-8 JSON, creating parent directories.
void WriteJsonFile(const std::filesystem::path& path, const Json& value,
                   int indent = 1);

std::string ReadTextFile(const std::filesystem::path& path);
void WriteTextFile(const std::filesystem::path& path, const std::string& text);

}  // namespace mobilecs
