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

#include <stdexcept>
#include <string>

namespace mobilecs {

// Malformed input file. `line` is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string file, int line, const std::string& what)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + what),
        file_(std::move(file)),
        line_(line) {}

  const std::string& file() const { return file_; }
  int line() const { return line_; }

 private:
  std::string file_;
  int line_;
};

// A dialogue (or other value) that violates a data-model invariant.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string subject, std::string rule)
      : std::runtime_error(subject + ": " + rule),
        subject_(std::move(subject)),
        rule_(std::move(rule)) {}

  const std::string& subject() const { return subject_; }
  const std::string& rule() const { return rule_; }

 private:
  std::string subject_;
  std::string rule_;
};

}  // namespace mobilecs
