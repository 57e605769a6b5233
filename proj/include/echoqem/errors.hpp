// Copyright 2026 The echoqem Authors
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

#include <stdexcept>
#include <string>

namespace echoqem {

/// Error categories. The numeric value doubles as the CLI exit code.
enum class ErrorCategory : int {
    kInternal = 1,
    kParse = 2,
    kFile = 3,
    kInvalidParameter = 4,
    kInvalidGate = 5,
    kInvalidSplit = 6,
    kShape = 7,
    kInvalidInput = 8,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCategory category, const std::string &what)
        : std::runtime_error(what), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }
    int exit_code() const noexcept { return static_cast<int>(category_); }

  private:
    ErrorCategory category_;
};

#define ECHOQEM_DEFINE_ERROR(Name, Category)                                   \
    class Name : public Error {                                                \
      public:                                                                  \
        explicit Name(const std::string &what) : Error(Category, what) {}      \
    }

ECHOQEM_DEFINE_ERROR(ParseError, ErrorCategory::kParse);
ECHOQEM_DEFINE_ERROR(FileError, ErrorCategory::kFile);
ECHOQEM_DEFINE_ERROR(InvalidParameter, ErrorCategory::kInvalidParameter);
ECHOQEM_DEFINE_ERROR(InvalidGate, ErrorCategory::kInvalidGate);
ECHOQEM_DEFINE_ERROR(InvalidSplit, ErrorCategory::kInvalidSplit);
ECHOQEM_DEFINE_ERROR(ShapeError, ErrorCategory::kShape);
ECHOQEM_DEFINE_ERROR(InvalidInput, ErrorCategory::kInvalidInput);

#undef ECHOQEM_DEFINE_ERROR

} // namespace echoqem
