// Copyright 2026 The qcut Authors
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

namespace qcut {

enum class ErrorCode {
    InvalidWidth,
    InvalidArgument,
    RequiresSampling,
    BasisMismatch,
    Dimension,
    NoDecomposition,
    WidthViolation,
    InvalidPlan,
    EmptyComparison,
    Parse,
};

const char *error_code_name(ErrorCode code);

/// Library-wide exception. `code()` identifies the failure class so callers
/// (and tests) don't have to match on message text.
class QcutError : public std::runtime_error {
   public:
    QcutError(ErrorCode code, const std::string &message)
        : std::runtime_error(message), code_(code) {
    }

    ErrorCode code() const {
        return code_;
    }

   private:
    ErrorCode code_;
};

}  // namespace qcut
