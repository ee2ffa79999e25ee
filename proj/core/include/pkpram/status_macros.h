// Copyright 2026 The pkpram Authors
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

#ifndef PKPRAM_STATUS_MACROS_H_
#define PKPRAM_STATUS_MACROS_H_

#include <utility>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define PKPRAM_STATUS_CONCAT_INNER_(a, b) a##b
#define PKPRAM_STATUS_CONCAT_(a, b) PKPRAM_STATUS_CONCAT_INNER_(a, b)

// Returns early from the enclosing function if `expr` is not OK.
#define PKPRAM_RETURN_IF_ERROR(expr)              \
  do {                                            \
    const absl::Status pkpram_status_ = (expr);   \
    if (!pkpram_status_.ok()) return pkpram_status_; \
  } while (0)

// Evaluates a StatusOr expression, returning its status on error and
// otherwise moving the value into `lhs` (which may be a declaration).
#define PKPRAM_ASSIGN_OR_RETURN(lhs, rexpr)                                 \
  PKPRAM_ASSIGN_OR_RETURN_IMPL_(                                            \
      PKPRAM_STATUS_CONCAT_(pkpram_statusor_, __LINE__), lhs, rexpr)

#define PKPRAM_ASSIGN_OR_RETURN_IMPL_(statusor, lhs, rexpr) \
  auto statusor = (rexpr);                                  \
  if (!statusor.ok()) return std::move(statusor).status();  \
  lhs = std::move(statusor).value()

#endif  // PKPRAM_STATUS_MACROS_H_
