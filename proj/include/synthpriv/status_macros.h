//
// Copyright 2026 The Synthpriv Authors
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
//

#ifndef SYNTHPRIV_STATUS_MACROS_H_
#define SYNTHPRIV_STATUS_MACROS_H_

#include <utility>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define SYNTHPRIV_RETURN_IF_ERROR(expr)        \
  do {                                         \
    const absl::Status _status = (expr);       \
    if (!_status.ok()) return _status;         \
  } while (0)

#define SYNTHPRIV_STATUS_CONCAT_INNER(x, y) x##y
#define SYNTHPRIV_STATUS_CONCAT(x, y) SYNTHPRIV_STATUS_CONCAT_INNER(x, y)

#define SYNTHPRIV_ASSIGN_OR_RETURN_IMPL(statusor, lhs, rexpr) \
  auto statusor = (rexpr);                                    \
  if (!statusor.ok()) return statusor.status();               \
  lhs = std::move(statusor).value()

#define SYNTHPRIV_ASSIGN_OR_RETURN(lhs, rexpr) \
  SYNTHPRIV_ASSIGN_OR_RETURN_IMPL(             \
      SYNTHPRIV_STATUS_CONCAT(_statusor_, __LINE__), lhs, rexpr)

namespace synthpriv {

// Prefixes the message of a non-OK status with `context`, keeping the code.
inline absl::Status Annotate(const absl::Status& status,
                             std::string_view context) {
  if (status.ok()) return status;
  return absl::Status(status.code(),
                      std::string(context) + ": " +
                          std::string(status.message()));
}

}  // namespace synthpriv

#endif  // SYNTHPRIV_STATUS_MACROS_H_
