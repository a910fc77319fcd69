// Copyright 2026 The Crashlens Authors
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

#include "crashlens/error.h"

namespace crashlens {

std::string_view ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse: return "parse error";
    case ErrorKind::kData: return "data error";
    case ErrorKind::kAlignment: return "alignment error";
    case ErrorKind::kInsufficientData: return "insufficient data";
    case ErrorKind::kDomain: return "domain error";
    case ErrorKind::kShape: return "shape error";
    case ErrorKind::kDegenerateConditioning: return "degenerate conditioning";
    case ErrorKind::kSize: return "size error";
    case ErrorKind::kDisconnected: return "disconnected graph";
    case ErrorKind::kUsage: return "usage error";
    case ErrorKind::kInternal: return "internal error";
  }
  return "error";
}

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage:
      return 2;
    case ErrorKind::kInternal:
      return 4;
    default:
      return 3;
  }
}

}  // namespace crashlens
