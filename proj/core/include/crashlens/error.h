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

#ifndef CRASHLENS_ERROR_H_
#define CRASHLENS_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace crashlens {

enum class ErrorKind {
  kParse,
  kData,
  kAlignment,
  kInsufficientData,
  kDomain,
  kShape,
  kDegenerateConditioning,
  kSize,
  kDisconnected,
  kUsage,
  kInternal,
};

std::string_view ErrorKindName(ErrorKind kind);

// All library failures are reported through this exception. The kind decides
// the CLI exit code (usage 2, data-class errors 3, internal 4).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

int ExitCodeFor(ErrorKind kind);

}  // namespace crashlens

#endif  // CRASHLENS_ERROR_H_
