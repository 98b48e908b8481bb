// Copyright 2026 The Impedance Space Authors.
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
#include <string_view>

namespace impspace {

enum class ErrorKind {
  kArgument,
  kDegenerateData,
  kNoEllipse,
  kDomain,
  kIllConditioned,
  kParse,
  kSegmentation,
  kIo,
  kNumerical,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library. `kind` classifies the failure,
/// `stage` names the pipeline step that raised it ("fit_plane",
/// "load_csv", ...) so callers can report provenance.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string stage, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& stage() const noexcept { return stage_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string stage_;
  std::string detail_;
};

}  // namespace impspace
