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

#include "impedance/errors.hpp"

namespace impspace {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kArgument: return "argument";
    case ErrorKind::kDegenerateData: return "degenerate-data";
    case ErrorKind::kNoEllipse: return "no-ellipse";
    case ErrorKind::kDomain: return "domain";
    case ErrorKind::kIllConditioned: return "ill-conditioned";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kSegmentation: return "segmentation";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kNumerical: return "numerical";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, std::string stage, const std::string& message)
    : std::runtime_error(stage + ": " + std::string(to_string(kind)) +
                         " error: " + message),
      kind_(kind),
      stage_(std::move(stage)),
      detail_(message) {}

}  // namespace impspace
