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

#include <istream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace impspace {

/// Flat `key = value` text, one entry per line, in insertion order. Lines
/// starting with '#' are comments.
class KeyValueReport {
 public:
  void add(const std::string& key, double value);
  void add(const std::string& key, const std::string& value);

  std::string str() const;
  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }

  static std::map<std::string, std::string> parse(std::istream& in);

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// Full round-trip precision.
std::string format_double(double v);

}  // namespace impspace
