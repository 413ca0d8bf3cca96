// Copyright 2026 The Stator Authors
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

#ifndef STATOR_TOOLS_OUTPUT_HPP
#define STATOR_TOOLS_OUTPUT_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

namespace stator_cli {

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitInvariant = 3;

/// Shortest text for x at 12 significant digits; locale independent.
std::string format_number(double x);

/// x rounded to 12 significant digits, so the JSON writer prints the same digits.
double round12(double x);

/// JSON number (rounded), or null for non-finite values.
nlohmann::json num(double x);

nlohmann::json complex_matrix(const Eigen::MatrixXcd &m);
nlohmann::json complex_vector(const Eigen::VectorXcd &v);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

std::string to_csv(const Table &table);
nlohmann::json to_json(const Table &table, const std::string &schema, const std::string &name);

/// Writes `text` to `path`, throwing std::runtime_error naming the path on failure.
void write_file(const std::string &path, const std::string &text);

/// Pretty JSON with a trailing newline.
std::string dump(const nlohmann::json &doc);

}  // namespace stator_cli

#endif
