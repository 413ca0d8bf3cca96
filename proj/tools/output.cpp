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

#include "output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace stator_cli {

std::string format_number(double x) {
    if (!std::isfinite(x)) {
        return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
    }
    if (x == 0.0) {
        return "0";  // also folds -0
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

double round12(double x) {
    if (!std::isfinite(x) || x == 0.0) {
        return x == 0.0 ? 0.0 : x;
    }
    std::string s = format_number(x);
    double out = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), out);
    return out;
}

nlohmann::json num(double x) {
    if (!std::isfinite(x)) {
        return nullptr;
    }
    return round12(x);
}

nlohmann::json complex_matrix(const Eigen::MatrixXcd &m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); r++) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.cols(); c++) {
            row.push_back({num(m(r, c).real()), num(m(r, c).imag())});
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

nlohmann::json complex_vector(const Eigen::VectorXcd &v) {
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); i++) {
        out.push_back({num(v[i].real()), num(v[i].imag())});
    }
    return out;
}

std::string to_csv(const Table &table) {
    std::string out;
    for (std::size_t c = 0; c < table.columns.size(); c++) {
        out += (c ? "," : "") + table.columns[c];
    }
    out += "\n";
    for (const auto &row : table.rows) {
        for (std::size_t c = 0; c < row.size(); c++) {
            out += (c ? "," : "") + format_number(row[c]);
        }
        out += "\n";
    }
    return out;
}

nlohmann::json to_json(const Table &table, const std::string &schema, const std::string &name) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto &row : table.rows) {
        nlohmann::json r = nlohmann::json::array();
        for (double x : row) {
            r.push_back(num(x));
        }
        rows.push_back(std::move(r));
    }
    return {{"schema", schema}, {"figure", name}, {"columns", table.columns}, {"rows", rows}};
}

void write_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    out << text;
    if (!out) {
        throw std::runtime_error("failed writing " + path);
    }
}

std::string dump(const nlohmann::json &doc) {
    return doc.dump(2) + "\n";
}

}  // namespace stator_cli
