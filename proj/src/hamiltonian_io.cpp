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

#include "stator/hamiltonian_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "stator/error.hpp"

using namespace stator;
using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string &path, const std::string &what) {
    throw ValidationError(path + ": " + what);
}

Complex read_entry(const json &e, const std::string &path, std::size_t row, std::size_t col) {
    std::string where = "row " + std::to_string(row) + " entry " + std::to_string(col);
    if (e.is_number()) {
        return {e.get<double>(), 0.0};
    }
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        fail(path, where + " must be [re, im]");
    }
    return {e[0].get<double>(), e[1].get<double>()};
}

Eigen::MatrixXcd read_matrix(const json &m, const std::string &path) {
    if (!m.is_array() || m.empty()) {
        fail(path, "must be a non-empty list of rows");
    }
    const std::size_t n = m.size();
    if (n > kMaxLocalDimension) {
        fail(path, "dimension " + std::to_string(n) + " exceeds 4");
    }
    Eigen::MatrixXcd out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; r++) {
        const json &row = m[r];
        if (!row.is_array() || row.size() != n) {
            fail(path, "row " + std::to_string(r) + " must have " + std::to_string(n) + " entries");
        }
        for (std::size_t c = 0; c < n; c++) {
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = read_entry(row[c], path, r, c);
        }
    }
    if (!out.allFinite()) {
        fail(path, "has non-finite entries");
    }
    if ((out - out.adjoint()).cwiseAbs().maxCoeff() > kOperatorTolerance) {
        fail(path, "is not hermitian");
    }
    return out;
}

TensorProductTerm read_term(const json &factors, const std::string &path) {
    if (!factors.is_array() || factors.empty()) {
        fail(path, "must be a non-empty list of matrices");
    }
    TensorProductTerm term;
    for (std::size_t j = 0; j < factors.size(); j++) {
        term.factors.push_back(read_matrix(factors[j], path + "[" + std::to_string(j) + "]"));
    }
    return term;
}

json write_matrix(const Eigen::MatrixXcd &m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); r++) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); c++) {
            row.push_back({m(r, c).real(), m(r, c).imag()});
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

HamiltonianSpec stator::parse_hamiltonian(const std::string &text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ValidationError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ValidationError("hamiltonian must be a JSON object");
    }
    HamiltonianSpec spec;
    if (doc.contains("factors")) {
        spec.terms.push_back(read_term(doc["factors"], "factors"));
    }
    if (doc.contains("terms")) {
        const json &terms = doc["terms"];
        if (!terms.is_array()) {
            fail("terms", "must be a list");
        }
        for (std::size_t k = 0; k < terms.size(); k++) {
            std::string path = "terms[" + std::to_string(k) + "]";
            if (!terms[k].is_object() || !terms[k].contains("factors")) {
                fail(path, "must be an object with \"factors\"");
            }
            spec.terms.push_back(read_term(terms[k]["factors"], path + ".factors"));
        }
    }
    if (spec.terms.empty()) {
        throw ValidationError("hamiltonian needs \"factors\" or \"terms\"");
    }
    if (!doc.contains("time") || !doc["time"].is_number()) {
        fail("time", "must be a number");
    }
    spec.time = doc["time"].get<double>();
    if (doc.contains("slices")) {
        if (!doc["slices"].is_number_integer() || doc["slices"].get<long long>() < 1) {
            fail("slices", "must be a positive integer");
        }
        spec.slices = doc["slices"].get<std::size_t>();
    }
    if (doc.contains("convention")) {
        const json &c = doc["convention"];
        if (c == "plus") {
            spec.convention = TimeConvention::kPlusI;
        } else if (c == "minus") {
            spec.convention = TimeConvention::kMinusI;
        } else {
            fail("convention", "must be \"plus\" or \"minus\"");
        }
    }
    spec.validate();
    return spec;
}

HamiltonianSpec stator::load_hamiltonian(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_hamiltonian(buf.str());
}

std::string stator::hamiltonian_to_json(const HamiltonianSpec &spec) {
    json terms = json::array();
    for (const auto &t : spec.terms) {
        json factors = json::array();
        for (const auto &f : t.factors) {
            factors.push_back(write_matrix(f));
        }
        terms.push_back({{"factors", factors}});
    }
    json doc = {{"terms", terms},
                {"time", spec.time},
                {"slices", spec.slices},
                {"convention", spec.convention == TimeConvention::kPlusI ? "plus" : "minus"}};
    return doc.dump();
}
