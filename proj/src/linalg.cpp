// Copyright 2026 The netqalign Authors
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

#include "netqalign/linalg.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "netqalign/errors.hpp"

namespace netqalign {

namespace {

bool skippable(const std::string &line) {
    auto pos = line.find_first_not_of(" \t\r");
    return pos == std::string::npos || line[pos] == '#';
}

}  // namespace

Matrix read_matrix(std::istream &in) {
    std::string line;
    std::size_t line_no = 0;
    long rows = -1;
    long cols = -1;
    while (std::getline(in, line)) {
        ++line_no;
        if (skippable(line)) continue;
        std::istringstream header(line);
        std::string extra;
        if (!(header >> rows >> cols) || (header >> extra)) {
            throw ParseError(line_no, "expected header \"rows cols\"");
        }
        break;
    }
    if (rows <= 0 || cols <= 0) {
        throw ValidationError("matrix file: missing or non-positive dimensions");
    }
    Matrix m(rows, cols);
    long r = 0;
    while (r < rows && std::getline(in, line)) {
        ++line_no;
        if (skippable(line)) continue;
        std::istringstream row(line);
        for (long c = 0; c < cols; ++c) {
            std::string token;
            if (!(row >> token)) {
                throw ParseError(line_no, "expected " + std::to_string(cols) + " values");
            }
            double value = 0.0;
            auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
            if (ec != std::errc{} || ptr != token.data() + token.size()) {
                throw ParseError(line_no, "malformed number '" + token + "'");
            }
            m(r, c) = value;
        }
        std::string extra;
        if (row >> extra) throw ParseError(line_no, "too many values");
        ++r;
    }
    if (r != rows) {
        throw ValidationError("matrix file: expected " + std::to_string(rows) + " rows, got " +
                              std::to_string(r));
    }
    require_finite(m, "matrix file");
    return m;
}

Matrix read_matrix_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    return read_matrix(in);
}

void write_matrix(std::ostream &out, const Matrix &m) {
    out << m.rows() << ' ' << m.cols() << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ' ';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
}

void require_finite(const Matrix &m, const char *what) {
    if (!m.allFinite()) throw ValidationError(std::string(what) + ": non-finite entry");
}

double symmetry_defect(const Matrix &a) {
    if (a.rows() != a.cols()) return INFINITY;
    return (a - a.transpose()).cwiseAbs().maxCoeff();
}

std::string format_double(double value) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

}  // namespace netqalign
