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

#pragma once

#include <complex>
#include <istream>
#include <ostream>
#include <string>

#include <Eigen/Dense>

namespace netqalign {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Reads the matrix text format: a "rows cols" header line followed by
/// `rows` lines of `cols` whitespace-separated decimals. Blank lines and
/// lines starting with '#' are skipped.
Matrix read_matrix(std::istream &in);
Matrix read_matrix_file(const std::string &path);
void write_matrix(std::ostream &out, const Matrix &m);

/// Throws ValidationError unless every entry is finite.
void require_finite(const Matrix &m, const char *what);

/// Max-abs entry of A - A^T.
double symmetry_defect(const Matrix &a);

/// Formats a double with round-trip precision; used by every CSV writer.
std::string format_double(double value);

}  // namespace netqalign
