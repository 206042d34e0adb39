// Copyright 2026 The smart Authors.
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

// Matrix dump: a JSON header
//
//   {"format": "smart-matrices/1", "n": 3, "query_id": "q1",
//    "fields": ["k_sim", "conflict", "relevance"],
//    "dtype": "float64-le", "layout": "row-major",
//    "files": {"k_sim": "q1.k_sim.bin", ...}}
//
// next to one raw blob per field holding little-endian IEEE-754 doubles in
// row-major order (n*n values for matrices, n for relevance). Doubles
// round-trip bit-exactly.

#include <filesystem>
#include <string>
#include <vector>

#include "smart/relmat.hpp"

namespace smart {

inline constexpr const char* kMatrixDumpFormat = "smart-matrices/1";

struct MatrixDump {
  std::string query_id;
  RelationMatrices relations;
};

// Writes `<dir>/<stem>.json` and `<dir>/<stem>.<field>.bin`; returns the
// header path. The directory is created if needed.
std::filesystem::path write_matrix_dump(const std::filesystem::path& dir,
                                        const std::string& query_id,
                                        const RelationMatrices& relations);

// Reads a dump given its header path; blob paths resolve relative to it.
MatrixDump read_matrix_dump(const std::filesystem::path& header);

// Filesystem-safe stem for a query id: [A-Za-z0-9._-] kept, others -> '_'.
std::string dump_stem(const std::string& query_id);

// Raw little-endian blob helpers.
void write_f64_blob(const std::filesystem::path& path, const std::vector<double>& values);
std::vector<double> read_f64_blob(const std::filesystem::path& path);

}  // namespace smart
