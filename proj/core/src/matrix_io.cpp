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

#include "smart/matrix_io.hpp"

#include <bit>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "smart/error.hpp"

namespace smart {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

const char* const kFields[] = {"k_sim", "conflict", "relevance"};

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r = (r << 8) | ((v >> (8 * i)) & 0xFF);
    return r;
  }
  return v;
}

std::vector<double> row_major(const Matrix& m) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
  }
  return out;
}

Matrix from_row_major(const std::vector<double>& v, Eigen::Index n) {
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = v[static_cast<std::size_t>(i * n + j)];
  }
  return m;
}

}  // namespace

std::string dump_stem(const std::string& query_id) {
  std::string stem;
  for (unsigned char c : query_id) {
    stem.push_back(std::isalnum(c) || c == '.' || c == '_' || c == '-' ? static_cast<char>(c)
                                                                         : '_');
  }
  if (stem.empty() || stem.front() == '.') stem.insert(stem.begin(), '_');
  return stem;
}

void write_f64_blob(const fs::path& path, const std::vector<double>& values) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  for (double v : values) {
    const std::uint64_t bits = to_little(std::bit_cast<std::uint64_t>(v));
    char bytes[8];
    std::memcpy(bytes, &bits, 8);
    out.write(bytes, 8);
  }
  if (!out) throw Error(ErrorCode::kIo, "short write to " + path.string());
}

std::vector<double> read_f64_blob(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<double> values;
  char bytes[8];
  while (in.read(bytes, 8)) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, bytes, 8);
    values.push_back(std::bit_cast<double>(to_little(bits)));
  }
  if (in.gcount() != 0) {
    throw Error(ErrorCode::kIo, path.string() + " is not a whole number of doubles");
  }
  return values;
}

fs::path write_matrix_dump(const fs::path& dir, const std::string& query_id,
                           const RelationMatrices& relations) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());

  const std::string stem = dump_stem(query_id);
  const std::vector<double> blobs[] = {row_major(relations.k_sim),
                                       row_major(relations.conflict.matrix()),
                                       std::vector<double>(relations.relevance.begin(),
                                                           relations.relevance.end())};
  json header = {{"format", kMatrixDumpFormat},
                 {"n", relations.size()},
                 {"query_id", query_id},
                 {"fields", json::array()},
                 {"dtype", "float64-le"},
                 {"layout", "row-major"},
                 {"files", json::object()}};
  for (std::size_t f = 0; f < 3; ++f) {
    const std::string file = stem + "." + kFields[f] + ".bin";
    write_f64_blob(dir / file, blobs[f]);
    header["fields"].push_back(kFields[f]);
    header["files"][kFields[f]] = file;
  }
  const fs::path header_path = dir / (stem + ".json");
  std::ofstream out(header_path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + header_path.string());
  out << header.dump(2) << "\n";
  return header_path;
}

MatrixDump read_matrix_dump(const fs::path& header_path) {
  std::ifstream in(header_path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + header_path.string());
  json header;
  try {
    in >> header;
    const auto n = header.at("n").get<std::size_t>();
    const fs::path base = header_path.parent_path();
    std::vector<double> blobs[3];
    for (std::size_t f = 0; f < 3; ++f) {
      const std::string field = kFields[f];
      const std::string file = header.contains("files") && header["files"].contains(field)
                                   ? header["files"][field].get<std::string>()
                                   : header_path.stem().string() + "." + field + ".bin";
      blobs[f] = read_f64_blob(base / file);
      const std::size_t expected = f < 2 ? n * n : n;
      if (blobs[f].size() != expected) {
        throw Error(ErrorCode::kShapeMismatch,
                    field + " blob holds " + std::to_string(blobs[f].size()) +
                        " values, expected " + std::to_string(expected));
      }
    }
    const auto dim = static_cast<Eigen::Index>(n);
    MatrixDump dump{header.value("query_id", std::string()),
                    RelationMatrices{from_row_major(blobs[0], dim),
                                     ConflictMatrix::from_symmetric(from_row_major(blobs[1], dim)),
                                     Eigen::Map<const Vector>(blobs[2].data(), dim)}};
    dump.relations.validate();
    return dump;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidInput,
                "malformed matrix header " + header_path.string() + ": " + e.what());
  }
}

}  // namespace smart
