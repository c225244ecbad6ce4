// Copyright 2026 The gtrellis Authors
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

#include "gtrellis/matrices.hpp"

#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "gtrellis/rng.hpp"

namespace gtrellis {

namespace {

constexpr std::uint64_t kMaxHypergraphColumns = std::uint64_t{1} << 24;
constexpr long long kMaxFileDimension = 1LL << 24;
constexpr long long kMaxFileEntries = 1LL << 30;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

TestMatrix make_matrix(const MatrixSpec& spec) {
  return std::visit(
      Overloaded{
          [](const Hypergraph& h) { return hypergraph_incidence(h.order, h.uniformity); },
          [](const ExtendedBch6457&) { return ebch_64_57_parity_check(); },
          [&](const Bernoulli& b) { return bernoulli_matrix(b.rows, b.cols, b.density, spec.seed); },
          [](const FromFile& f) { return read_matrix(f.path); },
      },
      spec.kind);
}

std::string describe(const MatrixSpec& spec) {
  return std::visit(
      Overloaded{
          [](const Hypergraph& h) {
            return "hypergraph(v=" + std::to_string(h.order) + ",k=" + std::to_string(h.uniformity) +
                   ")";
          },
          [](const ExtendedBch6457&) { return std::string("ebch(64,57)"); },
          [&](const Bernoulli& b) {
            std::ostringstream os;
            os.precision(17);
            os << "bernoulli(m=" << b.rows << ",n=" << b.cols << ",density=" << b.density
               << ",seed=" << spec.seed << ")";
            return os.str();
          },
          [](const FromFile& f) { return "file(" + f.path.string() + ")"; },
      },
      spec.kind);
}

TestMatrix hypergraph_incidence(int order, int uniformity) {
  if (uniformity < 1 || uniformity > order) {
    throw DomainError("hypergraph needs 1 <= k <= v, got v=" + std::to_string(order) +
                      ", k=" + std::to_string(uniformity));
  }
  // C(v,k) with an overflow guard; C(v,i) = C(v,i-1) (v-i+1) / i stays integral.
  std::uint64_t count = 1;
  for (int i = 1; i <= uniformity; ++i) {
    const auto factor = static_cast<std::uint64_t>(order - i + 1);
    if (count > std::numeric_limits<std::uint64_t>::max() / factor) {
      throw ResourceError("hypergraph column count C(v,k) overflows");
    }
    count = count * factor / static_cast<std::uint64_t>(i);
  }
  if (count > kMaxHypergraphColumns) throw ResourceError("hypergraph incidence matrix too large");

  BitMatrix entries = BitMatrix::Zero(order, static_cast<Index>(count));
  std::vector<int> subset(static_cast<std::size_t>(uniformity));
  for (int i = 0; i < uniformity; ++i) subset[static_cast<std::size_t>(i)] = i;
  for (Index col = 0; col < static_cast<Index>(count); ++col) {
    for (int v : subset) entries(v, col) = 1;
    // Next combination in lexicographic order.
    int i = uniformity - 1;
    while (i >= 0 && subset[static_cast<std::size_t>(i)] == order - uniformity + i) --i;
    if (i < 0) break;
    ++subset[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < uniformity; ++j) {
      subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return TestMatrix(std::move(entries));
}

TestMatrix ebch_64_57_parity_check() {
  constexpr int kDegree = 6;
  constexpr unsigned kPrimitive = 0b1000011;  // x^6 + x + 1
  constexpr Index kLength = 64;

  BitMatrix entries = BitMatrix::Zero(kDegree + 1, kLength);
  unsigned power = 1;  // alpha^0
  for (Index j = 0; j < kLength - 1; ++j) {
    for (int i = 0; i < kDegree; ++i) entries(i, j) = static_cast<std::uint8_t>((power >> i) & 1U);
    power <<= 1;
    if (power & (1U << kDegree)) power ^= kPrimitive;
  }
  if (power != 1) throw std::logic_error("x^6 + x + 1 must generate a cycle of length 63");
  for (Index j = 0; j < kLength; ++j) entries(kDegree, j) = static_cast<std::uint8_t>(1 - entries(0, j));

  TestMatrix h(std::move(entries));
  for (Index i = 0; i < h.rows(); ++i) {
    if (h.row(i).cast<int>().sum() != 32) throw std::logic_error("ebch row weight must be 32");
  }
  if (gf2_rank(h) != kDegree + 1) throw std::logic_error("ebch parity-check rank must be 7");
  return h;
}

TestMatrix bernoulli_matrix(Index rows, Index cols, double density, std::uint64_t seed) {
  if (!(density > 0.0 && density < 1.0)) {
    throw DomainError("Bernoulli density must lie strictly between 0 and 1");
  }
  if (rows < 1 || cols < 1) throw DimensionError("Bernoulli matrix needs positive dimensions");
  CounterRng rng(seed, 0);
  BitMatrix entries(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index l = 0; l < cols; ++l) entries(i, l) = rng.bernoulli(density) ? 1 : 0;
  }
  return TestMatrix(std::move(entries));
}

int gf2_rank(const TestMatrix& a) {
  BitMatrix work = a.entries();
  int rank = 0;
  for (Index col = 0; col < work.cols() && rank < work.rows(); ++col) {
    Index pivot = rank;
    while (pivot < work.rows() && work(pivot, col) == 0) ++pivot;
    if (pivot == work.rows()) continue;
    work.row(pivot).swap(work.row(rank));
    for (Index r = 0; r < work.rows(); ++r) {
      if (r != rank && work(r, col)) {
        for (Index c = 0; c < work.cols(); ++c) work(r, c) ^= work(rank, c);
      }
    }
    ++rank;
  }
  return rank;
}

TestMatrix parse_matrix(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing `m n` header");
  long long m = 0;
  long long n = 0;
  {
    std::istringstream header(line);
    std::string extra;
    if (!(header >> m >> n) || (header >> extra) || m < 1 || n < 1) {
      throw ParseError("malformed header '" + trim(line) + "', expected two positive integers `m n`");
    }
  }

  if (m > kMaxFileDimension || n > kMaxFileDimension || m * n > kMaxFileEntries) {
    throw ResourceError("matrix header declares " + std::to_string(m) + " x " + std::to_string(n) +
                        " entries, more than the reader accepts");
  }

  BitMatrix entries(m, n);
  Index row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    if (row == m) throw ParseError("more than " + std::to_string(m) + " rows in matrix body");
    std::istringstream fields(line);
    std::string token;
    Index col = 0;
    while (fields >> token) {
      if (token != "0" && token != "1") {
        throw ParseError("invalid token '" + token + "' at row " + std::to_string(row + 1) +
                         ", expected 0 or 1");
      }
      if (col == n) {
        throw ParseError("row " + std::to_string(row + 1) + " has more than " + std::to_string(n) +
                         " entries");
      }
      entries(row, col++) = token == "1" ? 1 : 0;
    }
    if (col != n) {
      throw ParseError("row " + std::to_string(row + 1) + " has " + std::to_string(col) +
                       " entries, expected " + std::to_string(n));
    }
    ++row;
  }
  if (row != m) {
    throw ParseError("matrix body has " + std::to_string(row) + " rows, header declares " +
                     std::to_string(m));
  }
  return TestMatrix(std::move(entries));
}

void format_matrix(std::ostream& out, const TestMatrix& a) {
  out << a.rows() << ' ' << a.cols() << '\n';
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index l = 0; l < a.cols(); ++l) {
      if (l) out << ' ';
      out << (a(i, l) ? '1' : '0');
    }
    out << '\n';
  }
}

TestMatrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open matrix file '" + path.string() + "'");
  try {
    return parse_matrix(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_matrix(const std::filesystem::path& path, const TestMatrix& a) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  format_matrix(out, a);
  if (!out) throw IoError("failed writing matrix to '" + path.string() + "'");
}

}  // namespace gtrellis
