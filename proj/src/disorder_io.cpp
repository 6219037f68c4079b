#include "spinlab/disorder_io.hpp"

#include <array>
#include <bit>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace spinlab {

namespace {

constexpr std::array<char, 8> kDenseMagic = {'S', 'P', 'L', 'D', 'N', 'S', '0', '1'};

void put_u64_le(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> buf{};
  for (int k = 0; k < 8; ++k) buf[k] = static_cast<char>((v >> (8 * k)) & 0xFFu);
  out.write(buf.data(), buf.size());
}

std::uint64_t get_u64_le(std::istream& in) {
  std::array<unsigned char, 8> buf{};
  in.read(reinterpret_cast<char*>(buf.data()), buf.size());
  if (!in) throw std::runtime_error("dense binary: truncated input");
  std::uint64_t v = 0;
  for (int k = 0; k < 8; ++k) v |= std::uint64_t{buf[k]} << (8 * k);
  return v;
}

std::string expect_word(std::istream& in, const char* word) {
  std::string w;
  if (!(in >> w) || w != word) {
    throw std::runtime_error(std::string("malformed header: expected '") + word + "'");
  }
  return w;
}

}  // namespace

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_sparse_text(std::ostream& out, const SparseDisorder& a, const SparseHeader& header) {
  out << "n " << a.size() << " d " << format_double(header.d) << " seed " << header.seed << '\n';
  for (const Edge& e : a.edges()) {
    out << (e.i + 1) << ' ' << (e.j + 1) << ' ' << e.multiplicity << '\n';
  }
}

SparseDisorder read_sparse_text(std::istream& in, SparseHeader* header) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("sparse text: missing header");
  std::istringstream hs(line);
  std::size_t n = 0;
  SparseHeader h;
  expect_word(hs, "n");
  hs >> n;
  expect_word(hs, "d");
  hs >> h.d;
  expect_word(hs, "seed");
  hs >> h.seed;
  if (!hs || n == 0) throw std::runtime_error("sparse text: malformed header line");

  std::vector<Edge> edges;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    long long i = 0, j = 0, m = 0;
    if (!(ls >> i >> j >> m)) {
      throw std::runtime_error("sparse text: malformed edge at line " + std::to_string(line_no));
    }
    if (i < 1 || j < 1 || static_cast<std::size_t>(i) > n || static_cast<std::size_t>(j) > n) {
      throw std::runtime_error("sparse text: index out of range at line " + std::to_string(line_no));
    }
    if (m < 1) {
      throw std::runtime_error("sparse text: multiplicity must be >= 1 at line " +
                               std::to_string(line_no));
    }
    edges.push_back({static_cast<std::uint32_t>(i - 1), static_cast<std::uint32_t>(j - 1),
                     static_cast<std::uint64_t>(m)});
  }
  if (header) *header = h;
  return SparseDisorder(n, std::move(edges));
}

void write_dense_binary(std::ostream& out, const DenseDisorder& x) {
  out.write(kDenseMagic.data(), kDenseMagic.size());
  put_u64_le(out, x.size());
  for (double v : x.entries()) put_u64_le(out, std::bit_cast<std::uint64_t>(v));
}

DenseDisorder read_dense_binary(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kDenseMagic) throw std::runtime_error("dense binary: bad magic");
  const std::uint64_t n = get_u64_le(in);
  if (n == 0 || n > (1u << 16)) throw std::runtime_error("dense binary: implausible n");
  std::vector<double> entries(n * n);
  for (auto& v : entries) v = std::bit_cast<double>(get_u64_le(in));
  return DenseDisorder(n, std::move(entries));
}

void write_dense_text(std::ostream& out, const DenseDisorder& x) {
  const std::size_t n = x.size();
  out << "dense n " << n << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j) out << ' ';
      out << format_double(x(i, j));
    }
    out << '\n';
  }
}

DenseDisorder read_dense_text(std::istream& in) {
  std::size_t n = 0;
  expect_word(in, "dense");
  expect_word(in, "n");
  if (!(in >> n) || n == 0) throw std::runtime_error("dense text: malformed header");
  std::vector<double> entries(n * n);
  for (auto& v : entries) {
    std::string tok;
    if (!(in >> tok)) throw std::runtime_error("dense text: truncated matrix");
    v = std::strtod(tok.c_str(), nullptr);
  }
  return DenseDisorder(n, std::move(entries));
}

}  // namespace spinlab
