// SPDX-License-Identifier: Apache-2.0
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <ostream>

#include "bisph/error.hpp"
#include "bisph/grid.hpp"
#include "bisph/numeric.hpp"

namespace bisph {

namespace {

constexpr char kMagic[4] = {'B', 'S', 'G', 'F'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put_le(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get_le(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  in.read(reinterpret_cast<char*>(bytes), sizeof(T));
  if (!in) fail(ErrorKind::Io, "truncated grid dump");
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

const char* axis_name(int a) { return a == 0 ? "x" : a == 1 ? "y" : "z"; }

} // namespace

void write_csv(const GridFunction& f, std::ostream& out) {
  out << "index";
  for (int a = 0; a < f.dim(); ++a) out << ',' << axis_name(a);
  out << ",value\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    Point x = f.point(i);
    out << i;
    for (int a = 0; a < f.dim(); ++a) out << ',' << format_real(x[a]);
    out << ',' << format_real(f[i]) << '\n';
  }
}

void write_csv(const GridFunction& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::Io, "cannot open " + path + " for writing");
  write_csv(f, out);
  if (!out) fail(ErrorKind::Io, "write failed for " + path);
}

void write_raw(const GridFunction& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot open " + path + " for writing");
  const auto& g = f.geometry();
  out.write(kMagic, 4);
  put_le<std::uint32_t>(out, kVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.dim));
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.cells));
  for (int a = 0; a < g.dim; ++a) put_le<double>(out, g.lower[a]);
  put_le<double>(out, g.side);
  for (double v : f.values()) put_le<double>(out, v);
  if (!out) fail(ErrorKind::Io, "write failed for " + path);
}

GridFunction read_raw(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) fail(ErrorKind::Io, path + " is not a grid dump");
  if (get_le<std::uint32_t>(in) != kVersion) fail(ErrorKind::Io, "unsupported grid dump version");
  GridGeometry g;
  g.dim = static_cast<int>(get_le<std::uint32_t>(in));
  g.cells = static_cast<int>(get_le<std::uint32_t>(in));
  if (g.dim < 1 || g.dim > kMaxDim) fail(ErrorKind::Io, "bad dimension in grid dump");
  for (int a = 0; a < g.dim; ++a) g.lower[a] = get_le<double>(in);
  g.side = get_le<double>(in);
  std::vector<double> values(g.size());
  for (double& v : values) v = get_le<double>(in);
  return GridFunction(g, std::move(values));
}

} // namespace bisph
