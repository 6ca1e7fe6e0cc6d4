#include "wrom/fom/array_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

namespace wrom::fom {

namespace {

static_assert(std::endian::native == std::endian::little, "array files are written in host order");

constexpr char kMagic[4] = {'W', 'R', 'O', 'M'};

void put_u32(std::ostream& os, std::uint32_t v) { os.write(reinterpret_cast<const char*>(&v), sizeof v); }

std::uint32_t get_u32(std::istream& is) {
  std::uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

}  // namespace

void write_array(const std::filesystem::path& path, const Eigen::MatrixXd& a) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os.write(kMagic, 4);
  put_u32(os, kArrayFormatVersion);
  put_u32(os, static_cast<std::uint32_t>(a.rows()));
  put_u32(os, static_cast<std::uint32_t>(a.cols()));
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> row_major = a;
  os.write(reinterpret_cast<const char*>(row_major.data()), static_cast<std::streamsize>(sizeof(double) * a.size()));
  if (!os) throw std::runtime_error("write failed for " + path.string());
}

Eigen::MatrixXd read_array(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) throw std::runtime_error(path.string() + " is not an array file");
  const std::uint32_t version = get_u32(is);
  if (version != kArrayFormatVersion) {
    throw std::runtime_error(path.string() + ": unsupported array format version " + std::to_string(version));
  }
  const std::uint32_t rows = get_u32(is);
  const std::uint32_t cols = get_u32(is);
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> data(rows, cols);
  is.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(sizeof(double) * data.size()));
  if (!is) throw std::runtime_error(path.string() + " is truncated");
  return data;
}

}  // namespace wrom::fom
