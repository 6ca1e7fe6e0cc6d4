#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>

namespace wrom::fom {

/// Binary dense-array file: the four bytes "WROM", then little-endian uint32
/// version, rows and cols, then rows * cols little-endian float64 values in
/// row-major order.
inline constexpr std::uint32_t kArrayFormatVersion = 1;

void write_array(const std::filesystem::path& path, const Eigen::MatrixXd& a);
Eigen::MatrixXd read_array(const std::filesystem::path& path);

}  // namespace wrom::fom
