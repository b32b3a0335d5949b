#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <iosfwd>

namespace rsbl {

/// Grayscale raster, row-major in file order: pixel (row r, col c) at r * width + c.
struct GrayImage {
  int width = 0;
  int height = 0;
  Eigen::VectorXd pixels;  // in [0, 1]
};

/// Binary PGM (P5, maxval <= 255). Values are rescaled to [0, 1].
GrayImage read_pgm(std::istream& in);
GrayImage load_pgm(const std::filesystem::path& path);

/// Writes 8-bit P5; values are clamped to [0, 1] and rounded.
void write_pgm(std::ostream& out, const GrayImage& image);
void save_pgm(const std::filesystem::path& path, const GrayImage& image);

/// Square centre crop to the shorter side.
GrayImage center_crop(const GrayImage& image);

/// Area-weighted block mean of a square image down to n x n (n <= side). Each output
/// pixel averages the input area it covers, splitting boundary pixels fractionally.
GrayImage block_downscale(const GrayImage& image, int n);

/// Load, optionally crop, and downscale to n x n. Non-square input requires crop.
/// The result is column-major over (j, j') with j running along image rows'
/// vertical axis, matching Image::values.
Eigen::VectorXd load_image(const std::filesystem::path& path, int n, bool crop);

/// Min-max normalized rendering of a column-major n x n field.
GrayImage render_field(const Eigen::VectorXd& values, int n);

}  // namespace rsbl
