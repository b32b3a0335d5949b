#include "rsbl/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rsbl {

namespace {

// Next header token, skipping whitespace and '#' comments.
std::string next_token(std::istream& in) {
  std::string tok;
  while (true) {
    const int c = in.get();
    if (c == EOF) throw std::runtime_error("PGM: truncated header");
    if (c == '#') {
      std::string discard;
      std::getline(in, discard);
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
}

int parse_positive(const std::string& tok, const char* what) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(tok, &used);
  } catch (const std::exception&) {
    throw std::runtime_error(std::string("PGM: malformed ") + what);
  }
  if (used != tok.size() || v <= 0) throw std::runtime_error(std::string("PGM: malformed ") + what);
  return v;
}

// n x side averaging matrix; row i integrates [i s, (i+1) s) with s = side / n.
Eigen::MatrixXd area_weights(int side, int n) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, side);
  const double s = static_cast<double>(side) / n;
  for (int i = 0; i < n; ++i) {
    const double lo = i * s;
    const double hi = (i + 1) * s;
    for (int k = static_cast<int>(std::floor(lo)); k < side && k < hi; ++k) {
      const double overlap = std::min(hi, k + 1.0) - std::max(lo, static_cast<double>(k));
      if (overlap > 0.0) a(i, k) = overlap / s;
    }
  }
  return a;
}

}  // namespace

GrayImage read_pgm(std::istream& in) {
  if (next_token(in) != "P5") throw std::runtime_error("PGM: only binary P5 is supported");
  GrayImage img;
  img.width = parse_positive(next_token(in), "width");
  img.height = parse_positive(next_token(in), "height");
  const int maxval = parse_positive(next_token(in), "maxval");
  if (maxval > 255) throw std::runtime_error("PGM: only 8-bit images are supported");
  const std::size_t count = static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height);
  std::vector<unsigned char> raw(count);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(count));
  if (static_cast<std::size_t>(in.gcount()) != count) throw std::runtime_error("PGM: truncated pixel data");
  img.pixels.resize(static_cast<Eigen::Index>(count));
  for (std::size_t i = 0; i < count; ++i) img.pixels[static_cast<Eigen::Index>(i)] = raw[i] / double(maxval);
  return img;
}

GrayImage load_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_pgm(in);
}

void write_pgm(std::ostream& out, const GrayImage& image) {
  out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
  std::vector<unsigned char> raw(static_cast<std::size_t>(image.pixels.size()));
  for (Eigen::Index i = 0; i < image.pixels.size(); ++i) {
    const double v = std::clamp(image.pixels[i], 0.0, 1.0);
    raw[static_cast<std::size_t>(i)] = static_cast<unsigned char>(std::lround(v * 255.0));
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) throw std::runtime_error("PGM: write failed");
}

void save_pgm(const std::filesystem::path& path, const GrayImage& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  write_pgm(out, image);
}

GrayImage center_crop(const GrayImage& image) {
  const int side = std::min(image.width, image.height);
  const int r0 = (image.height - side) / 2;
  const int c0 = (image.width - side) / 2;
  GrayImage out{side, side, Eigen::VectorXd(side * side)};
  for (int r = 0; r < side; ++r)
    for (int c = 0; c < side; ++c) out.pixels[r * side + c] = image.pixels[(r + r0) * image.width + c + c0];
  return out;
}

GrayImage block_downscale(const GrayImage& image, int n) {
  if (image.width != image.height) throw std::invalid_argument("downscale needs a square image");
  if (n < 1 || n > image.width) throw std::invalid_argument("target size must be in [1, side]");
  const int side = image.width;
  const Eigen::MatrixXd a = area_weights(side, n);
  // pixels are row-major, so the mapped column-major matrix is the transpose.
  Eigen::Map<const Eigen::MatrixXd> src_t(image.pixels.data(), side, side);
  const Eigen::MatrixXd dst_t = a * src_t * a.transpose();
  GrayImage out{n, n, Eigen::VectorXd(n * n)};
  Eigen::Map<Eigen::MatrixXd>(out.pixels.data(), n, n) = dst_t;
  return out;
}

Eigen::VectorXd load_image(const std::filesystem::path& path, int n, bool crop) {
  GrayImage img = load_pgm(path);
  if (img.width != img.height) {
    if (!crop) throw std::invalid_argument("non-square image needs the crop directive");
    img = center_crop(img);
  }
  if (img.width != n) img = block_downscale(img, n);
  Eigen::VectorXd values(n * n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) values[r + n * c] = img.pixels[r * n + c];
  return values;
}

GrayImage render_field(const Eigen::VectorXd& values, int n) {
  if (values.size() != static_cast<Eigen::Index>(n) * n) throw std::invalid_argument("field size mismatch");
  const double lo = values.minCoeff();
  const double hi = values.maxCoeff();
  const double span = hi > lo ? hi - lo : 1.0;
  GrayImage out{n, n, Eigen::VectorXd(n * n)};
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) out.pixels[r * n + c] = (values[r + n * c] - lo) / span;
  return out;
}

}  // namespace rsbl
