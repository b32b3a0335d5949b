#include "rsbl/signals.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rsbl {
namespace {

constexpr double kPi = std::numbers::pi;

using Branch = double (*)(double);

// Three branches over U1, U2, U3.
struct Piecewise {
  std::array<Branch, 3> branch;
};

Piecewise piecewise_of(SignalId id) {
  switch (id) {
    case SignalId::f1:
      return {{[](double s) { return 11.0 * kPi / 4.0 - 5.0 - s * s / 5.0; },
               [](double s) { return 7.0 / 4.0 - s / 2.0 + 6.0 * std::sin(s - 0.25); },
               [](double s) { return 11.0 * s / 4.0 - 5.0; }}};
    case SignalId::f2:
      return {{[](double s) { return s + kPi; },
               [](double s) { return -std::sin(6.0 * s) / 2.0; },
               [](double s) { return std::sin(-s + kPi); }}};
    case SignalId::f3:
      return {{[](double s) { return std::sin(-s / 2.0); },
               [](double s) { return std::cos(1.5 * s); },
               [](double s) { return std::sin(s / 2.0); }}};
    case SignalId::f4:
      return {{[](double) { return 1.5; }, [](double) { return -6.0 / kPi; },
               [](double) { return 1.5; }}};
    case SignalId::f5:
      return {{[](double) { return -3.0; }, [](double) { return -4.0 / kPi; },
               [](double) { return -3.0; }}};
    case SignalId::f6:
      return {{[](double) { return 0.5; }, [](double) { return -2.0 / kPi; },
               [](double) { return 0.5; }}};
    default:
      break;
  }
  throw std::invalid_argument("piecewise_of: not a piecewise test signal");
}

bool is_mixed(SignalId id) {
  return id == SignalId::mixed1 || id == SignalId::mixed2 || id == SignalId::mixed3;
}

SignalId smooth_part(SignalId id) {
  switch (id) {
    case SignalId::mixed1: return SignalId::f1;
    case SignalId::mixed2: return SignalId::f2;
    case SignalId::mixed3: return SignalId::f3;
    default: return id;
  }
}

int region_of(double s) {
  if (s < -kPi / 2.0) return 0;
  if (s < kPi / 2.0) return 1;
  return 2;
}

void check_domain(double s) {
  if (!(s >= -kPi && s < kPi)) {
    throw std::domain_error("signal argument outside [-pi, pi)");
  }
}

}  // namespace

SignalId parse_signal_id(std::string_view name) {
  static constexpr std::array<std::pair<std::string_view, SignalId>, 9> table{{
      {"f1", SignalId::f1},
      {"f2", SignalId::f2},
      {"f3", SignalId::f3},
      {"f4", SignalId::f4},
      {"f5", SignalId::f5},
      {"f6", SignalId::f6},
      {"mixed1", SignalId::mixed1},
      {"mixed2", SignalId::mixed2},
      {"mixed3", SignalId::mixed3},
  }};
  for (const auto& [key, id] : table) {
    if (key == name) return id;
  }
  throw std::invalid_argument("unknown signal id: " + std::string(name));
}

ImageId parse_image_id(std::string_view name) {
  if (name == "h1") return ImageId::h1;
  if (name == "h2") return ImageId::h2;
  if (name == "h3") return ImageId::h3;
  throw std::invalid_argument("unknown image id: " + std::string(name));
}

std::string to_string(SignalId id) {
  static constexpr std::array<const char*, 9> names{
      "f1", "f2", "f3", "f4", "f5", "f6", "mixed1", "mixed2", "mixed3"};
  return names[static_cast<std::size_t>(id)];
}

std::string to_string(ImageId id) {
  static constexpr std::array<const char*, 3> names{"h1", "h2", "h3"};
  return names[static_cast<std::size_t>(id)];
}

Grid make_grid(int n) {
  if (n < 4) throw std::invalid_argument("make_grid: n must be at least 4");
  if (n % 2 != 0) throw std::invalid_argument("make_grid: n must be even");
  Grid g;
  g.n = n;
  g.spacing = 2.0 * kPi / n;
  g.points.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    g.points[static_cast<std::size_t>(j)] = -kPi + j * g.spacing;
  }
  return g;
}

SignalVector sample(const std::function<double(double)>& fn, const Grid& grid) {
  SignalVector out{grid, Eigen::VectorXd(grid.n)};
  for (int j = 0; j < grid.n; ++j) {
    const double v = fn(grid[j]);
    if (!std::isfinite(v)) {
      throw std::domain_error("sample: non-finite value at grid index " + std::to_string(j));
    }
    out.values[j] = v;
  }
  return out;
}

double example_signal(SignalId id, double s) {
  check_domain(s);
  if (is_mixed(id)) {
    if (s < 0.0) return 0.0;
    return example_signal(smooth_part(id), s);
  }
  return piecewise_of(id).branch[static_cast<std::size_t>(region_of(s))](s);
}

SignalVector sample_example(SignalId id, const Grid& grid) {
  SignalVector out = sample([id](double s) { return example_signal(id, s); }, grid);
  if (is_mixed(id)) {
    for (int j : kMixedSpikeIndices) {
      if (j < grid.n && grid[j] < 0.0) out.values[j] = kMixedSpikeAmplitude;
    }
  }
  return out;
}

double example_image(ImageId id, int j, int jp, int n) {
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("example_image: n must be even and >= 4");
  if (j < 1 || j > n || jp < 1 || jp > n) {
    throw std::out_of_range("example_image: pixel index out of range");
  }
  const double ds = 2.0 * kPi / n;
  const double x = -kPi + (j - 1) * ds;
  const double y = -kPi + (jp - 1) * ds;
  const double rho = std::hypot(x, y);
  // Radii within rounding of a boundary count as on it (half-open regions).
  constexpr double tol = 1e-12;
  const int region = rho + tol < 0.3 * kPi ? 0 : (rho + tol < 0.7 * kPi ? 1 : 2);
  switch (id) {
    case ImageId::h1:
      if (region == 0) {
        return 3.0 + std::pow(std::cos(x) + 1.0, 2) + std::pow(std::cos(y) + 1.0, 2);
      }
      if (region == 1) return 4.0 + std::sin(4.0 * x) + std::sin(4.0 * y);
      return std::sin(x);
    case ImageId::h2:
      if (region == 0) return std::sin(6.0 * x);
      if (region == 1) return -0.3 * std::sin(6.0 * y);
      return std::sin(-x + kPi);
    case ImageId::h3:
      if (region == 0) return std::cos(2.0 * rho);
      if (region == 1) return std::cos(4.0 * rho);
      return -0.5 * std::cos(x);
  }
  throw std::invalid_argument("example_image: unknown image id");
}

Image sample_image(ImageId id, int n) {
  Image img{make_grid(n), Eigen::VectorXd(n * n)};
  for (int jp = 0; jp < n; ++jp) {
    for (int j = 0; j < n; ++j) {
      img.values[j + n * jp] = example_image(id, j + 1, jp + 1, n);
    }
  }
  return img;
}

int cell_index(const Grid& grid, double s) {
  const double offset = std::fmod(s + kPi, 2.0 * kPi);
  const double wrapped = offset < 0.0 ? offset + 2.0 * kPi : offset;
  // Snap values within rounding of a grid point onto that point.
  const double t = wrapped / grid.spacing;
  const double nearest = std::round(t);
  const int j = std::abs(t - nearest) < 1e-9 ? static_cast<int>(nearest)
                                             : static_cast<int>(std::floor(t));
  return ((j % grid.n) + grid.n) % grid.n;
}

std::vector<std::pair<double, double>> continuous_jumps(SignalId id) {
  std::vector<std::pair<double, double>> out;
  const auto push = [&out](double xi, double jump) {
    if (std::abs(jump) > 1e-12) out.emplace_back(xi, jump);
  };
  if (is_mixed(id)) {
    // Zero on [-pi, 0), smooth part on [0, pi).
    const auto pw = piecewise_of(smooth_part(id));
    push(-kPi, 0.0 - pw.branch[2](kPi));
    push(0.0, pw.branch[1](0.0));
    push(kPi / 2.0, pw.branch[2](kPi / 2.0) - pw.branch[1](kPi / 2.0));
    return out;
  }
  const auto pw = piecewise_of(id);
  push(-kPi, pw.branch[0](-kPi) - pw.branch[2](kPi));
  push(-kPi / 2.0, pw.branch[1](-kPi / 2.0) - pw.branch[0](-kPi / 2.0));
  push(kPi / 2.0, pw.branch[2](kPi / 2.0) - pw.branch[1](kPi / 2.0));
  return out;
}

std::vector<double> jump_locations(SignalId id) {
  std::vector<double> out;
  for (const auto& [xi, jump] : continuous_jumps(id)) out.push_back(xi);
  return out;
}

EdgeVector true_edge_vector(SignalId id, const Grid& grid) {
  EdgeVector out{grid, Eigen::VectorXd::Zero(grid.n)};
  for (const auto& [xi, jump] : continuous_jumps(id)) {
    out.values[cell_index(grid, xi)] += jump;
  }
  if (is_mixed(id)) {
    for (int j : kMixedSpikeIndices) {
      if (j < 1 || j >= grid.n || grid[j] >= 0.0) continue;
      out.values[j - 1] += kMixedSpikeAmplitude;
      out.values[j] -= kMixedSpikeAmplitude;
    }
  }
  return out;
}

}  // namespace rsbl
