#pragma once

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rsbl {

/// Uniform periodic grid on [-pi, pi): s_j = -pi + j * ds, ds = 2*pi/n, j = 0..n-1.
///
/// Zero-based throughout. Literature that counts from j = 1 maps onto this grid
/// by subtracting one from every index; cell j is [s_j, s_{j+1}) with s_n = s_0 + 2*pi.
struct Grid {
  int n = 0;
  double spacing = 0.0;
  std::vector<double> points;

  double operator[](int j) const { return points[static_cast<std::size_t>(j)]; }
};

/// Samples of a function on a Grid.
struct SignalVector {
  Grid grid;
  Eigen::VectorXd values;

  int size() const { return grid.n; }
};

/// Jump magnitude per grid cell. Entry j holds [f](xi) when a discontinuity xi
/// lies in [s_j, s_{j+1}).
struct EdgeVector {
  Grid grid;
  Eigen::VectorXd values;
};

/// n x n image on [-pi, pi)^2, stored column-major: pixel (j, j') at j + n*j'.
/// Row index j runs along the first coordinate s_j, column index along s_{j'}.
struct Image {
  Grid grid;
  Eigen::VectorXd values;

  int side() const { return grid.n; }
  double operator()(int j, int jp) const { return values[j + grid.n * jp]; }
};

enum class SignalId { f1, f2, f3, f4, f5, f6, mixed1, mixed2, mixed3 };
enum class ImageId { h1, h2, h3 };

SignalId parse_signal_id(std::string_view name);
ImageId parse_image_id(std::string_view name);
std::string to_string(SignalId id);
std::string to_string(ImageId id);

/// Requires n even and n >= 4.
Grid make_grid(int n);

/// values[j] = fn(s_j). Throws std::domain_error if fn is non-finite anywhere.
SignalVector sample(const std::function<double(double)>& fn, const Grid& grid);

/// Piecewise definitions on U1 = [-pi,-pi/2), U2 = [-pi/2,pi/2), U3 = [pi/2,pi).
/// For the mixed signals this returns the continuous part only (zero on [-pi,0),
/// f1/f2/f3 on [0,pi)); the sparse spikes live on grid indices and are added by
/// sample_example.
double example_signal(SignalId id, double s);

/// Amplitude of the spikes placed on the sparse half of the mixed signals.
inline constexpr double kMixedSpikeAmplitude = 1.0;
/// Grid indices of those spikes.
inline constexpr int kMixedSpikeIndices[2] = {15, 40};

/// Samples a test signal on the grid, including mixed-signal spikes.
SignalVector sample_example(SignalId id, const Grid& grid);

/// Pattern image value at 1-based pixel (j, jp) of an n x n image.
/// Radial regions R1 = [0, 0.3pi), R2 = [0.3pi, 0.7pi), R3 = [0.7pi, inf) are
/// shared by all three images; rho is measured from the domain centre (0, 0).
double example_image(ImageId id, int j, int jp, int n);

Image sample_image(ImageId id, int n);

/// Ground-truth edge vector from one-sided limits of the piecewise definition,
/// including the periodic wrap at -pi. Mixed-signal spikes contribute +a on the
/// cell before the spike and -a on the spike's own cell.
EdgeVector true_edge_vector(SignalId id, const Grid& grid);

/// Index of the cell [s_j, s_{j+1}) containing s (periodic).
int cell_index(const Grid& grid, double s);

/// (location, jump) pairs of the continuous definition in [-pi, pi); zero jumps
/// are omitted.
std::vector<std::pair<double, double>> continuous_jumps(SignalId id);

/// Locations of the discontinuities of a test signal in [-pi, pi).
std::vector<double> jump_locations(SignalId id);

}  // namespace rsbl
