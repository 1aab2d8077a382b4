#include "roadcov/point_processes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_map>

namespace roadcov {

namespace {

constexpr double kPi = std::numbers::pi;

long draw_poisson(double mean, Philox4x32& rng) {
  if (mean <= 0.0) return 0;
  std::poisson_distribution<long> count(mean);
  return count(rng);
}

Vec2 uniform_in_disk(double radius, Philox4x32& rng) {
  const double r = radius * std::sqrt(rng.uniform());
  const double phi = 2.0 * kPi * rng.uniform();
  return {r * std::cos(phi), r * std::sin(phi)};
}

}  // namespace

double mhc_parent_intensity(double lambda_u, double d) {
  require(lambda_u > 0.0 && d > 0.0, "mhc_parent_intensity: inputs must be positive");
  const double area = kPi * d * d;
  const double fill = lambda_u * area;
  require(fill < 1.0, "retained UAV intensity exceeds the hard-core saturation 1/(pi d^2)");
  return -std::log1p(-fill) / area;
}

std::vector<Line> sample_plp(double lambda_l, double window_radius, Philox4x32& rng) {
  require(lambda_l > 0.0, "sample_plp: line density must be positive");
  require(window_radius > 0.0, "sample_plp: window radius must be positive");
  const long n = draw_poisson(lambda_l * 2.0 * window_radius * kPi, rng);
  std::vector<Line> lines;
  lines.reserve(static_cast<std::size_t>(n) + 1);
  for (long i = 0; i < n; ++i) {
    const double rho = window_radius * (2.0 * rng.uniform() - 1.0);
    const double theta = kPi * rng.uniform();
    lines.push_back({rho, theta, false});
  }
  lines.push_back({0.0, kPi * rng.uniform(), true});
  return lines;
}

std::vector<Point3> sample_ppp_on_line(double lambda_a, const Line& line, double half_length,
                                       Philox4x32& rng) {
  require(lambda_a > 0.0, "sample_ppp_on_line: density must be positive");
  require(half_length >= 0.0, "sample_ppp_on_line: half length must be non-negative");
  const long n = draw_poisson(2.0 * lambda_a * half_length, rng);
  std::vector<Point3> points;
  points.reserve(static_cast<std::size_t>(n));
  const Vec2 foot = line.foot();
  const Vec2 dir = line.direction();
  for (long i = 0; i < n; ++i) {
    const double t = half_length * (2.0 * rng.uniform() - 1.0);
    const Vec2 p = foot + t * dir;
    points.emplace_back(p.x(), p.y(), 0.0);
  }
  return points;
}

std::vector<Point3> sample_ppp_disk(double intensity, double radius, Philox4x32& rng,
                                    double altitude) {
  require(intensity >= 0.0 && radius > 0.0, "sample_ppp_disk: invalid parameters");
  const long n = draw_poisson(intensity * kPi * radius * radius, rng);
  std::vector<Point3> points;
  points.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    const Vec2 p = uniform_in_disk(radius, rng);
    points.emplace_back(p.x(), p.y(), altitude);
  }
  return points;
}

std::vector<Point3> sample_mhc2(const MhcParams& params, double window_radius, Philox4x32& rng,
                                double altitude) {
  require(params.lambda_u > 0.0 && params.d > 0.0, "sample_mhc2: invalid MHC parameters");
  const double lambda_p = params.lambda_p();
  require(window_radius > params.d, "sample_mhc2: window radius must exceed d");
  const double d = params.d;
  const double outer = window_radius + d;
  const long n = draw_poisson(lambda_p * kPi * outer * outer, rng);

  std::vector<Vec2> parents(static_cast<std::size_t>(n));
  std::vector<double> marks(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    parents[i] = uniform_in_disk(outer, rng);
    marks[i] = rng.uniform();
  }

  // bucket parents on a grid of cell size d so competitors lie in the 3x3 block
  auto cell_of = [&](const Vec2& p) {
    return std::pair<long, long>{static_cast<long>(std::floor((p.x() + outer) / d)),
                                 static_cast<long>(std::floor((p.y() + outer) / d))};
  };
  const long cells_per_side = static_cast<long>(std::ceil(2.0 * outer / d)) + 1;
  std::unordered_map<long, std::vector<std::size_t>> grid;
  for (std::size_t i = 0; i < parents.size(); ++i) {
    const auto [cx, cy] = cell_of(parents[i]);
    grid[cx * cells_per_side + cy].push_back(i);
  }

  const double d2 = d * d;
  std::vector<Point3> kept;
  for (std::size_t i = 0; i < parents.size(); ++i) {
    if (parents[i].squaredNorm() > window_radius * window_radius) continue;
    const auto [cx, cy] = cell_of(parents[i]);
    bool lowest = true;
    for (long dx = -1; dx <= 1 && lowest; ++dx) {
      for (long dy = -1; dy <= 1 && lowest; ++dy) {
        const auto it = grid.find((cx + dx) * cells_per_side + (cy + dy));
        if (it == grid.end()) continue;
        for (std::size_t j : it->second) {
          if (j != i && marks[j] < marks[i] && (parents[j] - parents[i]).squaredNorm() < d2) {
            lowest = false;
            break;
          }
        }
      }
    }
    if (lowest) kept.emplace_back(parents[i].x(), parents[i].y(), altitude);
  }
  return kept;
}

double min_pairwise_distance(const std::vector<Point3>& points) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      best = std::min(best, (points[i].head<2>() - points[j].head<2>()).norm());
  return best;
}

}  // namespace roadcov
