#pragma once

#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <vector>

#include "roadcov/errors.hpp"
#include "roadcov/params.hpp"
#include "roadcov/rng.hpp"

namespace roadcov {

using Vec2 = Eigen::Vector2d;
using Point3 = Eigen::Vector3d;

/// A road in (rho, theta) representation space: the set of points p with
/// p . (cos theta, sin theta) = rho.
struct Line {
  double rho = 0.0;
  double theta = 0.0;  // [0, pi)
  bool is_typical = false;

  Vec2 normal() const { return {std::cos(theta), std::sin(theta)}; }
  Vec2 direction() const { return {-std::sin(theta), std::cos(theta)}; }
  /// Foot of the perpendicular from the origin.
  Vec2 foot() const { return rho * normal(); }
  Vec2 point_at(double t) const { return foot() + t * direction(); }
  /// Half-length of the chord cut by a disk of the given radius (0 if missed).
  double half_chord(double radius) const {
    const double h2 = radius * radius - rho * rho;
    return h2 > 0.0 ? std::sqrt(h2) : 0.0;
  }
};

/// Retained intensity of a Type-II hard-core field, (1 - e^{-lambda_p pi d^2}) / (pi d^2).
template <class Scalar>
Scalar mhc_intensity(Scalar lambda_p, Scalar d) {
  using std::expm1;
  const Scalar area = Scalar(std::numbers::pi) * d * d;
  return -expm1(-lambda_p * area) / area;
}


/// Parent intensity that yields the requested retained intensity, or throws
/// if the target exceeds the saturation value 1 / (pi d^2).
double mhc_parent_intensity(double lambda_u, double d);

/// Area of the union of two radius-d disks whose centres are v apart.
template <class Scalar>
Scalar union_area(Scalar v, Scalar d) {
  using std::acos;
  using std::sqrt;
  if (v < Scalar(0)) throw ParameterError("union_area: separation must be non-negative");
  const Scalar pi = Scalar(std::numbers::pi);
  if (v >= Scalar(2) * d) return Scalar(2) * pi * d * d;
  return Scalar(2) * pi * d * d - Scalar(2) * d * d * acos(v / (Scalar(2) * d)) +
         v * sqrt(d * d - v * v / Scalar(4));
}

/// Second-order product density of the Type-II hard-core field at separation v.
template <class Scalar>
Scalar second_order_density(Scalar v, Scalar lambda_p, Scalar d) {
  using std::expm1;
  if (v < d) return Scalar(0);
  const Scalar lambda_u = mhc_intensity(lambda_p, d);
  if (v > Scalar(2) * d) return lambda_u * lambda_u;
  const Scalar disk = Scalar(std::numbers::pi) * d * d;
  const Scalar V = union_area(v, d);
  const Scalar num = Scalar(2) * V * (-expm1(-lambda_p * disk)) - Scalar(2) * disk * (-expm1(-lambda_p * V));
  return num / (disk * V * (V - disk));
}

inline double second_order_density(double v, const MhcParams& p) {
  return second_order_density(v, p.lambda_p(), p.d);
}

/// Poisson line process hitting the disk of the given radius, with the
/// typical line (through the origin, uniform angle) appended last.
std::vector<Line> sample_plp(double lambda_l, double window_radius, Philox4x32& rng);

/// Homogeneous 1-D PPP on the segment of `line` centred on its foot point.
std::vector<Point3> sample_ppp_on_line(double lambda_a, const Line& line, double half_length,
                                       Philox4x32& rng);

/// Homogeneous 2-D PPP in a disk centred on the origin, lifted to `altitude`.
std::vector<Point3> sample_ppp_disk(double intensity, double radius, Philox4x32& rng,
                                    double altitude = 0.0);

/// Type-II hard-core field in a disk centred on the origin. Parents are drawn
/// in the disk inflated by d; a parent is kept iff its mark is the smallest
/// among parents within distance d.
std::vector<Point3> sample_mhc2(const MhcParams& params, double window_radius, Philox4x32& rng,
                                double altitude = 0.0);

/// Smallest pairwise horizontal distance (infinity for fewer than two points).
double min_pairwise_distance(const std::vector<Point3>& points);

}  // namespace roadcov
