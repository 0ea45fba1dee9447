#pragma once

#include <array>

#include "sgfield/rng.hpp"

namespace sgfield {

/// Point on the unit sphere, stored as a unit 3-vector. Colatitude and
/// longitude are derived on demand; (theta, phi) round-trips with the
/// Cartesian form (sin t cos p, sin t sin p, cos t).
class SpherePoint {
  public:
    static SpherePoint from_unit_vector(double x, double y, double z);
    static SpherePoint from_angles(double colatitude, double longitude);
    static SpherePoint north_pole() { return from_unit_vector(0.0, 0.0, 1.0); }

    const std::array<double, 3>& unit_vector() const { return v_; }
    double x() const { return v_[0]; }
    double y() const { return v_[1]; }
    double z() const { return v_[2]; }

    double colatitude() const;
    /// Longitude in [0, 2*pi).
    double longitude() const;

    double dot(const SpherePoint& other) const {
        return v_[0] * other.v_[0] + v_[1] * other.v_[1] + v_[2] * other.v_[2];
    }

  private:
    std::array<double, 3> v_{0.0, 0.0, 1.0};
};

/// arccos of the inner product, clamped to [-1, 1]. Range [0, pi].
double geodesic_distance(const SpherePoint& a, const SpherePoint& b);

/// Proper rotation matrices, row-major.
using Rotation = std::array<std::array<double, 3>, 3>;

SpherePoint apply_rotation(const Rotation& r, const SpherePoint& p);
/// Rotation taking `from` to the North Pole.
Rotation rotation_to_north_pole(const SpherePoint& from);
/// Haar-ish random rotation from a quaternion of normals.
Rotation random_rotation(RngStream& rng);
/// Uniform point on the sphere.
SpherePoint random_point(RngStream& rng);

}  // namespace sgfield
