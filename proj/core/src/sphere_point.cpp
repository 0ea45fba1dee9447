#include "sgfield/sphere_point.hpp"

#include <cmath>
#include <stdexcept>

namespace sgfield {

SpherePoint SpherePoint::from_unit_vector(double x, double y, double z) {
    double n = std::sqrt(x * x + y * y + z * z);
    if (!(n > 0.0) || std::fabs(n - 1.0) > 1e-6)
        throw std::domain_error("SpherePoint: vector is not close to unit length");
    SpherePoint p;
    p.v_ = {x / n, y / n, z / n};
    return p;
}

SpherePoint SpherePoint::from_angles(double colatitude, double longitude) {
    if (colatitude < 0.0 || colatitude > M_PI)
        throw std::domain_error("SpherePoint: colatitude outside [0, pi]");
    double st = std::sin(colatitude);
    SpherePoint p;
    p.v_ = {st * std::cos(longitude), st * std::sin(longitude), std::cos(colatitude)};
    return p;
}

double SpherePoint::colatitude() const {
    return std::atan2(std::hypot(v_[0], v_[1]), v_[2]);
}

double SpherePoint::longitude() const {
    double phi = std::atan2(v_[1], v_[0]);
    if (phi < 0.0) phi += 2.0 * M_PI;
    return phi;
}

double geodesic_distance(const SpherePoint& a, const SpherePoint& b) {
    double t = a.dot(b);
    if (t > 1.0) t = 1.0;
    if (t < -1.0) t = -1.0;
    return std::acos(t);
}

SpherePoint apply_rotation(const Rotation& r, const SpherePoint& p) {
    const auto& v = p.unit_vector();
    double w[3];
    for (int i = 0; i < 3; ++i)
        w[i] = r[i][0] * v[0] + r[i][1] * v[1] + r[i][2] * v[2];
    return SpherePoint::from_unit_vector(w[0], w[1], w[2]);
}

Rotation rotation_to_north_pole(const SpherePoint& from) {
    // Rodrigues rotation about axis = from x ez by the angle between them.
    double cx = from.y();   // (from x ez) = (fy, -fx, 0)
    double cy = -from.x();
    double s = std::hypot(cx, cy);  // sin of the rotation angle
    double c = from.z();            // cos of the rotation angle
    if (s < 1e-14) {
        if (c > 0.0) return {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
        // Antipodal: rotate by pi about the x axis.
        return {{{1, 0, 0}, {0, -1, 0}, {0, 0, -1}}};
    }
    double ux = cx / s, uy = cy / s;
    double k = 1.0 - c;
    Rotation r;
    r[0] = {c + ux * ux * k, ux * uy * k, uy * s};
    r[1] = {ux * uy * k, c + uy * uy * k, -ux * s};
    r[2] = {-uy * s, ux * s, c};
    return r;
}

Rotation random_rotation(RngStream& rng) {
    double q[4];
    double n2 = 0.0;
    do {
        n2 = 0.0;
        for (double& qi : q) {
            qi = rng.normal();
            n2 += qi * qi;
        }
    } while (n2 < 1e-12);
    double n = std::sqrt(n2);
    double w = q[0] / n, x = q[1] / n, y = q[2] / n, z = q[3] / n;
    Rotation r;
    r[0] = {1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)};
    r[1] = {2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)};
    r[2] = {2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)};
    return r;
}

SpherePoint random_point(RngStream& rng) {
    double z = 2.0 * rng.uniform() - 1.0;
    double phi = 2.0 * M_PI * rng.uniform();
    double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    return SpherePoint::from_unit_vector(s * std::cos(phi), s * std::sin(phi), z);
}

}  // namespace sgfield
