#ifndef HEIS_HEIS_CORE_HPP
#define HEIS_HEIS_CORE_HPP

#include <cmath>

#include "heis/errors.hpp"

// Exact algebra of the 3-dimensional Heisenberg group H1: group law,
// standard left-invariant frame, contact form, CR structure J and the
// Levi metric. Everything here is a pure function of immutable values.

namespace heis {

struct HeisPoint {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

// A tangent vector carries its base point because the left-invariant
// frame fields depend on position.
struct TangentVector {
    HeisPoint base{};
    double vx = 0.0;
    double vy = 0.0;
    double vz = 0.0;
};

// Components with respect to the left-invariant frame (e1, e2, T) at a
// given base point. This is the canonical internal representation.
struct FrameCoefficients {
    double c1 = 0.0;
    double c2 = 0.0;
    double cT = 0.0;
};

struct StandardFrame {
    TangentVector e1;
    TangentVector e2;
    TangentVector T;
};

inline HeisPoint group_mul(const HeisPoint& p, const HeisPoint& q) {
    return {p.x + q.x, p.y + q.y, p.z + q.z + p.y * q.x - p.x * q.y};
}

inline HeisPoint group_inv(const HeisPoint& p) {
    return {-p.x, -p.y, -p.z};
}

inline StandardFrame standard_frame(const HeisPoint& p) {
    return {TangentVector{p, 1.0, 0.0, p.y},
            TangentVector{p, 0.0, 1.0, -p.x},
            TangentVector{p, 0.0, 0.0, 1.0}};
}

// Theta = dz + x dy - y dx evaluated at the vector's base point.
inline double contact_form(const TangentVector& v) {
    return v.vz + v.base.x * v.vy - v.base.y * v.vx;
}

inline FrameCoefficients split_velocity(const TangentVector& v) {
    return {v.vx, v.vy, contact_form(v)};
}

// Reassemble c1*e1 + c2*e2 + cT*T at the base point.
inline TangentVector assemble(const HeisPoint& base, const FrameCoefficients& c) {
    return {base, c.c1, c.c2, c.c1 * base.y - c.c2 * base.x + c.cT};
}

inline double levi_inner(const FrameCoefficients& a, const FrameCoefficients& b) {
    return a.c1 * b.c1 + a.c2 * b.c2 + a.cT * b.cT;
}

inline double levi_norm(const FrameCoefficients& c) {
    return std::sqrt(levi_inner(c, c));
}

// Tolerance below which a vector counts as horizontal.
inline double horizontal_tolerance(const FrameCoefficients& c) {
    return 1e-9 * (1.0 + levi_norm(c));
}

// J rotates the contact plane by 90 degrees: J e1 = e2, J e2 = -e1.
inline FrameCoefficients almost_complex(const FrameCoefficients& c) {
    if (std::abs(c.cT) > horizontal_tolerance(c))
        throw NonHorizontal("almost_complex: vector has a T-component");
    return {-c.c2, c.c1, 0.0};
}

}  // namespace heis

#endif
