#ifndef HEIS_RIGID_MOTION_HPP
#define HEIS_RIGID_MOTION_HPP

#include <array>

#include "heis/heis_core.hpp"

// The group PSH(1) of pseudo-hermitian transformations (Heisenberg rigid
// motions): left translations composed with SO(2) rotations, represented
// as 4x4 matrices acting on (1, x, y, z)^t.

namespace heis {

struct Mat4 {
    // row-major
    std::array<std::array<double, 4>, 4> m{};

    static Mat4 identity();
    double& operator()(int r, int c) { return m[r][c]; }
    double operator()(int r, int c) const { return m[r][c]; }
};

Mat4 operator*(const Mat4& a, const Mat4& b);
Mat4 operator+(const Mat4& a, const Mat4& b);
Mat4 operator*(double s, const Mat4& a);

// Stored as (translation p, rotation angle alpha0); the matrix pattern
// constraints then hold by construction and never drift.
struct RigidMotion {
    HeisPoint translation{};
    double angle = 0.0;
};

// Values of (omega^1, omega^2, omega^3, omega_1^2) on a tangent direction.
struct MaurerCartanValue {
    double w1 = 0.0;
    double w2 = 0.0;
    double w3 = 0.0;
    double w12 = 0.0;
};

// (p; X, Y, T) with X horizontal unit and Y = JX.
struct OrientedFrame {
    HeisPoint base{};
    FrameCoefficients X{1.0, 0.0, 0.0};
    FrameCoefficients Y{0.0, 1.0, 0.0};
};

RigidMotion identity_motion();

// The affine action (ax+by+p1, cx+dy+p2, (a p2 - c p1)x + (b p2 - d p1)y + z + p3).
HeisPoint apply(const RigidMotion& g, const HeisPoint& q);

// Differential of apply; affine, so the Jacobian is analytic and constant.
TangentVector pushforward(const RigidMotion& g, const TangentVector& v);

// Horizontal frame coefficients just rotate by the motion's angle.
FrameCoefficients pushforward(const RigidMotion& g, const FrameCoefficients& c);

RigidMotion compose(const RigidMotion& g, const RigidMotion& h);
RigidMotion inverse(const RigidMotion& g);

Mat4 motion_matrix(const RigidMotion& g);

// Max absolute deviation of M from the PSH(1) pattern: fixed zeros/ones,
// special-orthogonal rotation block, derived bottom-row entries.
double validate(const Mat4& M);

// Project a near-group matrix back onto PSH(1): read p from column 0,
// polar-project the 2x2 block onto SO(2), recompute the bottom row.
// Throws TooFarFromGroup when the block is > 0.5 from SO(2) in operator norm.
RigidMotion retract(const Mat4& M);

RigidMotion frame_to_motion(const OrientedFrame& f);
OrientedFrame motion_to_frame(const RigidMotion& g);

// The psh(1)-valued matrix of a Maurer-Cartan value:
//   ( 0    0    0   0 )
//   ( w1   0  -w12  0 )
//   ( w2  w12   0   0 )
//   ( w3   w2  -w1  0 )
Mat4 maurer_cartan_matrix(const MaurerCartanValue& mc);

// One first-order step of dp = w1 X + w2 Y + w3 T, dX = w12 Y + w2 T,
// dY = -w12 X - w1 T, followed by retraction onto the group.
OrientedFrame moving_frame_step(const OrientedFrame& f, const MaurerCartanValue& mc, double ds);

}  // namespace heis

#endif
