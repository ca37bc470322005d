#include "heis/rigid_motion.hpp"

#include <cmath>
#include <numbers>

namespace heis {

Mat4 Mat4::identity() {
    Mat4 r;
    for (int i = 0; i < 4; ++i) r(i, i) = 1.0;
    return r;
}

Mat4 operator*(const Mat4& a, const Mat4& b) {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < 4; ++j) r(i, j) += aik * b(k, j);
        }
    return r;
}

Mat4 operator+(const Mat4& a, const Mat4& b) {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r(i, j) = a(i, j) + b(i, j);
    return r;
}

Mat4 operator*(double s, const Mat4& a) {
    Mat4 r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r(i, j) = s * a(i, j);
    return r;
}

RigidMotion identity_motion() { return RigidMotion{}; }

HeisPoint apply(const RigidMotion& g, const HeisPoint& q) {
    const double a = std::cos(g.angle), b = -std::sin(g.angle);
    const double c = std::sin(g.angle), d = std::cos(g.angle);
    const double p1 = g.translation.x, p2 = g.translation.y, p3 = g.translation.z;
    return {a * q.x + b * q.y + p1,
            c * q.x + d * q.y + p2,
            (a * p2 - c * p1) * q.x + (b * p2 - d * p1) * q.y + q.z + p3};
}

TangentVector pushforward(const RigidMotion& g, const TangentVector& v) {
    const double a = std::cos(g.angle), b = -std::sin(g.angle);
    const double c = std::sin(g.angle), d = std::cos(g.angle);
    const double p1 = g.translation.x, p2 = g.translation.y;
    return {apply(g, v.base),
            a * v.vx + b * v.vy,
            c * v.vx + d * v.vy,
            (a * p2 - c * p1) * v.vx + (b * p2 - d * p1) * v.vy + v.vz};
}

FrameCoefficients pushforward(const RigidMotion& g, const FrameCoefficients& c) {
    const double ca = std::cos(g.angle), sa = std::sin(g.angle);
    return {ca * c.c1 - sa * c.c2, sa * c.c1 + ca * c.c2, c.cT};
}

RigidMotion compose(const RigidMotion& g, const RigidMotion& h) {
    return {apply(g, h.translation), std::remainder(g.angle + h.angle, 2.0 * std::numbers::pi)};
}

RigidMotion inverse(const RigidMotion& g) {
    const RigidMotion rot_back{HeisPoint{}, -g.angle};
    return {apply(rot_back, group_inv(g.translation)), std::remainder(-g.angle, 2.0 * std::numbers::pi)};
}

Mat4 motion_matrix(const RigidMotion& g) {
    const double a = std::cos(g.angle), b = -std::sin(g.angle);
    const double c = std::sin(g.angle), d = std::cos(g.angle);
    const double p1 = g.translation.x, p2 = g.translation.y, p3 = g.translation.z;
    Mat4 M;
    M(0, 0) = 1.0;
    M(1, 0) = p1; M(1, 1) = a; M(1, 2) = b;
    M(2, 0) = p2; M(2, 1) = c; M(2, 2) = d;
    M(3, 0) = p3;
    M(3, 1) = a * p2 - c * p1;
    M(3, 2) = b * p2 - d * p1;
    M(3, 3) = 1.0;
    return M;
}

double validate(const Mat4& M) {
    double r = 0.0;
    auto bump = [&r](double dev) { r = std::max(r, std::abs(dev)); };
    bump(M(0, 0) - 1.0);
    bump(M(0, 1));
    bump(M(0, 2));
    bump(M(0, 3));
    bump(M(1, 3));
    bump(M(2, 3));
    bump(M(3, 3) - 1.0);
    const double a = M(1, 1), b = M(1, 2), c = M(2, 1), d = M(2, 2);
    // R^t R = I and det R = 1
    bump(a * a + c * c - 1.0);
    bump(b * b + d * d - 1.0);
    bump(a * b + c * d);
    bump(a * d - b * c - 1.0);
    const double p1 = M(1, 0), p2 = M(2, 0);
    bump(M(3, 1) - (a * p2 - c * p1));
    bump(M(3, 2) - (b * p2 - d * p1));
    return r;
}

RigidMotion retract(const Mat4& M) {
    const double a = M(1, 1), b = M(1, 2), c = M(2, 1), d = M(2, 2);
    // nearest SO(2) element in Frobenius norm
    const double angle = std::atan2(c - b, a + d);
    const double ca = std::cos(angle), sa = std::sin(angle);
    // operator norm of (block - R) via singular values of a 2x2 matrix
    const double e11 = a - ca, e12 = b + sa, e21 = c - sa, e22 = d - ca;
    const double q = e11 * e11 + e12 * e12 + e21 * e21 + e22 * e22;
    const double det = e11 * e22 - e12 * e21;
    const double disc = std::sqrt(std::max(0.0, q * q - 4.0 * det * det));
    const double opnorm = std::sqrt(0.5 * (q + disc));
    if (!(opnorm <= 0.5))
        throw TooFarFromGroup("retract: rotation block is too far from SO(2)");
    return {HeisPoint{M(1, 0), M(2, 0), M(3, 0)}, angle};
}

Mat4 maurer_cartan_matrix(const MaurerCartanValue& mc) {
    Mat4 w;
    w(1, 0) = mc.w1; w(1, 2) = -mc.w12;
    w(2, 0) = mc.w2; w(2, 1) = mc.w12;
    w(3, 0) = mc.w3; w(3, 1) = mc.w2; w(3, 2) = -mc.w1;
    return w;
}

RigidMotion frame_to_motion(const OrientedFrame& f) {
    const double norm = std::hypot(f.X.c1, f.X.c2);
    if (std::abs(norm - 1.0) > 1e-6)
        throw DegenerateFrame("frame_to_motion: X is not unit length");
    return {f.base, std::atan2(f.X.c2, f.X.c1)};
}

OrientedFrame motion_to_frame(const RigidMotion& g) {
    const double ca = std::cos(g.angle), sa = std::sin(g.angle);
    return {g.translation, FrameCoefficients{ca, sa, 0.0}, FrameCoefficients{-sa, ca, 0.0}};
}

OrientedFrame moving_frame_step(const OrientedFrame& f, const MaurerCartanValue& mc, double ds) {
    const Mat4 M = motion_matrix(frame_to_motion(f));
    return motion_to_frame(retract(M + ds * (M * maurer_cartan_matrix(mc))));
}

}  // namespace heis
