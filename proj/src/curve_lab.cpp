#include "heis/curve_lab.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "heis/numerics.hpp"

namespace heis {

namespace {

struct VelocityArrays {
    std::vector<double> vx, vy, vz;
};

VelocityArrays velocity_arrays(const CurveTrace& c) {
    const std::size_t n = c.points.size();
    VelocityArrays v;
    if (c.has_velocities()) {
        v.vx.resize(n);
        v.vy.resize(n);
        v.vz.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            v.vx[i] = c.velocities[i][0];
            v.vy[i] = c.velocities[i][1];
            v.vz[i] = c.velocities[i][2];
        }
        return v;
    }
    const double h = c.spacing();
    std::vector<double> x(n), y(n), z(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = c.points[i].x;
        y[i] = c.points[i].y;
        z[i] = c.points[i].z;
    }
    v.vx = derivative_uniform(x, h);
    v.vy = derivative_uniform(y, h);
    v.vz = derivative_uniform(z, h);
    return v;
}

std::vector<double> speeds(const VelocityArrays& v) {
    std::vector<double> s(v.vx.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::hypot(v.vx[i], v.vy[i]);
    return s;
}

void require_regular(const std::vector<double>& sigma, const std::vector<double>& params) {
    for (std::size_t i = 0; i < sigma.size(); ++i)
        if (!(sigma[i] > kHorizontalRegularityEps))
            throw NotHorizontallyRegular(
                "curve is not horizontally regular at t = " + std::to_string(params[i]),
                params[i]);
}

std::array<double, 3> coordinate_column(const OrientedFrame& f, const FrameCoefficients& c) {
    return {c.c1, c.c2, c.c1 * f.base.y - c.c2 * f.base.x + c.cT};
}

}  // namespace

double CurveTrace::spacing() const {
    check();
    return params[1] - params[0];
}

void CurveTrace::check() const {
    if (points.size() < 2 || params.size() != points.size())
        throw DomainError("CurveTrace: need n >= 2 nodes with matching grids");
    if (!velocities.empty() && velocities.size() != points.size())
        throw DomainError("CurveTrace: velocity array length mismatch");
    const double h = params[1] - params[0];
    if (!(h > 0.0)) throw DomainError("CurveTrace: parameter grid must increase");
    for (std::size_t i = 1; i < params.size(); ++i)
        if (std::abs(params[i] - params[i - 1] - h) > 1e-9 * std::max(1.0, std::abs(h)))
            throw DomainError("CurveTrace: parameter grid must be uniform");
    for (const auto& p : points)
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
            throw DomainError("CurveTrace: non-finite point");
}

double InvariantSignature::spacing() const {
    if (arc.size() < 2 || k.size() != arc.size() || tau.size() != arc.size())
        throw DomainError("InvariantSignature: need n >= 2 nodes with matching grids");
    const double h = arc[1] - arc[0];
    if (!(h > 0.0)) throw DomainError("InvariantSignature: arclength grid must increase");
    for (std::size_t i = 1; i < arc.size(); ++i)
        if (std::abs(arc[i] - arc[i - 1] - h) > 1e-9 * std::max(1.0, h))
            throw DomainError("InvariantSignature: arclength grid must be uniform");
    return h;
}

std::vector<double> horizontal_speed(const CurveTrace& c) {
    c.check();
    return speeds(velocity_arrays(c));
}

CurveTrace reparametrize_arclength(const CurveTrace& c, std::size_t n_out) {
    c.check();
    if (n_out < 2) throw DomainError("reparametrize_arclength: need n_out >= 2");
    const auto v = velocity_arrays(c);
    const auto sigma = speeds(v);
    require_regular(sigma, c.params);
    const double h = c.spacing();
    const auto s = cumulative_trapezoid(sigma, h);
    const double total = s.back();

    PchipInterpolant t_of_s(s, c.params);
    const std::size_t n = c.points.size();
    std::vector<double> x(n), y(n), z(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = c.points[i].x;
        y[i] = c.points[i].y;
        z[i] = c.points[i].z;
    }
    PchipInterpolant xi(c.params, x), yi(c.params, y), zi(c.params, z);

    CurveTrace out;
    out.params.resize(n_out);
    out.points.resize(n_out);
    for (std::size_t j = 0; j < n_out; ++j) {
        const double sj = total * static_cast<double>(j) / static_cast<double>(n_out - 1);
        const double tj = t_of_s(sj);
        out.params[j] = sj;
        out.points[j] = {xi(tj), yi(tj), zi(tj)};
    }
    return out;
}

PointwiseInvariants invariants_pointwise(const CurveTrace& c) {
    c.check();
    const auto v = velocity_arrays(c);
    const auto sigma = speeds(v);
    require_regular(sigma, c.params);
    const double h = c.spacing();
    const auto ax = derivative_uniform(v.vx, h);
    const auto ay = derivative_uniform(v.vy, h);

    const std::size_t n = c.points.size();
    PointwiseInvariants out;
    out.s = cumulative_trapezoid(sigma, h);
    out.k.resize(n);
    out.tau.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s3 = sigma[i] * sigma[i] * sigma[i];
        out.k[i] = (v.vx[i] * ay[i] - ax[i] * v.vy[i]) / s3;
        out.tau[i] = (c.points[i].x * v.vy[i] - v.vx[i] * c.points[i].y + v.vz[i]) / sigma[i];
    }
    return out;
}

InvariantSignature invariants(const CurveTrace& c) {
    const auto pw = invariants_pointwise(c);
    const std::size_t n = pw.s.size();
    PchipInterpolant ki(pw.s, pw.k), ti(pw.s, pw.tau);
    InvariantSignature sig;
    sig.arc.resize(n);
    sig.k.resize(n);
    sig.tau.resize(n);
    const double total = pw.s.back();
    for (std::size_t j = 0; j < n; ++j) {
        const double sj = total * static_cast<double>(j) / static_cast<double>(n - 1);
        sig.arc[j] = sj;
        sig.k[j] = ki(sj);
        sig.tau[j] = ti(sj);
    }
    return sig;
}

MaurerCartanValue darboux_matrix(double k, double tau) { return {1.0, 0.0, tau, k}; }

Reconstruction reconstruct(const InvariantSignature& sig, const OrientedFrame& f0) {
    const double h = sig.spacing();
    const std::size_t n = sig.arc.size();

    Reconstruction out;
    out.curve.params = sig.arc;
    out.curve.points.resize(n);
    out.frames.arc = sig.arc;
    out.frames.frames.resize(n);

    RigidMotion g = frame_to_motion(f0);
    out.frames.frames[0] = motion_to_frame(g);
    out.curve.points[0] = g.translation;

    Mat4 M = motion_matrix(g);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const Mat4 phi0 = maurer_cartan_matrix(darboux_matrix(sig.k[i], sig.tau[i]));
        const Mat4 phi1 = maurer_cartan_matrix(darboux_matrix(sig.k[i + 1], sig.tau[i + 1]));
        const Mat4 phim = maurer_cartan_matrix(darboux_matrix(
            0.5 * (sig.k[i] + sig.k[i + 1]), 0.5 * (sig.tau[i] + sig.tau[i + 1])));
        const Mat4 A1 = M * phi0;
        const Mat4 A2 = (M + (0.5 * h) * A1) * phim;
        const Mat4 A3 = (M + (0.5 * h) * A2) * phim;
        const Mat4 A4 = (M + h * A3) * phi1;
        g = retract(M + (h / 6.0) * (A1 + 2.0 * A2 + 2.0 * A3 + A4));
        M = motion_matrix(g);
        out.frames.frames[i + 1] = motion_to_frame(g);
        out.curve.points[i + 1] = g.translation;
    }
    return out;
}

CurveTrace geodesic(const GeodesicParams& g, const std::vector<double>& t_grid) {
    if (t_grid.size() < 2) throw DomainError("geodesic: need at least 2 grid nodes");
    const double amp2 = g.a1 * g.a1 + g.a2 * g.a2;
    if (g.c3 != 0.0 && amp2 <= 0.0)
        throw DegenerateAmplitude("geodesic: c3 != 0 requires a1^2 + a2^2 > 0");

    CurveTrace out;
    out.params = t_grid;
    out.points.resize(t_grid.size());
    out.velocities.resize(t_grid.size());

    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const double t = t_grid[i];
        if (g.c3 == 0.0) {
            out.points[i] = {g.a1 * t + g.d1, g.a2 * t + g.d2,
                             (g.a1 * g.d2 - g.a2 * g.d1) * t + g.d3};
            out.velocities[i] = {g.a1, g.a2, g.a1 * g.d2 - g.a2 * g.d1};
        } else if (g.c3 > 0.0) {
            const double w = 2.0 * g.c3;
            const double sn = std::sin(w * t), cs = std::cos(w * t);
            out.points[i] = {g.a1 * sn + g.a2 * cs + g.d1,
                             -g.a2 * sn + g.a1 * cs + g.d2,
                             (g.a2 * g.d1 + g.a1 * g.d2) * sn +
                                 (g.a2 * g.d2 - g.a1 * g.d1) * cs + w * amp2 * t + g.d3};
            out.velocities[i] = {w * (g.a1 * cs - g.a2 * sn),
                                 w * (-g.a2 * cs - g.a1 * sn),
                                 w * ((g.a2 * g.d1 + g.a1 * g.d2) * cs -
                                      (g.a2 * g.d2 - g.a1 * g.d1) * sn + amp2)};
        } else {
            const double w = -2.0 * g.c3;
            const double sn = std::sin(w * t), cs = std::cos(w * t);
            out.points[i] = {g.a1 * sn + g.a2 * cs + g.d1,
                             g.a2 * sn - g.a1 * cs + g.d2,
                             (g.a1 * g.d2 - g.a2 * g.d1) * sn +
                                 (g.a1 * g.d1 + g.a2 * g.d2) * cs - w * amp2 * t + g.d3};
            out.velocities[i] = {w * (g.a1 * cs - g.a2 * sn),
                                 w * (g.a2 * cs + g.a1 * sn),
                                 w * ((g.a1 * g.d2 - g.a2 * g.d1) * cs -
                                      (g.a1 * g.d1 + g.a2 * g.d2) * sn - amp2)};
        }
    }
    return out;
}

CongruenceResult congruence(const CurveTrace& c1, const CurveTrace& c2) {
    c1.check();
    c2.check();
    if (c1.points.size() != c2.points.size())
        throw GridMismatch("congruence: traces have different node counts");
    for (std::size_t i = 0; i < c1.params.size(); ++i)
        if (std::abs(c1.params[i] - c2.params[i]) > 1e-9)
            throw GridMismatch("congruence: parameter grids differ");

    const auto v1 = velocity_arrays(c1);
    const auto v2 = velocity_arrays(c2);
    const auto s1 = speeds(v1);
    const auto s2 = speeds(v2);
    require_regular(s1, c1.params);
    require_regular(s2, c2.params);

    const std::size_t n = c1.points.size();
    auto frame_at = [](const CurveTrace& c, const VelocityArrays& v, const std::vector<double>& sg,
                       std::size_t i) {
        OrientedFrame f;
        f.base = c.points[i];
        f.X = {v.vx[i] / sg[i], v.vy[i] / sg[i], 0.0};
        f.Y = almost_complex(f.X);
        return f;
    };

    const OrientedFrame f1 = frame_at(c1, v1, s1, 0);
    const OrientedFrame f2 = frame_at(c2, v2, s2, 0);
    const RigidMotion g = compose(frame_to_motion(f2), inverse(frame_to_motion(f1)));

    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const HeisPoint moved = apply(g, c1.points[i]);
        const HeisPoint target = c2.points[i];
        const double dist = std::sqrt((moved.x - target.x) * (moved.x - target.x) +
                                      (moved.y - target.y) * (moved.y - target.y) +
                                      (moved.z - target.z) * (moved.z - target.z));
        const FrameCoefficients X1{v1.vx[i] / s1[i], v1.vy[i] / s1[i], 0.0};
        const FrameCoefficients X2{v2.vx[i] / s2[i], v2.vy[i] / s2[i], 0.0};
        const FrameCoefficients gX1 = pushforward(g, X1);
        const FrameCoefficients gY1 = pushforward(g, almost_complex(X1));
        const double A = levi_inner(gX1, X2) + levi_inner(gY1, almost_complex(X2));
        residual = std::max(residual, std::max(dist, std::abs(A - 2.0)));
    }
    return {g, residual};
}

double frame_ode_residual(const FrameField& ff, const InvariantSignature& sig) {
    const std::size_t n = ff.frames.size();
    if (n != sig.arc.size() || n != ff.arc.size())
        throw GridMismatch("frame_ode_residual: grids differ in length");
    if (n < 3) throw GridMismatch("frame_ode_residual: need at least 3 nodes");
    const double h = sig.spacing();

    std::vector<std::array<double, 3>> Xc(n), Yc(n), P(n);
    for (std::size_t i = 0; i < n; ++i) {
        Xc[i] = coordinate_column(ff.frames[i], ff.frames[i].X);
        Yc[i] = coordinate_column(ff.frames[i], ff.frames[i].Y);
        P[i] = {ff.frames[i].base.x, ff.frames[i].base.y, ff.frames[i].base.z};
    }

    double r = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        for (int d = 0; d < 3; ++d) {
            const double dX = (Xc[i + 1][d] - Xc[i - 1][d]) / (2.0 * h);
            const double dY = (Yc[i + 1][d] - Yc[i - 1][d]) / (2.0 * h);
            const double dP = (P[i + 1][d] - P[i - 1][d]) / (2.0 * h);
            const double Td = (d == 2) ? 1.0 : 0.0;
            r = std::max(r, std::abs(dX - sig.k[i] * Yc[i][d]));
            r = std::max(r, std::abs(dY + sig.k[i] * Xc[i][d] + Td));
            r = std::max(r, std::abs(dP - (Xc[i][d] + sig.tau[i] * Td)));
        }
    }
    return r;
}

CurveTrace transform(const RigidMotion& g, const CurveTrace& c) {
    CurveTrace out = c;
    for (std::size_t i = 0; i < c.points.size(); ++i) {
        if (c.has_velocities()) {
            const TangentVector tv{c.points[i], c.velocities[i][0], c.velocities[i][1],
                                   c.velocities[i][2]};
            const TangentVector moved = pushforward(g, tv);
            out.points[i] = moved.base;
            out.velocities[i] = {moved.vx, moved.vy, moved.vz};
        } else {
            out.points[i] = apply(g, c.points[i]);
        }
    }
    return out;
}

}  // namespace heis
