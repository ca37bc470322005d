#include "heis/surface_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "heis/numerics.hpp"

namespace heis {

namespace {

using Vec3 = std::array<double, 3>;

constexpr double kSingularRel = 1e-7;

struct Field3 {
    std::vector<Vec3> val;
};

// d/du of a scalar field over the grid, column by column.
std::vector<double> d_du(const std::vector<double>& f, std::size_t nu, std::size_t nv, double du) {
    std::vector<double> out(f.size());
    std::vector<double> col(nu);
    for (std::size_t j = 0; j < nv; ++j) {
        for (std::size_t i = 0; i < nu; ++i) col[i] = f[i * nv + j];
        const auto d = derivative_uniform(col, du);
        for (std::size_t i = 0; i < nu; ++i) out[i * nv + j] = d[i];
    }
    return out;
}

std::vector<double> d_dv(const std::vector<double>& f, std::size_t nu, std::size_t nv, double dv) {
    std::vector<double> out(f.size());
    std::vector<double> row(nv);
    for (std::size_t i = 0; i < nu; ++i) {
        for (std::size_t j = 0; j < nv; ++j) row[j] = f[i * nv + j];
        const auto d = derivative_uniform(row, dv);
        for (std::size_t j = 0; j < nv; ++j) out[i * nv + j] = d[j];
    }
    return out;
}

Field3 d_du(const Field3& f, std::size_t nu, std::size_t nv, double du) {
    Field3 out;
    out.val.resize(f.val.size());
    std::vector<double> comp(f.val.size());
    for (int d = 0; d < 3; ++d) {
        for (std::size_t k = 0; k < f.val.size(); ++k) comp[k] = f.val[k][d];
        const auto dc = d_du(comp, nu, nv, du);
        for (std::size_t k = 0; k < f.val.size(); ++k) out.val[k][d] = dc[k];
    }
    return out;
}

Field3 d_dv(const Field3& f, std::size_t nu, std::size_t nv, double dv) {
    Field3 out;
    out.val.resize(f.val.size());
    std::vector<double> comp(f.val.size());
    for (int d = 0; d < 3; ++d) {
        for (std::size_t k = 0; k < f.val.size(); ++k) comp[k] = f.val[k][d];
        const auto dc = d_dv(comp, nu, nv, dv);
        for (std::size_t k = 0; k < f.val.size(); ++k) out.val[k][d] = dc[k];
    }
    return out;
}

Field3 points_field(const SurfaceGrid& g) {
    Field3 f;
    f.val.resize(g.points.size());
    for (std::size_t k = 0; k < g.points.size(); ++k)
        f.val[k] = {g.points[k].x, g.points[k].y, g.points[k].z};
    return f;
}

Field3 partial_u(const SurfaceGrid& g) {
    if (g.has_fu()) return Field3{std::vector<Vec3>(g.fu.begin(), g.fu.end())};
    return d_du(points_field(g), g.nu, g.nv, g.du);
}

Field3 partial_v(const SurfaceGrid& g) {
    if (g.has_fv()) return Field3{std::vector<Vec3>(g.fv.begin(), g.fv.end())};
    return d_dv(points_field(g), g.nu, g.nv, g.dv);
}

double theta_of(const HeisPoint& base, const Vec3& w) {
    return w[2] + base.x * w[1] - base.y * w[0];
}

}  // namespace

void SurfaceGrid::check() const {
    if (nu < 3 || nv < 3) throw DomainError("SurfaceGrid: need at least 3 nodes per direction");
    if (points.size() != nu * nv) throw DomainError("SurfaceGrid: point array size mismatch");
    if (!(du > 0.0) || !(dv > 0.0)) throw DomainError("SurfaceGrid: grid spacing must be positive");
    if (!fu.empty() && fu.size() != points.size())
        throw DomainError("SurfaceGrid: F_u array size mismatch");
    if (!fv.empty() && fv.size() != points.size())
        throw DomainError("SurfaceGrid: F_v array size mismatch");
    for (const auto& p : points)
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
            throw DomainError("SurfaceGrid: non-finite point");
}

FoliationField foliation_field(const SurfaceGrid& g) {
    g.check();
    const auto Fu = partial_u(g);
    const auto Fv = partial_v(g);
    const std::size_t n = g.points.size();

    FoliationField out;
    out.nu = g.nu;
    out.nv = g.nv;
    out.theta_u.resize(n);
    out.theta_v.resize(n);
    out.E.resize(n);
    out.singular.assign(n, 0);

    double scale = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        out.theta_u[k] = theta_of(g.points[k], Fu.val[k]);
        out.theta_v[k] = theta_of(g.points[k], Fv.val[k]);
        scale = std::max(scale, std::max(std::abs(out.theta_u[k]), std::abs(out.theta_v[k])));
    }
    out.scale = scale;
    const double threshold = kSingularRel * scale;
    for (std::size_t k = 0; k < n; ++k) {
        const double tu = out.theta_u[k], tv = out.theta_v[k];
        out.E[k] = TangentVector{g.points[k],
                                 tu * Fv.val[k][0] - tv * Fu.val[k][0],
                                 tu * Fv.val[k][1] - tv * Fu.val[k][1],
                                 tu * Fv.val[k][2] - tv * Fu.val[k][2]};
        if (std::max(std::abs(tu), std::abs(tv)) <= threshold) out.singular[k] = 1;
    }
    return out;
}

SurfaceCoefficients coefficients(const SurfaceGrid& g, const NormalTolerances& tol) {
    g.check();
    const auto Fu = partial_u(g);
    const auto Fv = partial_v(g);
    const auto fol = foliation_field(g);
    const std::size_t n = g.points.size();

    // validate the normal-parametrization preconditions, tracking the worst node
    double worst = 0.0;
    std::size_t worst_node = 0;
    const char* worst_check = "";
    auto offend = [&](double dev, std::size_t k, const char* what) {
        if (dev > worst) {
            worst = dev;
            worst_node = k;
            worst_check = what;
        }
    };
    bool bad = false;
    for (std::size_t k = 0; k < n; ++k) {
        const double vx = Fu.val[k][0], vy = Fu.val[k][1];
        const double norm_xi = std::hypot(vx, vy);
        const double theta = fol.theta_u[k];
        const double unit_dev = std::abs(norm_xi - 1.0);
        const double horiz_dev = std::abs(theta) / (1.0 + norm_xi);
        double par_dev = 0.0;
        if (!fol.singular[k]) {
            const double ex = fol.E[k].vx, ey = fol.E[k].vy;
            const double en = std::hypot(ex, ey);
            if (en > 0.0) par_dev = std::abs(vx * ey - vy * ex) / (norm_xi * en);
        } else {
            offend(1.0, k, "singular node");
            bad = true;
        }
        if (unit_dev > tol.unit) { offend(unit_dev, k, "|F_u| != 1"); bad = true; }
        if (horiz_dev > tol.horizontal) { offend(horiz_dev, k, "F_u not horizontal"); bad = true; }
        if (par_dev > tol.parallel) { offend(par_dev, k, "F_u not parallel to E"); bad = true; }
    }
    if (bad) {
        const std::size_t i = worst_node / g.nv, j = worst_node % g.nv;
        throw NotNormalParametrization(
            std::string("coefficients: ") + worst_check + " at node (" + std::to_string(i) +
            "," + std::to_string(j) + "), deviation " + std::to_string(worst));
    }

    SurfaceCoefficients out;
    out.nu = g.nu;
    out.nv = g.nv;
    out.u0 = g.u0;
    out.du = g.du;
    out.v0 = g.v0;
    out.dv = g.dv;
    out.a.resize(n);
    out.b.resize(n);
    out.c.resize(n);

    const auto Fuu = d_du(Fu, g.nu, g.nv, g.du);
    const auto Fuv = d_dv(Fu, g.nu, g.nv, g.dv);
    out.l.resize(n);
    out.m.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const FrameCoefficients X{Fu.val[k][0], Fu.val[k][1], 0.0};
        const FrameCoefficients Y{-X.c2, X.c1, 0.0};
        const double ax = Fv.val[k][0], ay = Fv.val[k][1];
        out.a[k] = ax * X.c1 + ay * X.c2;
        out.b[k] = ax * Y.c1 + ay * Y.c2;
        out.c[k] = fol.theta_v[k];
        out.l[k] = Fuu.val[k][0] * Y.c1 + Fuu.val[k][1] * Y.c2;
        out.m[k] = Fuv.val[k][0] * Y.c1 + Fuv.val[k][1] * Y.c2;
    }
    return out;
}

std::vector<double> integrability_residual(const SurfaceCoefficients& c) {
    const auto au = d_du(c.a, c.nu, c.nv, c.du);
    const auto bu = d_du(c.b, c.nu, c.nv, c.du);
    const auto cu = d_du(c.c, c.nu, c.nv, c.du);
    const auto lv = d_dv(c.l, c.nu, c.nv, c.dv);
    const auto mu = d_du(c.m, c.nu, c.nv, c.du);
    std::vector<double> r(c.a.size());
    for (std::size_t k = 0; k < r.size(); ++k) {
        double m = std::abs(au[k] - c.b[k] * c.l[k]);
        m = std::max(m, std::abs(bu[k] + c.a[k] * c.l[k] - c.m[k]));
        m = std::max(m, std::abs(cu[k] - 2.0 * c.b[k]));
        m = std::max(m, std::abs(lv[k] - mu[k]));
        r[k] = m;
    }
    return r;
}

std::vector<double> pminimal_residual(const SurfaceCoefficients& c) {
    const auto au = d_du(c.a, c.nu, c.nv, c.du);
    const auto bu = d_du(c.b, c.nu, c.nv, c.du);
    const auto buu = d_du(bu, c.nu, c.nv, c.du);
    const auto cu = d_du(c.c, c.nu, c.nv, c.du);
    std::vector<double> r(c.a.size());
    for (std::size_t k = 0; k < r.size(); ++k) {
        double m = std::abs(au[k]);
        m = std::max(m, std::abs(buu[k]));
        m = std::max(m, std::abs(cu[k] - 2.0 * c.b[k]));
        m = std::max(m, std::abs(c.m[k] - bu[k]));
        r[k] = m;
    }
    return r;
}

SurfaceInvariants invariants(const SurfaceGrid& g, const SurfaceCoefficients& c) {
    g.check();
    if (g.nu != c.nu || g.nv != c.nv)
        throw GridMismatch("invariants: grid and coefficients differ in shape");
    const std::size_t n = c.a.size();
    const double nan = std::numeric_limits<double>::quiet_NaN();

    double cmax = 0.0;
    for (std::size_t k = 0; k < n; ++k) cmax = std::max(cmax, std::abs(c.c[k]));
    const double threshold = kSingularRel * std::max(1.0, cmax);

    SurfaceInvariants out;
    out.nu = c.nu;
    out.nv = c.nv;
    out.alpha.assign(n, nan);
    out.pmean = c.l;
    out.g11.assign(n, 1.0);
    out.g12 = c.a;
    out.g22.resize(n);
    out.gauss.assign(n, nan);
    out.masked.assign(n, 0);

    std::size_t n_masked = 0;
    for (std::size_t k = 0; k < n; ++k) {
        out.g22[k] = c.a[k] * c.a[k] + c.b[k] * c.b[k] + c.c[k] * c.c[k];
        if (std::abs(c.c[k]) <= threshold) {
            out.masked[k] = 1;
            ++n_masked;
        } else {
            out.alpha[k] = c.b[k] / c.c[k];
        }
    }
    if (n_masked == n) throw NearSingular("invariants: every node is near-singular (c ~ 0)");

    // Gaussian curvature from the structure equation d(omega-hat_1^2) = -K w1^w2.
    // omega-hat_1^2 = S du + W dv with
    //   S = l alpha / sqrt(1+alpha^2)
    //   W = S a + (2 alpha + alpha e1(alpha)/(1+alpha^2)) sqrt(1+alpha^2) c
    const auto e1alpha = d_du(out.alpha, c.nu, c.nv, c.du);
    std::vector<double> S(n), W(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double al = out.alpha[k];
        const double q = 1.0 + al * al;
        S[k] = c.l[k] * al / std::sqrt(q);
        const double Q = 2.0 * al + al * e1alpha[k] / q;
        W[k] = S[k] * c.a[k] + Q * std::sqrt(q) * c.c[k];
    }
    const auto Wu = d_du(W, c.nu, c.nv, c.du);
    const auto Sv = d_dv(S, c.nu, c.nv, c.dv);
    for (std::size_t k = 0; k < n; ++k) {
        if (out.masked[k]) continue;
        const double q = 1.0 + out.alpha[k] * out.alpha[k];
        out.gauss[k] = -(Wu[k] - Sv[k]) / (std::sqrt(q) * c.c[k]);
    }
    return out;
}

std::vector<double> surface_integrability_residual(const SurfaceInvariants& inv,
                                                   const SurfaceCoefficients& c) {
    if (inv.nu != c.nu || inv.nv != c.nv)
        throw GridMismatch("surface_integrability_residual: shape mismatch");
    const std::size_t n = c.a.size();
    std::size_t n_masked = 0;
    for (std::size_t k = 0; k < n; ++k) n_masked += inv.masked[k];
    if (n_masked == n)
        throw NearSingular("surface_integrability_residual: every node is near-singular");

    const auto au_l = d_du(c.l, c.nu, c.nv, c.du);
    const auto av_l = d_dv(c.l, c.nu, c.nv, c.dv);
    const auto au_alpha = d_du(inv.alpha, c.nu, c.nv, c.du);
    const auto av_alpha = d_dv(inv.alpha, c.nu, c.nv, c.dv);
    const auto auu_alpha = d_du(au_alpha, c.nu, c.nv, c.du);

    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> r(n, nan);
    for (std::size_t k = 0; k < n; ++k) {
        if (inv.masked[k]) continue;
        const double al = inv.alpha[k];
        const double q = 1.0 + al * al;
        const double sq = std::sqrt(q);
        const double eS_l = (av_l[k] - c.a[k] * au_l[k]) / (c.c[k] * sq);
        const double eS_alpha = (av_alpha[k] - c.a[k] * au_alpha[k]) / (c.c[k] * sq);
        const double lhs = q * sq * eS_l;
        const double rhs = q * auu_alpha[k] - al * au_alpha[k] * au_alpha[k] +
                           4.0 * al * q * au_alpha[k] - al * q * q * inv.gauss[k] +
                           al * c.l[k] * sq * eS_alpha + al * q * c.l[k] * c.l[k];
        r[k] = std::abs(lhs - rhs);
    }
    return r;
}

namespace {

// RK4 step of dM = M*phi(t) along one grid direction with linearly
// interpolated coefficient values at the half node.
RigidMotion rk4_step(const Mat4& M, const MaurerCartanValue& mc0, const MaurerCartanValue& mc1,
                     double h) {
    const MaurerCartanValue mcm{0.5 * (mc0.w1 + mc1.w1), 0.5 * (mc0.w2 + mc1.w2),
                                0.5 * (mc0.w3 + mc1.w3), 0.5 * (mc0.w12 + mc1.w12)};
    const Mat4 phi0 = maurer_cartan_matrix(mc0);
    const Mat4 phim = maurer_cartan_matrix(mcm);
    const Mat4 phi1 = maurer_cartan_matrix(mc1);
    const Mat4 A1 = M * phi0;
    const Mat4 A2 = (M + (0.5 * h) * A1) * phim;
    const Mat4 A3 = (M + (0.5 * h) * A2) * phim;
    const Mat4 A4 = (M + h * A3) * phi1;
    return retract(M + (h / 6.0) * (A1 + 2.0 * A2 + 2.0 * A3 + A4));
}

}  // namespace

SurfaceGrid reconstruct_surface(const SurfaceCoefficients& c, const OrientedFrame& f0,
                                PathOrder order, double tol_int) {
    const auto res = integrability_residual(c);
    const double worst = *std::max_element(res.begin(), res.end());
    if (worst > tol_int)
        throw IntegrabilityViolated("reconstruct_surface: integrability residual " +
                                    std::to_string(worst) + " exceeds tolerance");

    const std::size_t nu = c.nu, nv = c.nv;
    auto mc_u = [&](std::size_t i, std::size_t j) {
        return MaurerCartanValue{1.0, 0.0, 0.0, c.l[c.idx(i, j)]};
    };
    auto mc_v = [&](std::size_t i, std::size_t j) {
        const std::size_t k = c.idx(i, j);
        return MaurerCartanValue{c.a[k], c.b[k], c.c[k], c.m[k]};
    };

    std::vector<RigidMotion> motions(nu * nv);
    const RigidMotion g0 = frame_to_motion(f0);
    motions[c.idx(0, 0)] = g0;

    if (order == PathOrder::v_then_u) {
        Mat4 M = motion_matrix(g0);
        for (std::size_t j = 0; j + 1 < nv; ++j) {
            const RigidMotion g = rk4_step(M, mc_v(0, j), mc_v(0, j + 1), c.dv);
            motions[c.idx(0, j + 1)] = g;
            M = motion_matrix(g);
        }
        for (std::size_t j = 0; j < nv; ++j) {
            Mat4 Mu = motion_matrix(motions[c.idx(0, j)]);
            for (std::size_t i = 0; i + 1 < nu; ++i) {
                const RigidMotion g = rk4_step(Mu, mc_u(i, j), mc_u(i + 1, j), c.du);
                motions[c.idx(i + 1, j)] = g;
                Mu = motion_matrix(g);
            }
        }
    } else {
        Mat4 M = motion_matrix(g0);
        for (std::size_t i = 0; i + 1 < nu; ++i) {
            const RigidMotion g = rk4_step(M, mc_u(i, 0), mc_u(i + 1, 0), c.du);
            motions[c.idx(i + 1, 0)] = g;
            M = motion_matrix(g);
        }
        for (std::size_t i = 0; i < nu; ++i) {
            Mat4 Mv = motion_matrix(motions[c.idx(i, 0)]);
            for (std::size_t j = 0; j + 1 < nv; ++j) {
                const RigidMotion g = rk4_step(Mv, mc_v(i, j), mc_v(i, j + 1), c.dv);
                motions[c.idx(i, j + 1)] = g;
                Mv = motion_matrix(g);
            }
        }
    }

    SurfaceGrid out;
    out.u0 = c.u0;
    out.du = c.du;
    out.nu = nu;
    out.v0 = c.v0;
    out.dv = c.dv;
    out.nv = nv;
    out.points.resize(nu * nv);
    out.fu.resize(nu * nv);
    for (std::size_t k = 0; k < nu * nv; ++k) {
        const OrientedFrame f = motion_to_frame(motions[k]);
        out.points[k] = f.base;
        out.fu[k] = {f.X.c1, f.X.c2, f.X.c1 * f.base.y - f.X.c2 * f.base.x};
    }
    return out;
}

SurfaceGrid normal_parametrize(const SurfaceGrid& g) {
    g.check();
    const auto fol = foliation_field(g);
    for (std::size_t k = 0; k < fol.singular.size(); ++k)
        if (fol.singular[k])
            throw SingularPointEncountered("normal_parametrize: grid contains a singular node");

    const auto Fu = partial_u(g);
    const auto Fv = partial_v(g);
    const auto P = points_field(g);

    const double u_lo = g.u0, u_hi = g.u(g.nu - 1);
    const double v_lo = g.v0, v_hi = g.v(g.nv - 1);

    auto bilinear = [&](const std::vector<double>& f, double uu, double vv) {
        double su = (uu - g.u0) / g.du, sv = (vv - g.v0) / g.dv;
        su = std::clamp(su, 0.0, static_cast<double>(g.nu - 1));
        sv = std::clamp(sv, 0.0, static_cast<double>(g.nv - 1));
        std::size_t i = std::min(static_cast<std::size_t>(su), g.nu - 2);
        std::size_t j = std::min(static_cast<std::size_t>(sv), g.nv - 2);
        const double fu_ = su - static_cast<double>(i);
        const double fv_ = sv - static_cast<double>(j);
        return (1 - fu_) * (1 - fv_) * f[g.idx(i, j)] + fu_ * (1 - fv_) * f[g.idx(i + 1, j)] +
               (1 - fu_) * fv_ * f[g.idx(i, j + 1)] + fu_ * fv_ * f[g.idx(i + 1, j + 1)];
    };
    auto bilinear3 = [&](const Field3& f, double uu, double vv) -> Vec3 {
        Vec3 out;
        std::vector<double> comp(f.val.size());
        for (int d = 0; d < 3; ++d) {
            for (std::size_t k = 0; k < f.val.size(); ++k) comp[k] = f.val[k][d];
            out[d] = bilinear(comp, uu, vv);
        }
        return out;
    };

    // parameter-space direction of unit-speed motion along the foliation
    const std::size_t seed_i = g.nu / 2;
    const double seed_u = g.u(seed_i);
    const double sigma =
        (bilinear(fol.theta_v, seed_u, g.v(g.nv / 2)) >= 0.0) ? 1.0 : -1.0;
    auto direction = [&](double uu, double vv) -> std::array<double, 2> {
        const double tu = bilinear(fol.theta_u, uu, vv);
        const double tv = bilinear(fol.theta_v, uu, vv);
        const Vec3 fu_ = bilinear3(Fu, uu, vv);
        const Vec3 fv_ = bilinear3(Fv, uu, vv);
        const double ex = tu * fv_[0] - tv * fu_[0];
        const double ey = tu * fv_[1] - tv * fu_[1];
        const double norm = std::hypot(ex, ey);
        if (norm <= kSingularRel * fol.scale)
            throw SingularPointEncountered("normal_parametrize: streamline hit a singular point");
        return {sigma * tv / norm, -sigma * tu / norm};
    };

    for (std::size_t j = 0; j < g.nv; ++j) {
        const double tv = fol.theta_v[g.idx(seed_i, j)];
        if (std::abs(tv) <= kSingularRel * fol.scale)
            throw TransversalNotFound("normal_parametrize: E is tangent to the seed line");
    }

    const double step = 0.5 * std::min(g.du, g.dv);
    auto inside = [&](double uu, double vv) {
        return uu >= u_lo && uu <= u_hi && vv >= v_lo && vv <= v_hi;
    };
    auto trace = [&](double vseed, double dir_sign, std::vector<std::array<double, 2>>& path) {
        double uu = seed_u, vv = vseed;
        const std::size_t max_steps = 4 * (g.nu + g.nv) * (g.nu + g.nv);
        for (std::size_t it = 0; it < max_steps; ++it) {
            const auto k1 = direction(uu, vv);
            const auto mid1_u = uu + 0.5 * step * dir_sign * k1[0];
            const auto mid1_v = vv + 0.5 * step * dir_sign * k1[1];
            if (!inside(mid1_u, mid1_v)) break;
            const auto k2 = direction(mid1_u, mid1_v);
            const auto mid2_u = uu + 0.5 * step * dir_sign * k2[0];
            const auto mid2_v = vv + 0.5 * step * dir_sign * k2[1];
            if (!inside(mid2_u, mid2_v)) break;
            const auto k3 = direction(mid2_u, mid2_v);
            const auto end_u = uu + step * dir_sign * k3[0];
            const auto end_v = vv + step * dir_sign * k3[1];
            if (!inside(end_u, end_v)) break;
            const auto k4 = direction(end_u, end_v);
            uu += step * dir_sign * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]) / 6.0;
            vv += step * dir_sign * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]) / 6.0;
            if (!inside(uu, vv)) break;
            path.push_back({uu, vv});
        }
    };

    std::vector<std::vector<std::array<double, 2>>> fwd(g.nv), bwd(g.nv);
    std::size_t n_fwd = std::numeric_limits<std::size_t>::max();
    std::size_t n_bwd = std::numeric_limits<std::size_t>::max();
    for (std::size_t j = 0; j < g.nv; ++j) {
        trace(g.v(j), +1.0, fwd[j]);
        trace(g.v(j), -1.0, bwd[j]);
        n_fwd = std::min(n_fwd, fwd[j].size());
        n_bwd = std::min(n_bwd, bwd[j].size());
    }
    if (n_fwd + n_bwd + 1 < 3)
        throw TransversalNotFound("normal_parametrize: common streamline range is too short");

    SurfaceGrid out;
    out.nu = n_fwd + n_bwd + 1;
    out.du = step;
    out.u0 = -static_cast<double>(n_bwd) * step;
    out.nv = g.nv;
    out.v0 = g.v0;
    out.dv = g.dv;
    out.points.resize(out.nu * out.nv);
    out.fu.resize(out.nu * out.nv);

    for (std::size_t j = 0; j < g.nv; ++j) {
        for (std::size_t i = 0; i < out.nu; ++i) {
            std::array<double, 2> par;
            if (i < n_bwd)
                par = bwd[j][n_bwd - 1 - i];
            else if (i == n_bwd)
                par = {seed_u, g.v(j)};
            else
                par = fwd[j][i - n_bwd - 1];
            const Vec3 pos = bilinear3(P, par[0], par[1]);
            const HeisPoint base{pos[0], pos[1], pos[2]};
            const auto dir = direction(par[0], par[1]);
            const Vec3 fu_ = bilinear3(Fu, par[0], par[1]);
            const Vec3 fv_ = bilinear3(Fv, par[0], par[1]);
            // unit horizontal tangent along the traced direction, exact at the base
            double tx = dir[0] * fu_[0] + dir[1] * fv_[0];
            double ty = dir[0] * fu_[1] + dir[1] * fv_[1];
            const double norm = std::hypot(tx, ty);
            tx /= norm;
            ty /= norm;
            out.points[out.idx(i, j)] = base;
            out.fu[out.idx(i, j)] = {tx, ty, tx * base.y - ty * base.x};
        }
    }
    return out;
}

SurfaceGrid transform(const RigidMotion& g, const SurfaceGrid& grid) {
    SurfaceGrid out = grid;
    for (std::size_t k = 0; k < grid.points.size(); ++k) {
        const HeisPoint base = grid.points[k];
        out.points[k] = apply(g, base);
        if (grid.has_fu()) {
            const TangentVector tv =
                pushforward(g, TangentVector{base, grid.fu[k][0], grid.fu[k][1], grid.fu[k][2]});
            out.fu[k] = {tv.vx, tv.vy, tv.vz};
        }
        if (grid.has_fv()) {
            const TangentVector tv =
                pushforward(g, TangentVector{base, grid.fv[k][0], grid.fv[k][1], grid.fv[k][2]});
            out.fv[k] = {tv.vx, tv.vy, tv.vz};
        }
    }
    return out;
}

}  // namespace heis
