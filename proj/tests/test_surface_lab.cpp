#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "heis/surface_lab.hpp"

using namespace heis;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using PointFn = std::function<HeisPoint(double, double)>;
using PartialFn = std::function<std::array<double, 3>(double, double)>;

SurfaceGrid sample_grid(double u0, double u1, std::size_t nu, double v0, double v1,
                        std::size_t nv, const PointFn& f, const PartialFn& fu = nullptr,
                        const PartialFn& fv = nullptr) {
    SurfaceGrid g;
    g.u0 = u0;
    g.du = (u1 - u0) / static_cast<double>(nu - 1);
    g.nu = nu;
    g.v0 = v0;
    g.dv = (v1 - v0) / static_cast<double>(nv - 1);
    g.nv = nv;
    g.points.resize(nu * nv);
    if (fu) g.fu.resize(nu * nv);
    if (fv) g.fv.resize(nu * nv);
    for (std::size_t i = 0; i < nu; ++i)
        for (std::size_t j = 0; j < nv; ++j) {
            const double u = g.u(i), v = g.v(j);
            g.points[g.idx(i, j)] = f(u, v);
            if (fu) g.fu[g.idx(i, j)] = fu(u, v);
            if (fv) g.fv[g.idx(i, j)] = fv(u, v);
        }
    return g;
}

SurfaceGrid vertical_plane(std::size_t nu = 41, std::size_t nv = 41) {
    return sample_grid(
        0.0, 1.0, nu, 0.0, 1.0, nv, [](double u, double v) { return HeisPoint{u, 0.0, v}; },
        [](double, double) { return std::array<double, 3>{1.0, 0.0, 0.0}; },
        [](double, double) { return std::array<double, 3>{0.0, 0.0, 1.0}; });
}

SurfaceGrid cylinder(std::size_t nu = 121, std::size_t nv = 31, bool partials = true) {
    return sample_grid(
        0.0, kTwoPi, nu, 0.0, 1.0, nv,
        [](double u, double v) { return HeisPoint{std::cos(u), std::sin(u), -u + v}; },
        partials ? PartialFn([](double u, double) {
            return std::array<double, 3>{-std::sin(u), std::cos(u), -1.0};
        })
                 : nullptr,
        partials ? PartialFn([](double, double) {
            return std::array<double, 3>{0.0, 0.0, 1.0};
        })
                 : nullptr);
}

// radial normal parametrization of the flat annulus, optionally with a
// v-dependent gauge shift that makes a = w'(v) nonzero
SurfaceGrid flat_annulus(std::size_t nu = 101, std::size_t nv = 41, double twist = 0.0) {
    auto w = [twist](double v) { return 1.0 + twist * std::sin(v); };
    auto wp = [twist](double v) { return twist * std::cos(v); };
    return sample_grid(
        0.0, 1.0, nu, 0.0, 0.5 * std::numbers::pi, nv,
        [&](double u, double v) {
            const double r = u + w(v);
            return HeisPoint{r * std::cos(v), r * std::sin(v), 0.0};
        },
        [&](double, double v) {
            return std::array<double, 3>{std::cos(v), std::sin(v), 0.0};
        },
        [&](double u, double v) {
            const double r = u + w(v);
            return std::array<double, 3>{wp(v) * std::cos(v) - r * std::sin(v),
                                         wp(v) * std::sin(v) + r * std::cos(v), 0.0};
        });
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (const double x : v)
        if (std::isfinite(x)) m = std::max(m, std::abs(x));
    return m;
}

std::mt19937_64 rng_with(std::uint64_t seed) { return std::mt19937_64{seed}; }

}  // namespace

TEST_CASE("foliation field on the plane z = 0") {
    // grid straddling the origin; the tangent plane equals the contact
    // plane exactly there
    const auto g = sample_grid(-0.5, 0.5, 21, -0.5, 0.5, 21,
                               [](double u, double v) { return HeisPoint{u, v, 0.0}; });
    const auto fol = foliation_field(g);
    for (std::size_t i = 0; i < g.nu; ++i)
        for (std::size_t j = 0; j < g.nv; ++j) {
            const std::size_t k = g.idx(i, j);
            const double u = g.u(i), v = g.v(j);
            CHECK(fol.theta_u[k] == doctest::Approx(-v).epsilon(1e-9));
            CHECK(fol.theta_v[k] == doctest::Approx(u).epsilon(1e-9));
            CHECK(fol.E[k].vx == doctest::Approx(-u).epsilon(1e-8));
            CHECK(fol.E[k].vy == doctest::Approx(-v).epsilon(1e-8));
            const bool at_origin = (i == 10 && j == 10);
            CHECK(fol.singular[k] == (at_origin ? 1 : 0));
            if (!at_origin) {
                const double norm = levi_norm(split_velocity(fol.E[k]));
                CHECK(norm == doctest::Approx(std::hypot(u, v)).epsilon(1e-7));
            }
        }
}

TEST_CASE("foliation field on the vertical plane") {
    const auto g = vertical_plane();
    const auto fol = foliation_field(g);
    for (std::size_t k = 0; k < g.points.size(); ++k) {
        CHECK(std::abs(fol.theta_u[k]) < 1e-12);
        CHECK(fol.theta_v[k] == doctest::Approx(1.0));
        CHECK(fol.E[k].vx == doctest::Approx(-1.0));
        CHECK(std::abs(fol.E[k].vy) < 1e-12);
        CHECK(fol.singular[k] == 0);
        // E is horizontal and tangent by construction
        CHECK(std::abs(contact_form(fol.E[k])) < 1e-12);
    }
}

TEST_CASE("coefficients of model surfaces") {
    const auto plane_coef = coefficients(vertical_plane());
    CHECK(max_abs(plane_coef.a) < 1e-12);
    CHECK(max_abs(plane_coef.b) < 1e-12);
    CHECK(max_abs(plane_coef.l) < 1e-12);
    CHECK(max_abs(plane_coef.m) < 1e-12);
    for (const double c : plane_coef.c) CHECK(c == doctest::Approx(1.0).epsilon(1e-12));

    const auto cyl = cylinder();
    const auto cyl_coef = coefficients(cyl);
    CHECK(max_abs(cyl_coef.a) < 1e-12);
    CHECK(max_abs(cyl_coef.b) < 1e-12);
    CHECK(max_abs(cyl_coef.m) < 1e-10);
    for (const double c : cyl_coef.c) CHECK(c == doctest::Approx(1.0).epsilon(1e-12));
    for (const double l : cyl_coef.l) CHECK(l == doctest::Approx(1.0).epsilon(1e-5));

    // <F_uu, X> and <F_uu, T> vanish on a normal grid
    {
        const auto fu = cyl.fu;
        std::vector<double> fux(cyl.points.size()), fuy(cyl.points.size()),
            fuz(cyl.points.size());
        for (std::size_t k = 0; k < fu.size(); ++k) {
            fux[k] = fu[k][0];
            fuy[k] = fu[k][1];
            fuz[k] = fu[k][2];
        }
        // second derivative via the library path: coefficients already uses
        // it internally; here just check at a few nodes by direct stencils
        for (std::size_t i = 2; i + 2 < cyl.nu; i += 9)
            for (std::size_t j = 0; j < cyl.nv; j += 7) {
                auto d_u = [&](const std::vector<double>& f) {
                    return (f[cyl.idx(i - 2, j)] - 8.0 * f[cyl.idx(i - 1, j)] +
                            8.0 * f[cyl.idx(i + 1, j)] - f[cyl.idx(i + 2, j)]) /
                           (12.0 * cyl.du);
                };
                const double vx = d_u(fux), vy = d_u(fuy), vz = d_u(fuz);
                const HeisPoint base = cyl.points[cyl.idx(i, j)];
                const FrameCoefficients X{cyl.fu[cyl.idx(i, j)][0], cyl.fu[cyl.idx(i, j)][1],
                                          0.0};
                const double against_X = vx * X.c1 + vy * X.c2;
                const double against_T = vz + base.x * vy - base.y * vx;
                CHECK(std::abs(against_X) < 1e-6);
                CHECK(std::abs(against_T) < 1e-6);
            }
    }

    // a non-unit F_u is rejected with the offending check named
    const auto bad = sample_grid(
        0.0, 1.0, 11, 0.0, 1.0, 11,
        [](double u, double v) { return HeisPoint{2.0 * u, 0.0, v}; },
        [](double, double) { return std::array<double, 3>{2.0, 0.0, 0.0}; },
        [](double, double) { return std::array<double, 3>{0.0, 0.0, 1.0}; });
    CHECK_THROWS_AS(coefficients(bad), NotNormalParametrization);
}

TEST_CASE("integrability residuals") {
    const auto plane_coef = coefficients(vertical_plane());
    CHECK(max_abs(integrability_residual(plane_coef)) < 1e-10);

    auto cyl_coef = coefficients(cylinder());
    CHECK(max_abs(integrability_residual(cyl_coef)) < 1e-9);

    // c -> 1 + 0.1 u breaks c_u = 2b by 0.1
    auto broken = cyl_coef;
    for (std::size_t i = 0; i < broken.nu; ++i)
        for (std::size_t j = 0; j < broken.nv; ++j)
            broken.c[broken.idx(i, j)] =
                1.0 + 0.1 * (broken.u0 + broken.du * static_cast<double>(i));
    const auto res = integrability_residual(broken);
    for (const double r : res) CHECK(r == doctest::Approx(0.1).epsilon(1e-6));
}

TEST_CASE("p-minimal residuals") {
    const auto plane_coef = coefficients(vertical_plane());
    CHECK(max_abs(pminimal_residual(plane_coef)) < 1e-10);
    CHECK(max_abs(plane_coef.l) < 1e-10);  // genuinely p-minimal

    // the cylinder satisfies the four conditions but is not p-minimal: l = 1
    const auto cyl_coef = coefficients(cylinder());
    CHECK(max_abs(pminimal_residual(cyl_coef)) < 1e-9);
    CHECK(max_abs(cyl_coef.l) > 0.99);

    auto bent = plane_coef;
    for (std::size_t i = 0; i < bent.nu; ++i)
        for (std::size_t j = 0; j < bent.nv; ++j) {
            const double u = bent.u0 + bent.du * static_cast<double>(i);
            bent.b[bent.idx(i, j)] += 0.1 * u * u;
        }
    CHECK(max_abs(pminimal_residual(bent)) > 0.05);
}

TEST_CASE("invariants of the flat surfaces") {
    const auto plane = vertical_plane();
    const auto plane_inv = invariants(plane, coefficients(plane));
    CHECK(max_abs(plane_inv.alpha) < 1e-12);
    CHECK(max_abs(plane_inv.gauss) < 1e-9);
    for (std::size_t k = 0; k < plane_inv.g11.size(); ++k) {
        CHECK(plane_inv.g11[k] == 1.0);
        CHECK(std::abs(plane_inv.g12[k]) < 1e-12);
        CHECK(plane_inv.g22[k] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(plane_inv.masked[k] == 0);
    }

    const auto cyl = cylinder();
    const auto cyl_coef = coefficients(cyl);
    const auto cyl_inv = invariants(cyl, cyl_coef);
    CHECK(max_abs(cyl_inv.alpha) < 1e-10);
    CHECK(max_abs(cyl_inv.gauss) < 1e-7);
    for (std::size_t k = 0; k < cyl_inv.g22.size(); ++k) {
        CHECK(cyl_inv.g22[k] == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(cyl_inv.pmean[k] == doctest::Approx(1.0).epsilon(1e-4));
        // positive definiteness: det = b^2 + c^2 > 0
        CHECK(cyl_inv.g11[k] * cyl_inv.g22[k] - cyl_inv.g12[k] * cyl_inv.g12[k] > 0.5);
    }
}

TEST_CASE("invariants of the flat annulus against closed forms") {
    const auto ann = flat_annulus(161, 41);
    const auto coef = coefficients(ann);
    const auto inv = invariants(ann, coef);
    for (std::size_t i = 0; i < ann.nu; i += 10)
        for (std::size_t j = 0; j < ann.nv; j += 10) {
            const std::size_t k = ann.idx(i, j);
            const double rho = ann.u(i) + 1.0;
            CHECK(inv.alpha[k] == doctest::Approx(1.0 / rho).epsilon(1e-10));
            CHECK(coef.b[k] == doctest::Approx(rho).epsilon(1e-10));
            CHECK(coef.c[k] == doctest::Approx(rho * rho).epsilon(1e-10));
            CHECK(std::abs(coef.l[k]) < 1e-8);
            CHECK(coef.m[k] == doctest::Approx(1.0).epsilon(1e-6));
            const double Kexp = -(2.0 * rho * rho + 3.0) / std::pow(rho * rho + 1.0, 2.0);
            CHECK(inv.gauss[k] == doctest::Approx(Kexp).epsilon(1e-4));
        }

    // metric-based Gaussian curvature as an independent cross-check:
    // the metric is [1, 0; 0, G(u)] here, so K = -(sqrt G)'' / sqrt G
    for (std::size_t j = 0; j < ann.nv; j += 13)
        for (std::size_t i = 2; i + 2 < ann.nu; i += 9) {
            auto sg = [&](std::size_t ii) { return std::sqrt(inv.g22[ann.idx(ii, j)]); };
            const double d2 =
                (-sg(i - 2) + 16.0 * sg(i - 1) - 30.0 * sg(i) + 16.0 * sg(i + 1) - sg(i + 2)) /
                (12.0 * ann.du * ann.du);
            const double Kmetric = -d2 / sg(i);
            CHECK(inv.gauss[ann.idx(i, j)] == doctest::Approx(Kmetric).epsilon(1e-5));
        }
}

TEST_CASE("invariants rejects an all-singular chart") {
    const auto plane = vertical_plane(11, 11);
    auto coef = coefficients(plane);
    std::fill(coef.c.begin(), coef.c.end(), 0.0);
    CHECK_THROWS_AS(invariants(plane, coef), NearSingular);
}

TEST_CASE("surface integrability residual") {
    const auto plane = vertical_plane();
    const auto plane_coef = coefficients(plane);
    const auto rp = surface_integrability_residual(invariants(plane, plane_coef), plane_coef);
    CHECK(max_abs(rp) < 1e-10);

    const auto cyl = cylinder();
    const auto cyl_coef = coefficients(cyl);
    const auto rc = surface_integrability_residual(invariants(cyl, cyl_coef), cyl_coef);
    CHECK(max_abs(rc) < 1e-6);

    // the genuinely curved annulus satisfies the identity too
    const auto ann = flat_annulus(161, 41);
    const auto ann_coef = coefficients(ann);
    const auto ra = surface_integrability_residual(invariants(ann, ann_coef), ann_coef);
    CHECK(max_abs(ra) < 1e-4);

    // an l-perturbation along e_Sigma is detected
    auto bent = cyl_coef;
    for (std::size_t i = 0; i < bent.nu; ++i)
        for (std::size_t j = 0; j < bent.nv; ++j)
            bent.l[bent.idx(i, j)] += 0.1 * (bent.v0 + bent.dv * static_cast<double>(j));
    const auto rb = surface_integrability_residual(invariants(cyl, bent), bent);
    double lo = 1e300;
    for (const double r : rb) lo = std::min(lo, r);
    CHECK(lo > 0.05);
    CHECK(max_abs(rb) == doctest::Approx(0.1).epsilon(1e-4));
}

TEST_CASE("reconstruct_surface closed form: vertical plane") {
    SurfaceCoefficients c;
    c.nu = 21;
    c.nv = 31;
    c.u0 = 0.0;
    c.du = 0.05;
    c.v0 = 0.0;
    c.dv = 0.04;
    c.a.assign(c.nu * c.nv, 0.0);
    c.b.assign(c.nu * c.nv, 0.0);
    c.c.assign(c.nu * c.nv, 1.0);
    c.l.assign(c.nu * c.nv, 0.0);
    c.m.assign(c.nu * c.nv, 0.0);
    const auto grid = reconstruct_surface(c, OrientedFrame{});
    for (std::size_t i = 0; i < c.nu; ++i)
        for (std::size_t j = 0; j < c.nv; ++j) {
            const HeisPoint p = grid.points[grid.idx(i, j)];
            CHECK(p.x == doctest::Approx(grid.u(i)).epsilon(1e-12));
            CHECK(std::abs(p.y) < 1e-12);
            CHECK(p.z == doctest::Approx(grid.v(j)).epsilon(1e-12));
        }
}

TEST_CASE("surface round trip on the cylinder is second order") {
    auto mismatch = [](std::size_t nu, std::size_t nv) {
        const auto grid = cylinder(nu, nv);
        const auto coef = coefficients(grid);
        const auto rec = reconstruct_surface(coef, OrientedFrame{});
        const auto back = coefficients(rec);
        double err = 0.0;
        for (std::size_t k = 0; k < coef.a.size(); ++k) {
            err = std::max(err, std::abs(back.a[k] - coef.a[k]));
            err = std::max(err, std::abs(back.b[k] - coef.b[k]));
            err = std::max(err, std::abs(back.c[k] - coef.c[k]));
            err = std::max(err, std::abs(back.l[k] - coef.l[k]));
            err = std::max(err, std::abs(back.m[k] - coef.m[k]));
        }
        return err;
    };
    const double e1 = mismatch(121, 31);
    const double e2 = mismatch(241, 61);
    const double h = kTwoPi / 120.0;
    CHECK(e1 <= 0.05 * h * h);
    CHECK(e1 / e2 >= 3.0);
}

TEST_CASE("path independence of the surface integration") {
    const auto coef = coefficients(cylinder(121, 31));
    const auto g1 = reconstruct_surface(coef, OrientedFrame{}, PathOrder::v_then_u);
    const auto g2 = reconstruct_surface(coef, OrientedFrame{}, PathOrder::u_then_v);
    double dev = 0.0;
    for (std::size_t k = 0; k < g1.points.size(); ++k) {
        dev = std::max(dev, std::abs(g1.points[k].x - g2.points[k].x));
        dev = std::max(dev, std::abs(g1.points[k].y - g2.points[k].y));
        dev = std::max(dev, std::abs(g1.points[k].z - g2.points[k].z));
    }
    const double h = kTwoPi / 120.0;
    CHECK(dev <= 1.0 * h * h);

    // violating c_u = 2b by 0.1 makes the two paths diverge
    auto broken = coef;
    for (std::size_t i = 0; i < broken.nu; ++i)
        for (std::size_t j = 0; j < broken.nv; ++j)
            broken.c[broken.idx(i, j)] += 0.1 * (broken.u0 + broken.du * static_cast<double>(i));
    CHECK_THROWS_AS(reconstruct_surface(broken, OrientedFrame{}), IntegrabilityViolated);
    const auto b1 = reconstruct_surface(broken, OrientedFrame{}, PathOrder::v_then_u, 1.0);
    const auto b2 = reconstruct_surface(broken, OrientedFrame{}, PathOrder::u_then_v, 1.0);
    double bdev = 0.0;
    for (std::size_t k = 0; k < b1.points.size(); ++k)
        bdev = std::max(bdev, std::abs(b1.points[k].z - b2.points[k].z));
    CHECK(bdev > 0.01);
}

TEST_CASE("gauge covariance under u -> -u") {
    auto flip = [](const SurfaceGrid& g) {
        SurfaceGrid out = g;
        out.u0 = -g.u(g.nu - 1);
        for (std::size_t i = 0; i < g.nu; ++i)
            for (std::size_t j = 0; j < g.nv; ++j) {
                out.points[out.idx(i, j)] = g.points[g.idx(g.nu - 1 - i, j)];
                if (g.has_fu()) {
                    const auto& w = g.fu[g.idx(g.nu - 1 - i, j)];
                    out.fu[out.idx(i, j)] = {-w[0], -w[1], -w[2]};
                }
                if (g.has_fv()) out.fv[out.idx(i, j)] = g.fv[g.idx(g.nu - 1 - i, j)];
            }
        return out;
    };

    for (const auto& grid : {cylinder(121, 31), flat_annulus(101, 41, 0.3)}) {
        const auto c0 = coefficients(grid);
        const auto c1 = coefficients(flip(grid));
        const auto i0 = invariants(grid, c0);
        const auto i1 = invariants(flip(grid), c1);
        for (std::size_t i = 0; i < grid.nu; i += 5)
            for (std::size_t j = 0; j < grid.nv; j += 5) {
                const std::size_t k0 = grid.idx(i, j);
                const std::size_t k1 = grid.idx(grid.nu - 1 - i, j);
                CHECK(c1.a[k1] == doctest::Approx(-c0.a[k0]).epsilon(1e-8));
                CHECK(c1.b[k1] == doctest::Approx(-c0.b[k0]).epsilon(1e-8));
                CHECK(c1.c[k1] == doctest::Approx(c0.c[k0]).epsilon(1e-8));
                if (std::abs(c0.l[k0]) > 1e-6)
                    CHECK(c1.l[k1] == doctest::Approx(-c0.l[k0]).epsilon(1e-6));
                CHECK(i1.alpha[k1] == doctest::Approx(-i0.alpha[k0]).epsilon(1e-8));
                // the metric tensor is preserved: components transform with the flip
                CHECK(i1.g11[k1] == doctest::Approx(i0.g11[k0]).epsilon(1e-10));
                CHECK(i1.g12[k1] == doctest::Approx(-i0.g12[k0]).epsilon(1e-8));
                CHECK(i1.g22[k1] == doctest::Approx(i0.g22[k0]).epsilon(1e-8));
            }
    }
}

TEST_CASE("metric equals the pullback of the adapted metric") {
    const auto ann = flat_annulus(101, 41, 0.3);
    const auto coef = coefficients(ann);
    const auto inv = invariants(ann, coef);
    for (std::size_t k = 0; k < ann.points.size(); ++k) {
        const HeisPoint base = ann.points[k];
        const FrameCoefficients fu =
            split_velocity({base, ann.fu[k][0], ann.fu[k][1], ann.fu[k][2]});
        const FrameCoefficients fv =
            split_velocity({base, ann.fv[k][0], ann.fv[k][1], ann.fv[k][2]});
        CHECK(std::abs(inv.g11[k] - levi_inner(fu, fu)) < 1e-10);
        CHECK(std::abs(inv.g12[k] - levi_inner(fu, fv)) < 1e-10);
        CHECK(std::abs(inv.g22[k] - levi_inner(fv, fv)) < 1e-10);
    }
}

TEST_CASE("coefficients are PSH(1) invariant") {
    auto rng = rng_with(41);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
    const auto grid = cylinder(61, 21);
    const auto c0 = coefficients(grid);
    for (int trial = 0; trial < 25; ++trial) {
        const RigidMotion g{HeisPoint{u(rng), u(rng), u(rng)}, ang(rng)};
        const auto c1 = coefficients(transform(g, grid));
        for (std::size_t k = 0; k < c0.a.size(); k += 5) {
            CHECK(std::abs(c1.a[k] - c0.a[k]) < 1e-8);
            CHECK(std::abs(c1.b[k] - c0.b[k]) < 1e-8);
            CHECK(std::abs(c1.c[k] - c0.c[k]) < 1e-8);
            CHECK(std::abs(c1.l[k] - c0.l[k]) < 1e-8);
            CHECK(std::abs(c1.m[k] - c0.m[k]) < 1e-8);
        }
    }
}

TEST_CASE("normal parametrization of the vertical plane") {
    const auto out = normal_parametrize(vertical_plane(41, 41));
    REQUIRE(out.nu >= 3);
    for (std::size_t i = 0; i < out.nu; ++i)
        for (std::size_t j = 0; j < out.nv; ++j) {
            const HeisPoint p = out.points[out.idx(i, j)];
            CHECK(std::abs(p.y) < 1e-12);
            // z depends only on v; x - u is constant per column (the residual
            // gauge freedom of normal coordinates)
            CHECK(p.z == doctest::Approx(out.points[out.idx(0, j)].z).epsilon(1e-10));
            CHECK(p.x - out.u(i) ==
                  doctest::Approx(out.points[out.idx(0, j)].x - out.u(0)).epsilon(1e-10));
        }
    const auto coef = coefficients(out);
    CHECK(max_abs(coef.a) < 1e-9);
    CHECK(max_abs(coef.b) < 1e-9);
    CHECK(max_abs(coef.l) < 1e-9);
    for (const double c : coef.c) CHECK(c == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("normal parametrization of a radial patch") {
    // z = 0 annulus patch sampled with exponential radius: |F_u| != 1 on
    // input, characteristic foliation is radial
    const auto patch = sample_grid(
        0.0, std::log(2.0), 61, 0.1, 0.4 * std::numbers::pi, 41,
        [](double u, double v) {
            return HeisPoint{std::exp(u) * std::cos(v), std::exp(u) * std::sin(v), 0.0};
        });
    const auto out = normal_parametrize(patch);
    REQUIRE(out.nu >= 5);
    REQUIRE(out.has_fu());
    for (std::size_t i = 0; i < out.nu; ++i)
        for (std::size_t j = 0; j < out.nv; ++j) {
            const std::size_t k = out.idx(i, j);
            const HeisPoint p = out.points[k];
            // unit horizontal tangent, radially aligned
            const double norm = std::hypot(out.fu[k][0], out.fu[k][1]);
            CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
            const double r = std::hypot(p.x, p.y);
            const double cross = (p.x / r) * out.fu[k][1] - (p.y / r) * out.fu[k][0];
            CHECK(std::abs(cross) < 2e-2);
        }
}

TEST_CASE("normal parametrization rejects singular grids") {
    const auto with_origin = sample_grid(-0.5, 0.5, 21, -0.5, 0.5, 21,
                                         [](double u, double v) { return HeisPoint{u, v, 0.0}; });
    CHECK_THROWS_AS(normal_parametrize(with_origin), SingularPointEncountered);
}
