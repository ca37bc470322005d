#ifndef HEIS_SURFACE_LAB_HPP
#define HEIS_SURFACE_LAB_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "heis/rigid_motion.hpp"

// Surfaces in H1 sampled over rectangular (u,v) grids: first/second-kind
// coefficients of a normal parametrization, integrability residuals,
// invariants (alpha, l, induced metric, Gaussian curvature) and surface
// reconstruction from coefficients.

namespace heis {

struct SurfaceGrid {
    double u0 = 0.0, du = 0.0;
    std::size_t nu = 0;
    double v0 = 0.0, dv = 0.0;
    std::size_t nv = 0;
    std::vector<HeisPoint> points;                // row-major, index = i*nv + j
    std::vector<std::array<double, 3>> fu, fv;    // optional analytic partials

    std::size_t idx(std::size_t i, std::size_t j) const { return i * nv + j; }
    double u(std::size_t i) const { return u0 + du * static_cast<double>(i); }
    double v(std::size_t j) const { return v0 + dv * static_cast<double>(j); }
    bool has_fu() const { return !fu.empty(); }
    bool has_fv() const { return !fv.empty(); }
    void check() const;  // nu, nv >= 3, finite points, matching array sizes
};

struct SurfaceCoefficients {
    std::size_t nu = 0, nv = 0;
    double u0 = 0.0, du = 0.0, v0 = 0.0, dv = 0.0;
    std::vector<double> a, b, c, l, m;

    std::size_t idx(std::size_t i, std::size_t j) const { return i * nv + j; }
};

// Nodewise alpha = b/c, p-mean curvature l, the induced metric
// [1, a; a, a^2+b^2+c^2] in the (du,dv) basis, and the Gaussian curvature
// of g_Theta restricted to the surface. Nodes with |c| below the
// near-singular threshold are masked and carry NaN.
struct SurfaceInvariants {
    std::size_t nu = 0, nv = 0;
    std::vector<double> alpha, pmean;
    std::vector<double> g11, g12, g22;
    std::vector<double> gauss;
    std::vector<std::uint8_t> masked;

    std::size_t idx(std::size_t i, std::size_t j) const { return i * nv + j; }
};

// Theta restricted to the chart (theta_u = Theta(F_u), theta_v = Theta(F_v))
// and the characteristic field E = theta_u F_v - theta_v F_u. Nodes where
// both components vanish (tangent plane = contact plane) are masked.
struct FoliationField {
    std::size_t nu = 0, nv = 0;
    std::vector<double> theta_u, theta_v;
    std::vector<TangentVector> E;
    std::vector<std::uint8_t> singular;
    double scale = 0.0;  // reference magnitude used by the singular mask

    std::size_t idx(std::size_t i, std::size_t j) const { return i * nv + j; }
};

FoliationField foliation_field(const SurfaceGrid& g);

struct NormalTolerances {
    double unit = 1e-6;        // | |F_u| - 1 |
    double horizontal = 1e-6;  // |Theta(F_u)| / (1 + |F_u|)
    double parallel = 1e-6;    // normalized cross of F_u and E projections
};

// First-kind (a, b, c) and second-kind (l, m) coefficients of a normal
// parametrization. l, m are computed from the differenced X = F_u field.
// Throws NotNormalParametrization naming the worst offending node.
SurfaceCoefficients coefficients(const SurfaceGrid& g, const NormalTolerances& tol = {});

// Trace streamlines of E/|E| from the v-grid line through the grid center
// and resample the surface so that |F_u| = 1 along the foliation. The
// traced unit tangent is attached to the output as an analytic F_u.
SurfaceGrid normal_parametrize(const SurfaceGrid& g);

// Max nodewise residual of a_u = bl, b_u = -al + m, c_u = 2b, l_v = m_u.
std::vector<double> integrability_residual(const SurfaceCoefficients& c);

// Max nodewise residual of the p-minimal conditions a_u = 0, b_uu = 0,
// c_u = 2b, m = b_u. (p-minimality itself additionally needs l = 0.)
std::vector<double> pminimal_residual(const SurfaceCoefficients& c);

SurfaceInvariants invariants(const SurfaceGrid& g, const SurfaceCoefficients& c);

// Nodewise residual of the surface integrability condition tying e_Sigma(l)
// to alpha, its e_1-derivatives, K and l. Directional derivatives are
// realized as e_1 = d/du and e_Sigma = (d/dv - a d/du) / (c sqrt(1+alpha^2)).
std::vector<double> surface_integrability_residual(const SurfaceInvariants& inv,
                                                   const SurfaceCoefficients& c);

enum class PathOrder { v_then_u, u_then_v };

inline constexpr double kIntegrabilityTol = 1e-6;

// Integrate dF = F*phi from the Darboux derivative pattern
//   omega^1 = du + a dv, omega^2 = b dv, omega^3 = c dv, omega_1^2 = l du + m dv,
// first along v at u = u0 and then along u for each v (RK4 + retraction,
// midpoint coefficient averaging). The integrated frame X is attached to
// the output as an analytic F_u. Throws IntegrabilityViolated when the
// input residual exceeds kIntegrabilityTol.
SurfaceGrid reconstruct_surface(const SurfaceCoefficients& c, const OrientedFrame& f0,
                                PathOrder order = PathOrder::v_then_u,
                                double tol_int = kIntegrabilityTol);

// Apply a rigid motion to every point (and partials, if present).
SurfaceGrid transform(const RigidMotion& g, const SurfaceGrid& grid);

}  // namespace heis

#endif
