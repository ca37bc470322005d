#ifndef HEIS_CURVE_LAB_HPP
#define HEIS_CURVE_LAB_HPP

#include <array>
#include <cstddef>
#include <vector>

#include "heis/rigid_motion.hpp"

// Curve invariants (p-curvature k, contact normality tau), horizontal
// arclength, reconstruction by integrating the Darboux-derivative ODE,
// closed-form geodesics and congruence detection.

namespace heis {

// Sampled curve on a uniform parameter grid, optionally with analytic
// velocities per node.
struct CurveTrace {
    std::vector<double> params;
    std::vector<HeisPoint> points;
    std::vector<std::array<double, 3>> velocities;  // empty, or one per node

    bool has_velocities() const { return !velocities.empty(); }
    double spacing() const;
    void check() const;  // n >= 2, uniform spacing, finite points
};

// s |-> (k(s), tau(s)) on a uniform horizontal-arclength grid.
struct InvariantSignature {
    std::vector<double> arc;
    std::vector<double> k;
    std::vector<double> tau;

    double spacing() const;
};

struct FrameField {
    std::vector<double> arc;
    std::vector<OrientedFrame> frames;
};

// Closed-form geodesic parameters. For c3 == 0 the motion is linear and
// (a1, a2) is the xy-velocity; otherwise (a1, a2) are the circular
// amplitudes with a1^2 + a2^2 > 0.
struct GeodesicParams {
    double c3 = 0.0;
    double a1 = 0.0;
    double a2 = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
    double d3 = 0.0;
};

// Minimum admissible horizontal speed: below this, arclength
// reparametrization is numerically meaningless.
inline constexpr double kHorizontalRegularityEps = 1e-8;

// |gamma'_xi| = sqrt(x'^2 + y'^2) per node, from analytic velocities when
// present, else finite differences.
std::vector<double> horizontal_speed(const CurveTrace& c);

CurveTrace reparametrize_arclength(const CurveTrace& c, std::size_t n_out);

// k, tau and the cumulative arclength evaluated at the input parameter
// nodes (no resampling). The projection identity "k equals the signed
// curvature of the xy-projection" holds nodewise on this output.
struct PointwiseInvariants {
    std::vector<double> s;
    std::vector<double> k;
    std::vector<double> tau;
};
PointwiseInvariants invariants_pointwise(const CurveTrace& c);

// Pointwise invariants resampled onto a uniform arclength grid.
InvariantSignature invariants(const CurveTrace& c);

// Darboux derivative of the lift: (w1, w2, w3, w12) = (1, 0, tau, k).
MaurerCartanValue darboux_matrix(double k, double tau);

struct Reconstruction {
    CurveTrace curve;
    FrameField frames;
};

// Integrate dF = F*phi(s) with classical RK4 on the 4x4 matrix, retracting
// onto PSH(1) after every step. Interior stages take signature values by
// midpoint averaging, which makes the global error Theta(h^2) and
// signature-sampling limited.
Reconstruction reconstruct(const InvariantSignature& sig, const OrientedFrame& f0);

CurveTrace geodesic(const GeodesicParams& g, const std::vector<double>& t_grid);

struct CongruenceResult {
    RigidMotion motion;
    double residual;
};

// Align c1 to c2 by the motion carrying the first frame of c1 to the first
// frame of c2; residual is the max over s of the point mismatch and of
// |A(s) - 2| where A(s) = <X1(s), X2(s)> + <Y1(s), Y2(s)> after alignment.
CongruenceResult congruence(const CurveTrace& c1, const CurveTrace& c2);

// Max finite-difference residual of X' = kY, Y' = -kX - T and
// gamma' = X + tau T over interior nodes (second-order central).
double frame_ode_residual(const FrameField& ff, const InvariantSignature& sig);

// Apply a rigid motion to every point (and velocity, if present).
CurveTrace transform(const RigidMotion& g, const CurveTrace& c);

}  // namespace heis

#endif
