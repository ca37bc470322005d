#ifndef HEIS_CROFTON_MC_HPP
#define HEIS_CROFTON_MC_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "heis/surface_lab.hpp"

// Oriented horizontal lines, line-mesh intersection counting, p-area and
// Monte Carlo verification of the Crofton identity
//   integral of n(line ^ Sigma) dL = 4 * p-area(Sigma),  dL = dp dtheta dt.

namespace heis {

// Coded by (p, theta, t): base B = (p cos theta, p sin theta, t) and
// direction U = (sin theta, -cos theta, p); U is horizontal with unit
// contact-plane norm along the whole line.
struct HorizontalLine {
    double p = 0.0;
    double theta = 0.0;
    double t = 0.0;
};

HeisPoint line_base(const HorizontalLine& l);
std::array<double, 3> line_direction(const HorizontalLine& l);
HeisPoint line_point(const HorizontalLine& l, double s);

struct TriMesh {
    std::vector<HeisPoint> vertices;
    std::vector<std::array<std::size_t, 3>> triangles;
};

// Two triangles per grid cell with the fixed diagonal (i,j)-(i+1,j+1).
// Degenerate cells (Euclidean area below 1e-14 * mesh scale) are dropped.
TriMesh make_tri_mesh(const SurfaceGrid& g);

// Number of transversal line-mesh intersection points. Borderline hits
// (near-coplanar triangles, hits within 1e-12 of a triangle edge) restart
// the count with p perturbed by 1e-9 * R_xy, so shared edges never count
// twice. Deterministic.
int count_intersections(const HorizontalLine& l, const TriMesh& m);

// p-area of the sampled surface: trapezoid quadrature of the Levi norm of
// the characteristic field E over the (u,v) grid, singular nodes masked.
double p_area(const SurfaceGrid& g);

// p-area of a triangle mesh: per-triangle Gauss quadrature of |E| in each
// triangle's own affine chart.
double mesh_p_area(const TriMesh& m);

struct SamplingBox {
    double p_min = 0.0, p_max = 0.0;
    double theta_min = 0.0, theta_max = 0.0;
    double t_min = 0.0, t_max = 0.0;
    double volume() const;
};

// Smallest product box guaranteed to contain every line meeting the mesh:
// any hit satisfies p^2 + s^2 = x^2 + y^2 <= R_xy^2, so |s p| <= R_xy^2
// and t = z - s p stays within [z_min - R_xy^2, z_max + R_xy^2].
SamplingBox sampling_box(const TriMesh& m);

// theta-binned p-interval index over the triangles plus a radial/height
// prefilter; candidate sets are conservative, so counts match
// count_intersections exactly. Bin counts of 0 scale with the mesh size.
class LineCaster {
public:
    explicit LineCaster(const TriMesh& m, std::size_t theta_bins = 0, std::size_t p_bins = 0);
    int count(const HorizontalLine& l) const;

private:
    int count_attempt(const HorizontalLine& l, bool& delicate) const;

    // candidate record with conservatively rounded bounds, packed
    // contiguously per (theta bin, p bin) bucket for sequential scanning
    struct Candidate {
        float r2_min, r2_max;  // squared radial extent of the projection
        float z_lo, z_hi;
        std::uint32_t tri;
    };

    const TriMesh& mesh_;
    std::size_t n_theta_, n_p_;
    double p_lo_ = 0.0, p_hi_ = 0.0;
    double r_xy_ = 0.0;
    std::vector<std::vector<Candidate>> candidates_;   // one array per theta bin
    std::vector<std::vector<std::uint32_t>> offsets_;  // p-bin offsets per theta bin
};

struct CroftonEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t n_samples = 0;
    SamplingBox box{};
    std::uint64_t seed = 0;
};

// n i.i.d. uniform samples of (p, theta, t) in the box; estimate is
// box volume times the mean intersection count. Counts are integers, so
// the result is bit-identical for any worker count.
CroftonEstimate crofton_estimate(const TriMesh& m, std::uint64_t n, std::uint64_t seed,
                                 const SamplingBox* box_override = nullptr,
                                 unsigned workers = 1);

}  // namespace heis

#endif
