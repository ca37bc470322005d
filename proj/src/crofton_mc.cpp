#include "heis/crofton_mc.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>

#include "heis/numerics.hpp"

namespace heis {

namespace {

constexpr double kDetRel = 1e-12;    // near-coplanar threshold
constexpr double kBaryEps = 1e-12;   // hits this close to an edge are delicate
constexpr int kMaxAttempts = 8;

struct Vec3 {
    double x, y, z;
};

Vec3 sub(const HeisPoint& a, const HeisPoint& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

// Moller-Trumbore against the infinite line B + s U. Returns 1 for a
// strict interior hit, 0 for a clear miss; sets `delicate` when the
// outcome depends on a measure-zero configuration.
int hit_triangle(const HeisPoint& B, const Vec3& U, const HeisPoint& v0, const HeisPoint& v1,
                 const HeisPoint& v2, bool& delicate) {
    const Vec3 e1 = sub(v1, v0);
    const Vec3 e2 = sub(v2, v0);
    const Vec3 h = cross(U, e2);
    const double det = dot(e1, h);
    const double det_scale = norm(U) * norm(cross(e1, e2));
    if (std::abs(det) <= kDetRel * det_scale) {
        delicate = true;
        return 0;
    }
    const double inv = 1.0 / det;
    const Vec3 sv = sub(B, v0);
    const double b1 = dot(sv, h) * inv;
    if (b1 < -kBaryEps || b1 > 1.0 + kBaryEps) return 0;
    const Vec3 q = cross(sv, e1);
    const double b2 = dot(U, q) * inv;
    if (b2 < -kBaryEps || b1 + b2 > 1.0 + kBaryEps) return 0;
    if (b1 > kBaryEps && b2 > kBaryEps && b1 + b2 < 1.0 - kBaryEps) return 1;
    delicate = true;
    return 0;
}

double mesh_radius(const TriMesh& m) {
    double r = 0.0;
    for (const auto& v : m.vertices) r = std::max(r, std::hypot(v.x, v.y));
    return r;
}

// squared distance from the origin to a 2D triangle
double dist2_origin_triangle(double x0, double y0, double x1, double y1, double x2, double y2) {
    auto seg = [](double ax, double ay, double bx, double by) {
        const double dx = bx - ax, dy = by - ay;
        const double len2 = dx * dx + dy * dy;
        double t = len2 > 0.0 ? -(ax * dx + ay * dy) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        const double px = ax + t * dx, py = ay + t * dy;
        return px * px + py * py;
    };
    const double d01 = (x1 - x0) * (y0) - (y1 - y0) * (x0);
    const double d12 = (x2 - x1) * (y1) - (y2 - y1) * (x1);
    const double d20 = (x0 - x2) * (y2) - (y0 - y2) * (x2);
    const bool inside = (d01 >= 0 && d12 >= 0 && d20 >= 0) || (d01 <= 0 && d12 <= 0 && d20 <= 0);
    if (inside) return 0.0;
    return std::min({seg(x0, y0, x1, y1), seg(x1, y1, x2, y2), seg(x2, y2, x0, y0)});
}

}  // namespace

HeisPoint line_base(const HorizontalLine& l) {
    return {l.p * std::cos(l.theta), l.p * std::sin(l.theta), l.t};
}

std::array<double, 3> line_direction(const HorizontalLine& l) {
    return {std::sin(l.theta), -std::cos(l.theta), l.p};
}

HeisPoint line_point(const HorizontalLine& l, double s) {
    const HeisPoint b = line_base(l);
    const auto u = line_direction(l);
    return {b.x + s * u[0], b.y + s * u[1], b.z + s * u[2]};
}

TriMesh make_tri_mesh(const SurfaceGrid& g) {
    g.check();
    TriMesh m;
    m.vertices = g.points;
    double scale = 0.0;
    for (const auto& p : g.points)
        scale = std::max(scale, std::max(std::abs(p.x), std::max(std::abs(p.y), std::abs(p.z))));
    const double area_eps = 1e-14 * std::max(1.0, scale * scale);
    auto push = [&](std::size_t i0, std::size_t i1, std::size_t i2) {
        const Vec3 e1 = sub(m.vertices[i1], m.vertices[i0]);
        const Vec3 e2 = sub(m.vertices[i2], m.vertices[i0]);
        if (0.5 * norm(cross(e1, e2)) < area_eps) return;
        m.triangles.push_back({i0, i1, i2});
    };
    for (std::size_t i = 0; i + 1 < g.nu; ++i)
        for (std::size_t j = 0; j + 1 < g.nv; ++j) {
            push(g.idx(i, j), g.idx(i + 1, j), g.idx(i + 1, j + 1));
            push(g.idx(i, j), g.idx(i + 1, j + 1), g.idx(i, j + 1));
        }
    return m;
}

int count_intersections(const HorizontalLine& l, const TriMesh& m) {
    const double r = mesh_radius(m);
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        const HorizontalLine probe{l.p + attempt * 1e-9 * r, l.theta, l.t};
        const HeisPoint B = line_base(probe);
        const auto ud = line_direction(probe);
        const Vec3 U{ud[0], ud[1], ud[2]};
        bool delicate = false;
        int count = 0;
        for (const auto& tri : m.triangles)
            count += hit_triangle(B, U, m.vertices[tri[0]], m.vertices[tri[1]],
                                  m.vertices[tri[2]], delicate);
        if (!delicate) return count;
    }
    // every perturbation stayed delicate; fall back to the strict count
    const HeisPoint B = line_base(l);
    const auto ud = line_direction(l);
    const Vec3 U{ud[0], ud[1], ud[2]};
    bool ignore = false;
    int count = 0;
    for (const auto& tri : m.triangles)
        count +=
            hit_triangle(B, U, m.vertices[tri[0]], m.vertices[tri[1]], m.vertices[tri[2]], ignore);
    return count;
}

double p_area(const SurfaceGrid& g) {
    const auto fol = foliation_field(g);
    double sum = 0.0;
    for (std::size_t i = 0; i < g.nu; ++i) {
        const double wu = (i == 0 || i + 1 == g.nu) ? 0.5 : 1.0;
        for (std::size_t j = 0; j < g.nv; ++j) {
            const double wv = (j == 0 || j + 1 == g.nv) ? 0.5 : 1.0;
            const std::size_t k = fol.idx(i, j);
            if (fol.singular[k]) continue;
            sum += wu * wv * levi_norm(split_velocity(fol.E[k]));
        }
    }
    return sum * g.du * g.dv;
}

double mesh_p_area(const TriMesh& m) {
    // 7-point degree-5 rule on the reference triangle
    static const double w[7] = {0.225,
                                0.13239415278850618, 0.13239415278850618, 0.13239415278850618,
                                0.12593918054482715, 0.12593918054482715, 0.12593918054482715};
    static const double l1[7] = {1.0 / 3.0, 0.05971587178976982, 0.47014206410511509,
                                 0.47014206410511509, 0.79742698535308732, 0.10128650732345634,
                                 0.10128650732345634};
    static const double l2[7] = {1.0 / 3.0, 0.47014206410511509, 0.05971587178976982,
                                 0.47014206410511509, 0.10128650732345634, 0.79742698535308732,
                                 0.10128650732345634};
    double total = 0.0;
    for (const auto& tri : m.triangles) {
        const HeisPoint& v0 = m.vertices[tri[0]];
        const HeisPoint& v1 = m.vertices[tri[1]];
        const HeisPoint& v2 = m.vertices[tri[2]];
        const Vec3 fr = sub(v1, v0);
        const Vec3 fs = sub(v2, v0);
        double acc = 0.0;
        for (int q = 0; q < 7; ++q) {
            const double a = l1[q], b = l2[q], c0 = 1.0 - a - b;
            const HeisPoint pos{c0 * v0.x + a * v1.x + b * v2.x,
                                c0 * v0.y + a * v1.y + b * v2.y,
                                c0 * v0.z + a * v1.z + b * v2.z};
            const double tr = fr.z + pos.x * fr.y - pos.y * fr.x;
            const double ts = fs.z + pos.x * fs.y - pos.y * fs.x;
            acc += w[q] * std::hypot(tr * fs.x - ts * fr.x, tr * fs.y - ts * fr.y);
        }
        total += 0.5 * acc;
    }
    return total;
}

double SamplingBox::volume() const {
    return (p_max - p_min) * (theta_max - theta_min) * (t_max - t_min);
}

SamplingBox sampling_box(const TriMesh& m) {
    if (m.triangles.empty()) throw EmptyMesh("sampling_box: mesh has no triangles");
    const double r = mesh_radius(m);
    double z_lo = m.vertices.empty() ? 0.0 : m.vertices[0].z;
    double z_hi = z_lo;
    for (const auto& v : m.vertices) {
        z_lo = std::min(z_lo, v.z);
        z_hi = std::max(z_hi, v.z);
    }
    SamplingBox box;
    box.p_min = -r;
    box.p_max = r;
    box.theta_min = 0.0;
    box.theta_max = 2.0 * std::numbers::pi;
    box.t_min = z_lo - r * r;
    box.t_max = z_hi + r * r;
    return box;
}

LineCaster::LineCaster(const TriMesh& m, std::size_t theta_bins, std::size_t p_bins)
    : mesh_(m), n_theta_(theta_bins), n_p_(p_bins) {
    if (n_theta_ == 0) {
        // keep the candidate store near O(nt^{3/2}) entries
        std::size_t b = 16;
        while (b * b < m.triangles.size() / 2 && b < 256) b *= 2;
        n_theta_ = b;
    }
    if (n_p_ == 0) n_p_ = std::max<std::size_t>(n_theta_ / 2, 8);
    r_xy_ = mesh_radius(m);
    p_lo_ = -r_xy_;
    p_hi_ = r_xy_;
    const std::size_t nt = m.triangles.size();

    std::vector<double> r2_min(nt), r2_max(nt), z_lo(nt), z_hi(nt);
    for (std::size_t t = 0; t < nt; ++t) {
        const auto& tri = m.triangles[t];
        const HeisPoint& a = m.vertices[tri[0]];
        const HeisPoint& b = m.vertices[tri[1]];
        const HeisPoint& c = m.vertices[tri[2]];
        z_lo[t] = std::min({a.z, b.z, c.z});
        z_hi[t] = std::max({a.z, b.z, c.z});
        r2_min[t] = dist2_origin_triangle(a.x, a.y, b.x, b.y, c.x, c.y);
        r2_max[t] = std::max({a.x * a.x + a.y * a.y, b.x * b.x + b.y * b.y,
                              c.x * c.x + c.y * c.y});
    }

    candidates_.assign(n_theta_, {});
    offsets_.assign(n_theta_, std::vector<std::uint32_t>(n_p_ + 1, 0));
    if (nt == 0 || r_xy_ == 0.0) return;
    const double dtheta = 2.0 * std::numbers::pi / static_cast<double>(n_theta_);
    const double dp = (p_hi_ - p_lo_) / static_cast<double>(n_p_);
    // interval safety: interior extremum of r cos(theta - phi) over a bin,
    // plus perturbation slack
    const double margin = r_xy_ * (1.0 - std::cos(0.5 * dtheta)) + 1e-7 * r_xy_;
    const double zpad = 1e-7 * (1.0 + r_xy_ * r_xy_);

    std::vector<std::pair<int, int>> bin_range(nt);
    for (std::size_t tb = 0; tb < n_theta_; ++tb) {
        auto& offs = offsets_[tb];
        const double th0 = tb * dtheta, th1 = th0 + dtheta;
        for (std::size_t t = 0; t < nt; ++t) {
            const auto& tri = m.triangles[t];
            double lo = 1e300, hi = -1e300;
            for (const double th : {th0, th1}) {
                const double ct = std::cos(th), st = std::sin(th);
                for (int v = 0; v < 3; ++v) {
                    const HeisPoint& pt = mesh_.vertices[tri[v]];
                    const double proj = pt.x * ct + pt.y * st;
                    lo = std::min(lo, proj);
                    hi = std::max(hi, proj);
                }
            }
            const auto b0 = static_cast<int>(std::floor((lo - margin - p_lo_) / dp));
            const auto b1 = static_cast<int>(std::floor((hi + margin - p_lo_) / dp));
            bin_range[t] = {std::max(0, b0), std::min(static_cast<int>(n_p_) - 1, b1)};
            for (int b = bin_range[t].first; b <= bin_range[t].second; ++b) ++offs[b + 1];
        }
        for (std::size_t b = 0; b < n_p_; ++b) offs[b + 1] += offs[b];
        candidates_[tb].resize(offs[n_p_]);
        std::vector<std::uint32_t> cursor(offs.begin(), offs.end() - 1);
        for (std::size_t t = 0; t < nt; ++t)
            for (int b = bin_range[t].first; b <= bin_range[t].second; ++b)
                candidates_[tb][cursor[b]++] =
                    Candidate{static_cast<float>(r2_min[t] * (1.0 - 1e-6)),
                              static_cast<float>(r2_max[t] * (1.0 + 1e-6) + 1e-30),
                              static_cast<float>(z_lo[t] - zpad),
                              static_cast<float>(z_hi[t] + zpad),
                              static_cast<std::uint32_t>(t)};
    }
}

int LineCaster::count_attempt(const HorizontalLine& l, bool& delicate) const {
    if (r_xy_ == 0.0 || mesh_.triangles.empty()) return 0;
    const double two_pi = 2.0 * std::numbers::pi;
    double th = std::fmod(l.theta, two_pi);
    if (th < 0.0) th += two_pi;
    if (l.p < p_lo_ || l.p > p_hi_) return 0;  // no hit can satisfy p^2 <= r^2
    const auto tb = std::min(n_theta_ - 1,
                             static_cast<std::size_t>(th / two_pi * static_cast<double>(n_theta_)));
    const double dp = (p_hi_ - p_lo_) / static_cast<double>(n_p_);
    const auto pb = std::min(n_p_ - 1, static_cast<std::size_t>((l.p - p_lo_) / dp));

    const HeisPoint B = line_base(l);
    const auto ud = line_direction(l);
    const Vec3 U{ud[0], ud[1], ud[2]};
    const float p2 = static_cast<float>(l.p * l.p);
    // slack folded into squared comparisons; the candidate bounds are
    // already conservatively padded at build time
    const float grow = 1.0f + 1e-5f;
    const float shrink = 1.0f - 1e-5f;
    const float tf = static_cast<float>(l.t);

    int count = 0;
    const Candidate* cand = candidates_[tb].data();
    const std::uint32_t clo = offsets_[tb][pb], chi = offsets_[tb][pb + 1];
    for (std::uint32_t c = clo; c < chi; ++c) {
        const Candidate& cd = cand[c];
        // radial bound: hit radius r satisfies r^2 = p^2 + s^2, so
        // s^2 in [r2_min - p^2, r2_max - p^2]
        const float s2_hi = cd.r2_max - p2;
        if (s2_hi < 0.0f) continue;
        // t = z - s p: the reachable offsets z - t = s p form the two bands
        // +-|p| [s_lo, s_hi]; compare squares to avoid square roots
        const float qs2_hi = p2 * s2_hi * grow + 1e-20f;
        const float qs2_lo = p2 * std::max(0.0f, cd.r2_min - p2) * shrink;
        const float A = cd.z_lo - tf;
        const float B2 = cd.z_hi - tf;
        const bool pos = (B2 >= 0.0f && B2 * B2 >= qs2_lo) && (A <= 0.0f || A * A <= qs2_hi);
        const bool neg = (A <= 0.0f && A * A >= qs2_lo) && (B2 >= 0.0f || B2 * B2 <= qs2_hi);
        if (!pos && !neg) continue;
        const auto& tri = mesh_.triangles[cd.tri];
        count += hit_triangle(B, U, mesh_.vertices[tri[0]], mesh_.vertices[tri[1]],
                              mesh_.vertices[tri[2]], delicate);
    }
    return count;
}

int LineCaster::count(const HorizontalLine& l) const {
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        const HorizontalLine probe{l.p + attempt * 1e-9 * r_xy_, l.theta, l.t};
        bool delicate = false;
        const int c = count_attempt(probe, delicate);
        if (!delicate) return c;
    }
    bool ignore = false;
    return count_attempt(l, ignore);
}

CroftonEstimate crofton_estimate(const TriMesh& m, std::uint64_t n, std::uint64_t seed,
                                 const SamplingBox* box_override, unsigned workers) {
    if (n < 1) throw DomainError("crofton_estimate: need at least one sample");
    const SamplingBox box = box_override ? *box_override : sampling_box(m);
    const LineCaster caster(m);
    const CounterRng rng(seed);

    auto sample_count = [&](std::uint64_t i) {
        HorizontalLine l;
        l.p = box.p_min + (box.p_max - box.p_min) * rng.uniform(i, 0);
        l.theta = box.theta_min + (box.theta_max - box.theta_min) * rng.uniform(i, 1);
        l.t = box.t_min + (box.t_max - box.t_min) * rng.uniform(i, 2);
        return static_cast<std::int64_t>(caster.count(l));
    };

    std::int64_t sum = 0, sum_sq = 0;
    if (workers <= 1) {
        for (std::uint64_t i = 0; i < n; ++i) {
            const std::int64_t c = sample_count(i);
            sum += c;
            sum_sq += c * c;
        }
    } else {
        // fixed blocks; integer partial sums commute exactly, so the result
        // is identical for any worker count
        const std::uint64_t block = 65536;
        const std::uint64_t n_blocks = (n + block - 1) / block;
        std::vector<std::future<std::pair<std::int64_t, std::int64_t>>> futs;
        std::uint64_t next = 0;
        auto run_block = [&](std::uint64_t b) {
            std::int64_t s = 0, s2 = 0;
            const std::uint64_t lo = b * block, hi = std::min(n, lo + block);
            for (std::uint64_t i = lo; i < hi; ++i) {
                const std::int64_t c = sample_count(i);
                s += c;
                s2 += c * c;
            }
            return std::make_pair(s, s2);
        };
        while (next < n_blocks) {
            futs.clear();
            const std::uint64_t batch = std::min<std::uint64_t>(workers, n_blocks - next);
            for (std::uint64_t w = 0; w < batch; ++w)
                futs.push_back(std::async(std::launch::async, run_block, next + w));
            for (auto& f : futs) {
                const auto [s, s2] = f.get();
                sum += s;
                sum_sq += s2;
            }
            next += batch;
        }
    }

    const double vol = box.volume();
    const double mean = static_cast<double>(sum) / static_cast<double>(n);
    CroftonEstimate est;
    est.estimate = vol * mean;
    est.n_samples = n;
    est.box = box;
    est.seed = seed;
    if (n > 1) {
        const double var =
            (static_cast<double>(sum_sq) - static_cast<double>(sum) * mean) /
            static_cast<double>(n - 1);
        est.std_error = vol * std::sqrt(std::max(0.0, var) / static_cast<double>(n));
    }
    return est;
}

}  // namespace heis
