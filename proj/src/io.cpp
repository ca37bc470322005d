#include "heis/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace heis::io {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (const char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s, std::size_t lineno) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(lineno) + ": bad number '" + s + "'");
    }
}

std::vector<std::vector<double>> read_csv_table(std::istream& is, const std::string& header,
                                                std::size_t min_cols, std::size_t max_cols) {
    std::string line;
    if (!std::getline(is, line)) throw ParseError("empty file, expected header '" + header + "'");
    // drop a UTF-8 BOM if present
    if (line.size() >= 3 && line[0] == '\xEF') line = line.substr(3);
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    const auto cols = split_csv_line(line);
    const auto want = split_csv_line(header);
    for (std::size_t i = 0; i < std::min(cols.size(), want.size()); ++i)
        if (cols[i] != want[i])
            throw ParseError("bad header: expected '" + header + "', got '" + line + "'");
    if (cols.size() < min_cols || cols.size() > max_cols)
        throw ParseError("bad header column count in '" + line + "'");

    std::vector<std::vector<double>> rows;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != cols.size())
            throw ParseError("line " + std::to_string(lineno) + ": expected " +
                             std::to_string(cols.size()) + " fields");
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) row.push_back(parse_double(f, lineno));
        rows.push_back(std::move(row));
    }
    return rows;
}

json parse_json(std::istream& is) {
    try {
        return json::parse(is);
    } catch (const json::exception& e) {
        throw ParseError(std::string("JSON parse error: ") + e.what());
    }
}

}  // namespace

void write_curve_csv(std::ostream& os, const CurveTrace& c) {
    const bool vel = c.has_velocities();
    os << (vel ? "t,x,y,z,vx,vy,vz\n" : "t,x,y,z\n");
    for (std::size_t i = 0; i < c.points.size(); ++i) {
        os << format_double(c.params[i]) << ',' << format_double(c.points[i].x) << ','
           << format_double(c.points[i].y) << ',' << format_double(c.points[i].z);
        if (vel)
            os << ',' << format_double(c.velocities[i][0]) << ','
               << format_double(c.velocities[i][1]) << ',' << format_double(c.velocities[i][2]);
        os << '\n';
    }
}

CurveTrace read_curve_csv(std::istream& is) {
    const auto rows = read_csv_table(is, "t,x,y,z,vx,vy,vz", 4, 7);
    if (rows.size() < 2) throw ParseError("curve CSV: need at least 2 rows");
    CurveTrace c;
    const bool vel = rows[0].size() == 7;
    if (!vel && rows[0].size() != 4) throw ParseError("curve CSV: need 4 or 7 columns");
    for (const auto& r : rows) {
        c.params.push_back(r[0]);
        c.points.push_back({r[1], r[2], r[3]});
        if (vel) c.velocities.push_back({r[4], r[5], r[6]});
    }
    c.check();
    return c;
}

void write_signature_csv(std::ostream& os, const InvariantSignature& sig) {
    os << "s,k,tau\n";
    for (std::size_t i = 0; i < sig.arc.size(); ++i)
        os << format_double(sig.arc[i]) << ',' << format_double(sig.k[i]) << ','
           << format_double(sig.tau[i]) << '\n';
}

InvariantSignature read_signature_csv(std::istream& is) {
    const auto rows = read_csv_table(is, "s,k,tau", 3, 3);
    if (rows.size() < 2) throw ParseError("signature CSV: need at least 2 rows");
    InvariantSignature sig;
    for (const auto& r : rows) {
        sig.arc.push_back(r[0]);
        sig.k.push_back(r[1]);
        sig.tau.push_back(r[2]);
    }
    return sig;
}

void write_frame_field_json(std::ostream& os, const FrameField& ff) {
    json arr = json::array();
    for (std::size_t i = 0; i < ff.frames.size(); ++i) {
        const OrientedFrame& f = ff.frames[i];
        arr.push_back(json{{"s", ff.arc[i]},
                           {"p", {f.base.x, f.base.y, f.base.z}},
                           {"X", {f.X.c1, f.X.c2}},
                           {"angle", std::atan2(f.X.c2, f.X.c1)}});
    }
    os << arr.dump(1) << '\n';
}

FrameField read_frame_field_json(std::istream& is) {
    const json arr = parse_json(is);
    if (!arr.is_array()) throw ParseError("frame field JSON: expected an array");
    FrameField ff;
    try {
        for (const auto& e : arr) {
            ff.arc.push_back(e.at("s").get<double>());
            OrientedFrame f;
            f.base = {e.at("p").at(0).get<double>(), e.at("p").at(1).get<double>(),
                      e.at("p").at(2).get<double>()};
            f.X = {e.at("X").at(0).get<double>(), e.at("X").at(1).get<double>(), 0.0};
            f.Y = {-f.X.c2, f.X.c1, 0.0};
            ff.frames.push_back(f);
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("frame field JSON: ") + e.what());
    }
    return ff;
}

void write_motion_json(std::ostream& os, const RigidMotion& g) {
    const json j{{"p", {g.translation.x, g.translation.y, g.translation.z}}, {"angle", g.angle}};
    os << j.dump() << '\n';
}

RigidMotion read_motion_json(std::istream& is) {
    const json j = parse_json(is);
    try {
        return {HeisPoint{j.at("p").at(0).get<double>(), j.at("p").at(1).get<double>(),
                          j.at("p").at(2).get<double>()},
                j.at("angle").get<double>()};
    } catch (const json::exception& e) {
        throw ParseError(std::string("motion JSON: ") + e.what());
    }
}

void write_grid_json(std::ostream& os, const SurfaceGrid& g) {
    json j{{"u0", g.u0}, {"du", g.du}, {"nu", g.nu},
           {"v0", g.v0}, {"dv", g.dv}, {"nv", g.nv}};
    json pts = json::array();
    for (const auto& p : g.points) {
        pts.push_back(p.x);
        pts.push_back(p.y);
        pts.push_back(p.z);
    }
    j["points"] = std::move(pts);
    auto dump_field = [](const std::vector<std::array<double, 3>>& f) {
        json arr = json::array();
        for (const auto& w : f) {
            arr.push_back(w[0]);
            arr.push_back(w[1]);
            arr.push_back(w[2]);
        }
        return arr;
    };
    if (g.has_fu()) j["fu"] = dump_field(g.fu);
    if (g.has_fv()) j["fv"] = dump_field(g.fv);
    os << j.dump() << '\n';
}

SurfaceGrid read_grid_json(std::istream& is) {
    const json j = parse_json(is);
    SurfaceGrid g;
    try {
        g.u0 = j.at("u0").get<double>();
        g.du = j.at("du").get<double>();
        g.nu = j.at("nu").get<std::size_t>();
        g.v0 = j.at("v0").get<double>();
        g.dv = j.at("dv").get<double>();
        g.nv = j.at("nv").get<std::size_t>();
        const auto& pts = j.at("points");
        if (pts.size() != 3 * g.nu * g.nv)
            throw ParseError("grid JSON: points array has wrong length");
        for (std::size_t k = 0; k < g.nu * g.nv; ++k)
            g.points.push_back({pts.at(3 * k).get<double>(), pts.at(3 * k + 1).get<double>(),
                                pts.at(3 * k + 2).get<double>()});
        auto load_field = [&](const char* name, std::vector<std::array<double, 3>>& f) {
            if (!j.contains(name)) return;
            const auto& arr = j.at(name);
            if (arr.size() != 3 * g.nu * g.nv)
                throw ParseError(std::string("grid JSON: ") + name + " array has wrong length");
            for (std::size_t k = 0; k < g.nu * g.nv; ++k)
                f.push_back({arr.at(3 * k).get<double>(), arr.at(3 * k + 1).get<double>(),
                             arr.at(3 * k + 2).get<double>()});
        };
        load_field("fu", g.fu);
        load_field("fv", g.fv);
    } catch (const json::exception& e) {
        throw ParseError(std::string("grid JSON: ") + e.what());
    }
    g.check();
    return g;
}

void write_coefficients_csv(std::ostream& os, const SurfaceCoefficients& c) {
    os << "i,j,u,v,a,b,c,l,m\n";
    for (std::size_t i = 0; i < c.nu; ++i)
        for (std::size_t j = 0; j < c.nv; ++j) {
            const std::size_t k = c.idx(i, j);
            os << i << ',' << j << ',' << format_double(c.u0 + c.du * static_cast<double>(i))
               << ',' << format_double(c.v0 + c.dv * static_cast<double>(j)) << ','
               << format_double(c.a[k]) << ',' << format_double(c.b[k]) << ','
               << format_double(c.c[k]) << ',' << format_double(c.l[k]) << ','
               << format_double(c.m[k]) << '\n';
        }
}

SurfaceCoefficients read_coefficients_csv(std::istream& is) {
    const auto rows = read_csv_table(is, "i,j,u,v,a,b,c,l,m", 9, 9);
    if (rows.empty()) throw ParseError("coefficients CSV: no rows");
    std::size_t nu = 0, nv = 0;
    for (const auto& r : rows) {
        nu = std::max(nu, static_cast<std::size_t>(r[0]) + 1);
        nv = std::max(nv, static_cast<std::size_t>(r[1]) + 1);
    }
    if (rows.size() != nu * nv) throw ParseError("coefficients CSV: grid is not complete");
    SurfaceCoefficients c;
    c.nu = nu;
    c.nv = nv;
    c.a.resize(nu * nv);
    c.b.resize(nu * nv);
    c.c.resize(nu * nv);
    c.l.resize(nu * nv);
    c.m.resize(nu * nv);
    double u_first = 0, u_second = 0, v_first = 0, v_second = 0;
    for (const auto& r : rows) {
        const auto i = static_cast<std::size_t>(r[0]);
        const auto j = static_cast<std::size_t>(r[1]);
        const std::size_t k = c.idx(i, j);
        if (i == 0 && j == 0) { u_first = r[2]; v_first = r[3]; }
        if (i == 1 && j == 0) u_second = r[2];
        if (i == 0 && j == 1) v_second = r[3];
        c.a[k] = r[4];
        c.b[k] = r[5];
        c.c[k] = r[6];
        c.l[k] = r[7];
        c.m[k] = r[8];
    }
    c.u0 = u_first;
    c.v0 = v_first;
    c.du = (nu > 1) ? u_second - u_first : 1.0;
    c.dv = (nv > 1) ? v_second - v_first : 1.0;
    return c;
}

TriMesh read_obj(std::istream& is) {
    TriMesh m;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "v") {
            double x, y, z;
            if (!(ls >> x >> y >> z))
                throw ParseError("OBJ line " + std::to_string(lineno) + ": bad vertex");
            m.vertices.push_back({x, y, z});
        } else if (tag == "f") {
            std::vector<std::size_t> ids;
            std::string fld;
            while (ls >> fld) {
                // accept v, v/vt, v//vn forms; only the vertex index matters
                const std::size_t slash = fld.find('/');
                const std::string head = (slash == std::string::npos) ? fld : fld.substr(0, slash);
                try {
                    const long v = std::stol(head);
                    const long n = static_cast<long>(m.vertices.size());
                    const long resolved = v > 0 ? v - 1 : n + v;
                    if (resolved < 0 || resolved >= n) throw std::out_of_range(head);
                    ids.push_back(static_cast<std::size_t>(resolved));
                } catch (const std::exception&) {
                    throw ParseError("OBJ line " + std::to_string(lineno) + ": bad face index '" +
                                     fld + "'");
                }
            }
            if (ids.size() != 3)
                throw ParseError("OBJ line " + std::to_string(lineno) +
                                 ": only triangular faces are supported");
            m.triangles.push_back({ids[0], ids[1], ids[2]});
        }
    }
    if (m.triangles.empty()) throw ParseError("OBJ: no triangular faces found");
    return m;
}

void write_estimate_json(std::ostream& os, const CroftonEstimate& e, double p_area_value) {
    const json j{{"estimate", e.estimate},
                 {"std_error", e.std_error},
                 {"n_samples", e.n_samples},
                 {"box",
                  {{"p", {e.box.p_min, e.box.p_max}},
                   {"theta", {e.box.theta_min, e.box.theta_max}},
                   {"t", {e.box.t_min, e.box.t_max}}}},
                 {"p_area", p_area_value},
                 {"ratio", p_area_value != 0.0 ? e.estimate / (4.0 * p_area_value) : 0.0},
                 {"seed", e.seed}};
    os << j.dump(1) << '\n';
}

std::string slurp_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ParseError("cannot open file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void spit_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ParseError("cannot write file: " + path);
    f << content;
    if (!f) throw ParseError("write failed: " + path);
}

}  // namespace heis::io
