#ifndef HEIS_IO_HPP
#define HEIS_IO_HPP

#include <iosfwd>
#include <string>

#include "heis/crofton_mc.hpp"
#include "heis/curve_lab.hpp"
#include "heis/surface_lab.hpp"

// File formats. CSV uses '.' decimals, no locale, floats printed with 17
// significant digits so values round-trip bit-faithfully.

namespace heis::io {

std::string format_double(double v);

// curve CSV: header t,x,y,z[,vx,vy,vz]
void write_curve_csv(std::ostream& os, const CurveTrace& c);
CurveTrace read_curve_csv(std::istream& is);

// signature CSV: header s,k,tau
void write_signature_csv(std::ostream& os, const InvariantSignature& sig);
InvariantSignature read_signature_csv(std::istream& is);

// frame-field JSON: list of {s, p:[x,y,z], X:[c1,c2], angle}
void write_frame_field_json(std::ostream& os, const FrameField& ff);
FrameField read_frame_field_json(std::istream& is);

// rigid-motion JSON: {"p":[p1,p2,p3], "angle":alpha0}
void write_motion_json(std::ostream& os, const RigidMotion& g);
RigidMotion read_motion_json(std::istream& is);

// grid JSON: {u0,du,nu,v0,dv,nv, points:[x,y,z,...] row-major,
//             optional fu:[...], fv:[...]}
void write_grid_json(std::ostream& os, const SurfaceGrid& g);
SurfaceGrid read_grid_json(std::istream& is);

// coefficients CSV: header i,j,u,v,a,b,c,l,m
void write_coefficients_csv(std::ostream& os, const SurfaceCoefficients& c);
SurfaceCoefficients read_coefficients_csv(std::istream& is);

// Wavefront OBJ with triangular faces (v/f records only, z up)
TriMesh read_obj(std::istream& is);

// estimate JSON: {estimate, std_error, n_samples, box:{p,theta,t}, p_area,
//                 ratio, seed}
void write_estimate_json(std::ostream& os, const CroftonEstimate& e, double p_area_value);

// file wrappers; throw ParseError when the file cannot be opened
std::string slurp_file(const std::string& path);
void spit_file(const std::string& path, const std::string& content);

}  // namespace heis::io

#endif
