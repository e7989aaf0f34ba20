#include "magic/magnetics.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <stdexcept>

#include "magic/constants.hpp"

namespace magic {

namespace {

// Field of one finite straight segment (Biot-Savart in closed form):
//   B = mu0 I / (4 pi d) * (cos theta_1 - cos theta_2) * (u x d_hat)
// with d the distance from p to the wire axis and theta_{1,2} the angles
// between the wire direction u and the vectors from the endpoints to p.
// On the axis itself the integrand dl x r vanishes, so B = 0 there.
Vec3 segment_field(const Segment& s, const Vec3& p) {
  const Vec3 ab = s.b - s.a;
  const double len = ab.norm();
  if (len <= 0.0) return Vec3::Zero();
  const Vec3 u = ab / len;
  const Vec3 ap = p - s.a;
  const Vec3 bp = p - s.b;
  const Vec3 perp = ap - ap.dot(u) * u;
  const double d = perp.norm();
  if (d < 1e-15) return Vec3::Zero();
  const double cos1 = u.dot(ap) / ap.norm();
  const double cos2 = u.dot(bp) / bp.norm();
  const double mag = constants::mu0 * s.current / (4.0 * constants::pi * d) * (cos1 - cos2);
  return mag * u.cross(perp / d);
}

// Expand a sheet into its equal-current filaments.
void sheet_filaments(const Sheet& s, std::vector<Segment>& out) {
  if (s.filament_count < 1) throw std::invalid_argument("sheet filament_count must be >= 1");
  const int k = s.filament_count;
  for (int i = 0; i < k; ++i) {
    const double t = (i + 0.5) / k;
    Segment seg;
    seg.a = s.corners[0] + t * (s.corners[3] - s.corners[0]);
    seg.b = s.corners[1] + t * (s.corners[2] - s.corners[1]);
    seg.current = s.current / k;
    out.push_back(seg);
  }
}

}  // namespace

Vec3 field_at(const CircuitGeometry& g, const Vec3& p) {
  Vec3 b = Vec3::Zero();
  for (const auto& s : g.segments) b += segment_field(s, p);
  std::vector<Segment> fil;
  for (const auto& sh : g.sheets) {
    fil.clear();
    sheet_filaments(sh, fil);
    for (const auto& s : fil) b += segment_field(s, p);
  }
  return b;
}

Vec3 gradient_of_magnitude(const CircuitGeometry& g, const Vec3& p, double step_m) {
  if (field_at(g, p).norm() < 1e-15)
    throw std::domain_error("gradient of |B| is undefined at a field null");
  Vec3 grad;
  for (int i = 0; i < 3; ++i) {
    Vec3 dp = Vec3::Zero();
    dp(i) = step_m;
    grad(i) = (field_at(g, p + dp).norm() - field_at(g, p - dp).norm()) / (2.0 * step_m);
  }
  return grad;
}

GradientProfile gradient_profile(const CircuitGeometry& g, const Vec3& p0,
                                 const Vec3& p1, int samples) {
  if (samples < 2) throw std::invalid_argument("gradient_profile needs >= 2 samples");
  GradientProfile prof;
  prof.points.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    const Vec3 p = p0 + (p1 - p0) * (static_cast<double>(i) / (samples - 1));
    prof.points.push_back(p);
    prof.magnitude.push_back(field_at(g, p).norm());
    prof.gradient.push_back(gradient_of_magnitude(g, p));
  }
  return prof;
}

SecularFrequencies secular_frequencies(const MathieuMatrices& m, double omega_rf,
                                       double tol) {
  if (std::abs(m.a.trace()) > 1e-9 || std::abs(m.q.trace()) > 1e-9)
    throw std::invalid_argument(
        "Mathieu matrices must be traceless (Laplace); check the trap potential");
  const double scale = std::max({std::abs(m.a.diagonal().cwiseAbs().maxCoeff()),
                                 std::abs(m.q.diagonal().cwiseAbs().maxCoeff()), 1e-30});
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      if (std::abs(m.a(i, j)) > tol * scale || std::abs(m.q(i, j)) > tol * scale)
        throw std::invalid_argument(
            "Mathieu matrices are not diagonal; rotate to principal axes first");
    }
  }
  SecularFrequencies out;
  for (int i = 0; i < 3; ++i) {
    const double aii = m.a(i, i);
    const double qii = m.q(i, i);
    const double kappa2 = aii + qii * qii / 2.0;
    if (kappa2 < 0.0)
      throw std::runtime_error("unstable Mathieu parameters on axis " + std::to_string(i));
    out.kappa[i] = std::sqrt(kappa2);
    out.omega[i] = out.kappa[i] * omega_rf / 2.0;
    if (std::abs(aii) > 0.1 || qii * qii > 0.1) out.accuracy_warning = true;
  }
  return out;
}

CircuitGeometry double_loop_chip(double i1_a, double i2_a, int filaments) {
  // Planar double loop, all conductors in the chip plane y = 0, long sides
  // along z, truncated at +-5 mm.  The inner conductor W1 spans
  // x in [-101.5, -1.5] um and detours around the central hole: the inner
  // half of its filaments squeezes into the 25 um band at the left edge,
  // the outer half into the 25 um band at the right edge, with the detour
  // length growing from 75 um to 125 um across the width.  The outer
  // conductor W2 is a straight strip at x in [+1.5, +101.5] um.  The ion
  // sits above x = 0, the insulation gap between the two conductors.
  if (filaments < 2) throw std::invalid_argument("double_loop_chip needs >= 2 filaments");
  const double um = 1e-6;
  const double zext = 5000.0;
  CircuitGeometry g;
  const int k = filaments;
  for (int i = 0; i < k; ++i) {
    const double t = (i + 0.5) / k - 0.5;
    const double x = -51.5 + 100.0 * t;
    const double zd = 75.0 + 100.0 * std::abs(t);
    const double s = (t < 0.0) ? (t + 0.5) / 0.5 : t / 0.5;
    const double xb = (t < 0.0) ? -101.5 + 25.0 * s : -26.5 + 25.0 * s;
    const double cur = i1_a / k;
    const Vec3 pts[6] = {
        Vec3(x, 0, -zext) * um, Vec3(x, 0, -zd) * um, Vec3(xb, 0, -zd) * um,
        Vec3(xb, 0, zd) * um,   Vec3(x, 0, zd) * um,  Vec3(x, 0, zext) * um,
    };
    for (int j = 0; j < 5; ++j) g.segments.push_back({pts[j], pts[j + 1], cur});
  }
  Sheet w2;
  w2.corners = {Vec3(1.5, 0, -zext) * um, Vec3(1.5, 0, zext) * um,
                Vec3(101.5, 0, zext) * um, Vec3(101.5, 0, -zext) * um};
  w2.current = i2_a;
  w2.filament_count = filaments;
  g.sheets.push_back(w2);
  return g;
}

CircuitGeometry u_chip(double current_a, int filaments) {
  // Two anti-parallel strips in the chip plane, 400 um wide, centers
  // 500 um apart, truncated at +-5 mm; approximates the central bar of a
  // U-shaped wire with its return leads.
  const double um = 1e-6;
  const double zext = 5000.0;
  CircuitGeometry g;
  Sheet left;
  left.corners = {Vec3(-450, 0, -zext) * um, Vec3(-450, 0, zext) * um,
                  Vec3(-50, 0, zext) * um, Vec3(-50, 0, -zext) * um};
  left.current = current_a;
  left.filament_count = filaments;
  Sheet right = left;
  right.corners = {Vec3(50, 0, -zext) * um, Vec3(50, 0, zext) * um,
                   Vec3(450, 0, zext) * um, Vec3(450, 0, -zext) * um};
  right.current = -current_a;
  g.sheets.push_back(left);
  g.sheets.push_back(right);
  return g;
}

CircuitGeometry load_circuit(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open circuit file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw std::runtime_error("invalid JSON in " + path + ": " + e.what());
  }
  auto vec3 = [&](const nlohmann::json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 3)
      throw std::runtime_error(path + ": " + what + " must be a 3-element array");
    return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
  };
  CircuitGeometry g;
  for (const auto& s : doc.value("segments", nlohmann::json::array())) {
    Segment seg;
    if (!s.contains("a") || !s.contains("b") || !s.contains("current_a"))
      throw std::runtime_error(path + ": segment needs keys a, b, current_a");
    seg.a = vec3(s["a"], "segment a");
    seg.b = vec3(s["b"], "segment b");
    seg.current = s["current_a"].get<double>();
    g.segments.push_back(seg);
  }
  for (const auto& s : doc.value("sheets", nlohmann::json::array())) {
    Sheet sh;
    if (!s.contains("corners") || !s.contains("current_a"))
      throw std::runtime_error(path + ": sheet needs keys corners, current_a");
    const auto& c = s["corners"];
    if (!c.is_array() || c.size() != 4)
      throw std::runtime_error(path + ": sheet corners must be 4 points");
    for (int i = 0; i < 4; ++i) sh.corners[i] = vec3(c[i], "sheet corner");
    sh.current = s["current_a"].get<double>();
    sh.filament_count = s.value("filament_count", 40);
    g.sheets.push_back(sh);
  }
  if (g.segments.empty() && g.sheets.empty())
    throw std::runtime_error(path + ": circuit defines no segments or sheets");
  return g;
}

}  // namespace magic
