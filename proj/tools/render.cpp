#include "render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "adjbraid/errors.hpp"

namespace adjbraid {

namespace {

using Vec = std::vector<double>;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s = buf;
  if (s == "-0.000") s = "0.000";
  return s;
}

double dot(const Vec& a, const Vec& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Vec scaled(const Vec& a, double c) {
  Vec out = a;
  for (auto& x : out) x *= c;
  return out;
}

Vec plus(const Vec& a, const Vec& b) {
  Vec out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += b[i];
  return out;
}

Vec unit(const Vec& a) { return scaled(a, 1.0 / std::sqrt(dot(a, a))); }

// Orthonormal basis of the sum-zero hyperplane of R^n (Helmert vectors).
std::vector<Vec> helmert(int n) {
  std::vector<Vec> out;
  for (int k = 1; k < n; ++k) {
    Vec v(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < k; ++i) v[static_cast<std::size_t>(i)] = 1.0;
    v[static_cast<std::size_t>(k)] = -k;
    out.push_back(unit(v));
  }
  return out;
}

Vec to_plane(const std::vector<Vec>& basis, const Witness& h) {
  Vec amb(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) amb[i] = h[i].get_d();
  Vec out;
  for (const auto& b : basis) out.push_back(dot(b, amb));
  return out;
}

// Extreme rays (ambient, exact) of the closure of each chamber: the one-dimensional
// intersections of hyperplanes whose signs agree with the chamber or vanish.
std::vector<std::vector<Witness>> extreme_rays(const ShardSpace& space) {
  const Partition& p = space.support();
  const int n = p.n();
  const KeySet& keys = space.keys();
  std::vector<Witness> lines;
  auto key_row = [&](Subset k) {
    SparseVector r;
    for (int i : elements(k)) r.set(static_cast<std::size_t>(i), 1);
    return r;
  };
  SparseVector ones;
  for (int i = 0; i < n; ++i) ones.set(static_cast<std::size_t>(i), 1);
  // Choose n-2 keys at a time so that together with the sum they cut out a line.
  const std::size_t need = static_cast<std::size_t>(n - 2);
  std::vector<std::size_t> pick(need);
  std::function<void(std::size_t, std::size_t)> choose = [&](std::size_t start, std::size_t depth) {
    if (depth == need) {
      RationalMatrix m(static_cast<std::size_t>(n));
      m.add_row(ones);
      for (std::size_t i : pick) m.add_row(key_row(keys.key(i)));
      auto ker = kernel_basis(m);
      if (ker.size() != 1) return;
      Witness d(static_cast<std::size_t>(n), 0);
      for (const auto& [c, v] : ker.front().entries()) d[c] = v;
      lines.push_back(std::move(d));
      return;
    }
    for (std::size_t i = start; i < keys.size(); ++i) {
      pick[depth] = i;
      choose(i + 1, depth + 1);
    }
  };
  choose(0, 0);

  std::vector<std::vector<Witness>> out(space.size());
  for (const Witness& d : lines) {
    for (int s : {1, -1}) {
      Witness ray = d;
      for (auto& x : ray) x *= s;
      std::vector<Sign> signs;
      for (Subset k : keys.keys()) {
        Rational v = 0;
        for (int i : elements(k)) v += ray[static_cast<std::size_t>(i)];
        signs.push_back(sign_of(v));
      }
      for (std::size_t c = 0; c < space.size(); ++c) {
        bool inside = true;
        for (std::size_t i = 0; i < keys.size() && inside; ++i) {
          Sign want = keys.negative(space.signs(c), i) ? Sign::Negative : Sign::Positive;
          inside = signs[i] == Sign::Zero || signs[i] == want;
        }
        if (inside && std::find(out[c].begin(), out[c].end(), ray) == out[c].end()) {
          // Keep one representative per direction.
          bool parallel = false;
          for (const auto& r : out[c]) {
            Rational ratio = 0;
            bool same = true;
            for (std::size_t i = 0; i < r.size() && same; ++i) {
              if (sgn(r[i]) == 0 || sgn(ray[i]) == 0) {
                same = sgn(r[i]) == 0 && sgn(ray[i]) == 0;
              } else if (sgn(ratio) == 0) {
                ratio = ray[i] / r[i];
                same = sgn(ratio) > 0;
              } else {
                same = ray[i] / r[i] == ratio;
              }
            }
            parallel = parallel || same;
          }
          if (!parallel) out[c].push_back(ray);
        }
      }
    }
  }
  return out;
}

std::string fill_for(const std::optional<ShardVector>& hl, std::size_t c) {
  if (!hl) return "#ffffff";
  int s = sgn(hl->coeff(c));
  return s > 0 ? "#e41a1c" : s < 0 ? "#377eb8" : "#ffffff";
}

std::string coefficient_attr(const std::optional<ShardVector>& hl, std::size_t c) {
  if (!hl) return "";
  Rational v = hl->coeff(c);
  if (sgn(v) == 0) return "";
  return " data-coefficient=\"" + to_string(v) + "\"";
}

std::string render_plane(const ShardSpace& space, const std::optional<ShardVector>& hl) {
  const auto basis = helmert(3);
  const auto rays = extreme_rays(space);
  const double r = 180.0;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"440\" height=\"440\" viewBox=\"-220 -220 440 440\">\n";
  svg << "<rect x=\"-220\" y=\"-220\" width=\"440\" height=\"440\" fill=\"#ffffff\"/>\n";
  for (std::size_t c = 0; c < space.size(); ++c) {
    if (rays[c].size() != 2) throw InvariantViolation("planar chamber without two bounding rays");
    Vec a = unit(to_plane(basis, rays[c][0]));
    Vec b = unit(to_plane(basis, rays[c][1]));
    double ta = std::atan2(a[1], a[0]);
    double tb = std::atan2(b[1], b[0]);
    double sweep = tb - ta;
    while (sweep <= -M_PI) sweep += 2 * M_PI;
    while (sweep > M_PI) sweep -= 2 * M_PI;
    svg << "<path class=\"chamber\" data-signs=\"" << space.shard(c).sign_string() << "\"" << coefficient_attr(hl, c)
        << " fill=\"" << fill_for(hl, c) << "\" stroke=\"none\" d=\"M 0.000 0.000";
    for (int k = 0; k <= 24; ++k) {
      double t = ta + sweep * k / 24.0;
      svg << " L " << num(r * std::cos(t)) << " " << num(-r * std::sin(t));
    }
    svg << " Z\"/>\n";
  }
  for (Subset k : space.keys().keys()) {
    // Direction of the line lambda_k = 0 inside the plane.
    Vec normal;
    Vec amb(3, 0.0);
    for (int i : elements(k)) amb[static_cast<std::size_t>(i)] = 1.0;
    for (const auto& b : basis) normal.push_back(dot(b, amb));
    Vec dir = unit(Vec{-normal[1], normal[0]});
    svg << "<line class=\"wall\" data-key=\"" << format_subset(space.support().ground(), k) << "\" x1=\""
        << num(-200 * dir[0]) << "\" y1=\"" << num(200 * dir[1]) << "\" x2=\"" << num(200 * dir[0]) << "\" y2=\""
        << num(-200 * dir[1]) << "\" stroke=\"#000000\" stroke-width=\"1.5\"/>\n";
  }
  for (std::size_t c = 0; c < space.size(); ++c) {
    Vec mid = unit(plus(unit(to_plane(basis, rays[c][0])), unit(to_plane(basis, rays[c][1]))));
    svg << "<text class=\"label\" x=\"" << num(120 * mid[0]) << "\" y=\"" << num(-120 * mid[1])
        << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"14\">" << space.shard(c).sign_string()
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

Vec cross(const Vec& a, const Vec& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

std::string render_sphere(const ShardSpace& space, const std::optional<ShardVector>& hl) {
  const auto basis = helmert(4);
  const auto rays = extreme_rays(space);

  // Pole: antipode of the centre of the chamber holding a fixed generic point.
  Witness probe{Rational(7), Rational(2), Rational(-3), Rational(-6)};
  std::size_t pole_chamber = space.index_of(shard_from_point(space.support(), probe));
  Vec centre(3, 0.0);
  for (const auto& ray : rays[pole_chamber]) centre = plus(centre, unit(to_plane(basis, ray)));
  const Vec pole = scaled(unit(centre), -1.0);
  const Vec e1 = unit(cross(pole, std::abs(pole[0]) < 0.9 ? Vec{1, 0, 0} : Vec{0, 1, 0}));
  const Vec e2 = cross(pole, e1);
  auto project = [&](const Vec& x) {
    double d = 1.0 - dot(x, pole);
    return std::array<double, 2>{dot(x, e1) / d, dot(x, e2) / d};
  };

  // The pole itself lies in the chamber opposite the probe's chamber.
  const SignBits all = (SignBits{1} << space.keys().size()) - 1;
  const std::size_t outer = *space.find(space.signs(pole_chamber) ^ all);

  struct Region {
    std::size_t chamber;
    std::vector<std::array<double, 2>> pts;
  };
  std::vector<Region> regions;
  double extent = 1.0;
  for (std::size_t c = 0; c < space.size(); ++c) {
    if (c == outer) continue;
    std::vector<Vec> verts;
    Vec cc(3, 0.0);
    for (const auto& ray : rays[c]) {
      verts.push_back(unit(to_plane(basis, ray)));
      cc = plus(cc, verts.back());
    }
    cc = unit(cc);
    const Vec t1 = unit(cross(cc, std::abs(cc[0]) < 0.9 ? Vec{1, 0, 0} : Vec{0, 1, 0}));
    const Vec t2 = cross(cc, t1);
    std::sort(verts.begin(), verts.end(), [&](const Vec& a, const Vec& b) {
      return std::atan2(dot(a, t2), dot(a, t1)) < std::atan2(dot(b, t2), dot(b, t1));
    });
    Region reg{c, {}};
    for (std::size_t i = 0; i < verts.size(); ++i) {
      const Vec& a = verts[i];
      const Vec& b = verts[(i + 1) % verts.size()];
      double omega = std::acos(std::clamp(dot(a, b), -1.0, 1.0));
      for (int k = 0; k < 16; ++k) {
        double t = k / 16.0;
        Vec x = omega < 1e-12 ? a
                              : plus(scaled(a, std::sin((1 - t) * omega) / std::sin(omega)),
                                     scaled(b, std::sin(t * omega) / std::sin(omega)));
        auto pt = project(x);
        extent = std::max({extent, std::abs(pt[0]), std::abs(pt[1])});
        reg.pts.push_back(pt);
      }
    }
    regions.push_back(std::move(reg));
  }

  const double half = 220.0;
  const double scale = (half - 20.0) / extent;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"440\" height=\"440\" viewBox=\"-220 -220 440 440\">\n";
  svg << "<rect class=\"chamber\" data-signs=\"" << space.shard(outer).sign_string() << "\""
      << coefficient_attr(hl, outer) << " x=\"-220\" y=\"-220\" width=\"440\" height=\"440\" fill=\""
      << fill_for(hl, outer) << "\"/>\n";
  for (const auto& reg : regions) {
    svg << "<path class=\"chamber\" data-signs=\"" << space.shard(reg.chamber).sign_string() << "\""
        << coefficient_attr(hl, reg.chamber) << " fill=\"" << fill_for(hl, reg.chamber)
        << "\" stroke=\"none\" d=\"";
    for (std::size_t i = 0; i < reg.pts.size(); ++i) {
      svg << (i ? " L " : "M ") << num(scale * reg.pts[i][0]) << " " << num(-scale * reg.pts[i][1]);
    }
    svg << " Z\"/>\n";
  }
  // Each wall's great circle, projected: circle through three projected points.
  for (Subset k : space.keys().keys()) {
    Vec amb(4, 0.0);
    for (int i : elements(k)) amb[static_cast<std::size_t>(i)] = 1.0;
    Vec normal;
    for (const auto& b : basis) normal.push_back(dot(b, amb));
    normal = unit(normal);
    Vec a = unit(cross(normal, std::abs(normal[0]) < 0.9 ? Vec{1, 0, 0} : Vec{0, 1, 0}));
    Vec b = cross(normal, a);
    auto p1 = project(a);
    auto p2 = project(b);
    auto p3 = project(scaled(a, -1.0));
    double ax = p1[0], ay = p1[1], bx = p2[0], by = p2[1], cx = p3[0], cy = p3[1];
    double d = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
    double ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay) + (cx * cx + cy * cy) * (ay - by)) / d;
    double uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx) + (cx * cx + cy * cy) * (bx - ax)) / d;
    double rad = std::hypot(ax - ux, ay - uy);
    svg << "<circle class=\"wall\" data-key=\"" << format_subset(space.support().ground(), k) << "\" cx=\""
        << num(scale * ux) << "\" cy=\"" << num(-scale * uy) << "\" r=\"" << num(scale * rad)
        << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1.2\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace

std::string render_svg(int n, const std::optional<ShardVector>& highlight) {
  if (n != 3 && n != 4) throw OutOfRange("render supports n = 3 or n = 4");
  auto space = ShardSpace::of(Partition::one_block(GroundSet::numbered(n)));
  if (highlight && !(highlight->support() == space->support())) {
    throw SupportMismatch("highlight must be over the one-block partition");
  }
  return n == 3 ? render_plane(*space, highlight) : render_sphere(*space, highlight);
}

}  // namespace adjbraid
