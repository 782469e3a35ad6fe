#include "endomax/measure_map.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace endomax {

namespace {

void check_pieces(const std::vector<AffinePiece>& ps) {
  require(!ps.empty(), "map: need at least one piece");
  require(ps.front().x0 == 0.0 && ps.back().x1 == 1.0,
          "map: pieces must span [0,1]");
  for (std::size_t i = 0; i < ps.size(); ++i) {
    require(ps[i].x0 < ps[i].x1, "map: degenerate piece interval");
    require(ps[i].a != 0.0 && std::isfinite(ps[i].a) && std::isfinite(ps[i].b),
            "map: piece slope must be finite and nonzero");
    if (i > 0)
      require(ps[i - 1].x1 == ps[i].x0, "map: pieces must be contiguous");
  }
}

const AffinePiece& piece_at(const std::vector<AffinePiece>& ps, double x) {
  auto it = std::upper_bound(
      ps.begin(), ps.end(), x,
      [](double v, const AffinePiece& p) { return v < p.x0; });
  const std::size_t i =
      it == ps.begin() ? 0 : static_cast<std::size_t>(it - ps.begin()) - 1;
  return ps[i];
}

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Compose piece tables: returns the table of x -> g(f(x)).
std::vector<AffinePiece> compose_tables(const std::vector<AffinePiece>& f,
                                        const std::vector<AffinePiece>& g) {
  std::vector<AffinePiece> out;
  out.reserve(f.size() + g.size());
  for (const AffinePiece& p : f) {
    // Cut p's interval wherever its image crosses a breakpoint of g.
    std::vector<double> cuts;
    cuts.push_back(p.x0);
    cuts.push_back(p.x1);
    for (std::size_t j = 1; j < g.size(); ++j) {
      const double c = g[j].x0;
      const double xc = (c - p.b) / p.a;
      if (xc > p.x0 && xc < p.x1) cuts.push_back(xc);
    }
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      if (!(cuts[k] < cuts[k + 1])) continue;
      const double xm = 0.5 * (cuts[k] + cuts[k + 1]);
      const double ym = std::min(1.0, std::max(0.0, p.eval(xm)));
      const AffinePiece& q = piece_at(g, ym);
      out.push_back({cuts[k], cuts[k + 1], q.a * p.a, q.a * p.b + q.b});
    }
  }
  return out;
}

}  // namespace

MeasurePreservingMap MeasurePreservingMap::rotation(double z) {
  require(std::isfinite(z), "rotation: shift must be finite");
  double zn = z - std::floor(z);
  if (zn >= 1.0) zn = 0.0;  // guards z = -1e-18 style roundoff
  MeasurePreservingMap m;
  m.kind_ = Kind::Rotation;
  m.z_ = zn;
  if (zn == 0.0) {
    m.pieces_ = {{0.0, 1.0, 1.0, 0.0}};
  } else {
    m.pieces_ = {{0.0, 1.0 - zn, 1.0, zn}, {1.0 - zn, 1.0, 1.0, zn - 1.0}};
  }
  return m;
}

MeasurePreservingMap MeasurePreservingMap::reflect() {
  MeasurePreservingMap m;
  m.kind_ = Kind::Reflect;
  m.pieces_ = {{0.0, 1.0, -1.0, 1.0}};
  return m;
}

MeasurePreservingMap MeasurePreservingMap::identity() { return rotation(0.0); }

MeasurePreservingMap MeasurePreservingMap::piecewise_affine(
    std::vector<AffinePiece> pieces, std::string note) {
  check_pieces(pieces);
  MeasurePreservingMap m;
  m.kind_ = Kind::PiecewiseAffine;
  m.pieces_ = std::move(pieces);
  m.note_ = std::move(note);
  return m;
}

MeasurePreservingMap MeasurePreservingMap::level_spread(
    std::vector<AffinePiece> pieces, std::string note) {
  MeasurePreservingMap m = piecewise_affine(std::move(pieces), std::move(note));
  m.kind_ = Kind::LevelSpread;
  return m;
}

MeasurePreservingMap MeasurePreservingMap::composite(
    std::vector<MeasurePreservingMap> parts) {
  require(!parts.empty(), "composite: need at least one part");
  if (parts.size() == 1) return std::move(parts.front());
  MeasurePreservingMap m;
  m.kind_ = Kind::Composite;
  for (MeasurePreservingMap& p : parts) {
    if (p.kind_ == Kind::Composite) {
      for (MeasurePreservingMap& q : p.parts_) m.parts_.push_back(std::move(q));
    } else {
      m.parts_.push_back(std::move(p));
    }
  }
  return m;
}

double MeasurePreservingMap::rotation_z() const {
  require(kind_ == Kind::Rotation, "rotation_z: not a rotation");
  return z_;
}

const std::vector<MeasurePreservingMap>& MeasurePreservingMap::parts() const {
  require(kind_ == Kind::Composite, "parts: not a composite");
  return parts_;
}

double MeasurePreservingMap::operator()(double x) const {
  require(x >= 0.0 && x <= 1.0, "map: x must lie in [0,1]");
  if (kind_ == Kind::Composite) {
    double v = x;
    for (const MeasurePreservingMap& p : parts_) v = p(v);
    return v;
  }
  const AffinePiece& p = piece_at(pieces_, x);
  return clamp01(p.eval(x));
}

std::vector<AffinePiece> MeasurePreservingMap::affine_pieces() const {
  if (kind_ != Kind::Composite) return pieces_;
  std::vector<AffinePiece> acc = parts_.front().affine_pieces();
  for (std::size_t i = 1; i < parts_.size(); ++i)
    acc = compose_tables(acc, parts_[i].affine_pieces());
  return acc;
}

std::string MeasurePreservingMap::describe() const {
  switch (kind_) {
    case Kind::Rotation:
      return z_ == 0.0 ? "identity" : "rotation(z=" + fmt_g(z_) + ")";
    case Kind::Reflect:
      return "reflect";
    case Kind::PiecewiseAffine:
      return "piecewise-affine(" + std::to_string(pieces_.size()) + " pieces" +
             (note_.empty() ? "" : std::string("; ") + note_) + ")";
    case Kind::LevelSpread:
      return "level-spread(" + std::to_string(pieces_.size()) + " pieces" +
             (note_.empty() ? "" : std::string("; ") + note_) + ")";
    case Kind::Composite: {
      std::string s;
      for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i) s += " then ";
        s += parts_[i].describe();
      }
      return s;
    }
  }
  return {};
}

}  // namespace endomax
