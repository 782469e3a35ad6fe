// Lebesgue-measure-preserving maps of [0,1] and the copulas they induce.
//
// Every map handled here is piecewise affine with nonzero slopes, so exact
// composition and exact interval arithmetic are available throughout. The
// completely dependent copula of a map h assigns mass P(Y <= y | X = x) =
// 1{h(x) <= y}; the map itself is all the state a kernel needs.
#pragma once

#include <string>
#include <vector>

#include "endomax/common.hpp"

namespace endomax {

// One affine piece x -> a*x + b on [x0, x1).
struct AffinePiece {
  double x0, x1, a, b;
  double eval(double x) const { return a * x + b; }
};

class MeasurePreservingMap {
 public:
  enum class Kind { Rotation, Reflect, PiecewiseAffine, LevelSpread, Composite };

  // x -> x + z (mod 1); z is normalized into [0,1).
  static MeasurePreservingMap rotation(double z);
  // x -> 1 - x.
  static MeasurePreservingMap reflect();
  static MeasurePreservingMap identity();
  // Explicit pieces. Must cover [0,1) contiguously with slopes != 0, and the
  // caller is responsible for measure preservation.
  static MeasurePreservingMap piecewise_affine(std::vector<AffinePiece> pieces,
                                               std::string note = {});
  // Same representation, tagged as a rearrangement companion: identity off
  // the level sets of a transformation and an affine spread on each level.
  static MeasurePreservingMap level_spread(std::vector<AffinePiece> pieces,
                                           std::string note = {});
  // Left-to-right composition: composite({f, g}) is x -> g(f(x)).
  static MeasurePreservingMap composite(std::vector<MeasurePreservingMap> parts);

  Kind kind() const { return kind_; }
  // Normalized shift of a rotation.
  double rotation_z() const;
  const std::vector<MeasurePreservingMap>& parts() const;

  double operator()(double x) const;

  // Exact affine decomposition (composites are folded piece by piece).
  std::vector<AffinePiece> affine_pieces() const;

  std::string describe() const;

 private:
  MeasurePreservingMap() = default;

  Kind kind_ = Kind::Rotation;
  double z_ = 0.0;
  std::vector<AffinePiece> pieces_;
  std::string note_;
  std::vector<MeasurePreservingMap> parts_;
};

}  // namespace endomax
