// Markov kernels as conditional distribution functions, on the unit or the
// real scale, with the transfers between the two scales.
//
// A completely dependent kernel is stored as its map h (plus the marginals
// it was transported through, on the real scale), so the real->unit
// transfer can recover the original map exactly: with continuous marginals,
// K_H(F^-(x), (-inf, G^-(y))) = 1{h(x) <= y} at continuity points, and the
// representation already carries h.
#pragma once

#include <functional>
#include <optional>
#include <string>

#include "endomax/marginal.hpp"
#include "endomax/measure_map.hpp"

namespace endomax {

class CdfKernel {
 public:
  enum class Scale { Unit, Real };
  enum class Form { CompletelyDependent, Independence, General };

  // Unit-scale kernel of the completely dependent copula A_h.
  static CdfKernel completely_dependent(MeasurePreservingMap h);
  // Unit-scale product-copula kernel K(x, [0,y]) = y.
  static CdfKernel independence();
  static CdfKernel general(Scale scale,
                           std::function<double(double, double)> eval);

  Scale scale() const { return scale_; }
  Form form() const { return form_; }

  // K(x, [0,y]) on the unit scale, K(x, (-inf,y]) on the real scale.
  double operator()(double x, double y) const;

  // The underlying map of a completely dependent kernel.
  const MeasurePreservingMap& map() const;
  // Real-scale completely dependent kernels: x -> G^-(h(F(x))), the
  // functional dependence realized by the kernel.
  double real_map(double x) const;

  std::string describe() const;

 private:
  friend CdfKernel kernel_to_real(const CdfKernel&, const Marginal&,
                                  const Marginal&);
  friend CdfKernel kernel_to_unit(const CdfKernel&, const Marginal&,
                                  const Marginal&);
  CdfKernel() = default;

  Scale scale_ = Scale::Unit;
  Form form_ = Form::General;
  std::optional<MeasurePreservingMap> h_;
  std::optional<Marginal> f_, g_;  // transport marginals (real-scale CD)
  std::function<double(double, double)> eval_;
};

// Unit -> real: K(x, (-inf,y]) = K_A(F(x), [0, G(y)]).
CdfKernel kernel_to_real(const CdfKernel& ka, const Marginal& f,
                         const Marginal& g);

// Real -> unit: K(x, [0,y]) = K_H(F^-(x), (-inf, G^-(y)]), evaluated with
// the closed-interval convention (identical at continuity points, which is
// where the transfer is defined). Completely dependent kernels transported
// through the same marginals are recovered structurally, hence exactly.
CdfKernel kernel_to_unit(const CdfKernel& kh, const Marginal& f,
                         const Marginal& g);

}  // namespace endomax
