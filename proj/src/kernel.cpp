#include "endomax/kernel.hpp"

namespace endomax {

CdfKernel CdfKernel::completely_dependent(MeasurePreservingMap h) {
  CdfKernel k;
  k.scale_ = Scale::Unit;
  k.form_ = Form::CompletelyDependent;
  k.h_.emplace(std::move(h));
  return k;
}

CdfKernel CdfKernel::independence() {
  CdfKernel k;
  k.scale_ = Scale::Unit;
  k.form_ = Form::Independence;
  return k;
}

CdfKernel CdfKernel::general(Scale scale,
                             std::function<double(double, double)> eval) {
  require(eval != nullptr, "kernel: need an evaluator");
  CdfKernel k;
  k.scale_ = scale;
  k.form_ = Form::General;
  k.eval_ = std::move(eval);
  return k;
}

double CdfKernel::operator()(double x, double y) const {
  switch (form_) {
    case Form::CompletelyDependent:
      if (scale_ == Scale::Unit) {
        return (*h_)(clamp01(x)) <= y ? 1.0 : 0.0;
      }
      return (*h_)(f_->cdf(x)) <= g_->cdf(y) ? 1.0 : 0.0;
    case Form::Independence:
      return clamp01(y);
    case Form::General:
      return eval_(x, y);
  }
  return 0.0;
}

const MeasurePreservingMap& CdfKernel::map() const {
  require(form_ == Form::CompletelyDependent,
          "map: kernel is not completely dependent");
  return *h_;
}

double CdfKernel::real_map(double x) const {
  require(form_ == Form::CompletelyDependent && scale_ == Scale::Real,
          "real_map: need a real-scale completely dependent kernel");
  return g_->quantile(clamp_open01((*h_)(f_->cdf(x))));
}

std::string CdfKernel::describe() const {
  std::string s = scale_ == Scale::Unit ? "unit " : "real ";
  switch (form_) {
    case Form::CompletelyDependent:
      return s + "completely-dependent(" + h_->describe() + ")";
    case Form::Independence:
      return s + "independence";
    case Form::General:
      return s + "general";
  }
  return s;
}

CdfKernel kernel_to_real(const CdfKernel& ka, const Marginal& f,
                         const Marginal& g) {
  require(ka.scale_ == CdfKernel::Scale::Unit,
          "kernel_to_real: input must be unit scale");
  CdfKernel k;
  k.scale_ = CdfKernel::Scale::Real;
  if (ka.form_ == CdfKernel::Form::CompletelyDependent) {
    k.form_ = ka.form_;
    k.h_ = ka.h_;
    k.f_ = f;
    k.g_ = g;
    return k;
  }
  k.form_ = CdfKernel::Form::General;
  k.eval_ = [inner = ka, f, g](double x, double y) {
    return inner(f.cdf(x), g.cdf(y));
  };
  return k;
}

CdfKernel kernel_to_unit(const CdfKernel& kh, const Marginal& f,
                         const Marginal& g) {
  require(kh.scale_ == CdfKernel::Scale::Real,
          "kernel_to_unit: input must be real scale");
  if (kh.form_ == CdfKernel::Form::CompletelyDependent && *kh.f_ == f &&
      *kh.g_ == g) {
    return CdfKernel::completely_dependent(*kh.h_);
  }
  CdfKernel k;
  k.scale_ = CdfKernel::Scale::Unit;
  k.form_ = CdfKernel::Form::General;
  k.eval_ = [inner = kh, f, g](double x, double y) {
    return inner(f.quantile(clamp_open01(x)), g.quantile(clamp_open01(y)));
  };
  return k;
}

}  // namespace endomax
