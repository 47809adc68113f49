#include "retx/slow_vary.hpp"

#include <cmath>
#include <sstream>

#include "retx/error.hpp"
#include "retx/gammafn.hpp"

namespace retx {

SlowVary SlowVary::one() { return SlowVary(Kind::One, 0.0, 0.0, 0.0, 1.0); }

SlowVary SlowVary::log_power(double coeff, double exponent, double x_min) {
  require(coeff > 0.0, "log_power coefficient must be positive");
  require(std::isfinite(exponent), "log_power exponent must be finite");
  require(x_min >= 2.718281828459045 - 1e-12, "log_power x_min must be at least e");
  return SlowVary(Kind::LogPower, coeff, exponent, 0.0, x_min);
}

SlowVary SlowVary::gamma_doc_exact(double rate, double shape, double channel_rate) {
  require(rate > 0.0 && shape > 0.0 && channel_rate > 0.0,
          "gamma_doc_exact parameters must be positive");
  require(shape <= gammafn::kMaxShape, "gamma_doc_exact shape too large");
  return SlowVary(Kind::GammaDocExact, rate, shape, channel_rate, 1.0);
}

double SlowVary::operator()(double x) const { return std::exp(log_value(x)); }

double SlowVary::log_value(double x) const {
  switch (kind_) {
    case Kind::One:
      return 0.0;
    case Kind::LogPower: {
      const double u = std::max(x, x_min_);
      return std::log(p0_) + p1_ * std::log(std::log(u));
    }
    case Kind::GammaDocExact: {
      // -log f(u) with f(u) = e^(λu) Γ(λu, k)/Γ(k), u = log(x)/μ.
      const double u = std::log(std::max(x, 1.0)) / p2_;
      const double z = p0_ * u;
      if (z == 0.0) return 0.0;
      return -(z + gammafn::log_regularized_upper(z, p1_));
    }
  }
  return 0.0;
}

double SlowVary::log_index(double x) const {
  switch (kind_) {
    case Kind::One:
      return 0.0;
    case Kind::LogPower:
      if (x <= x_min_) return 0.0;
      return p1_ / std::log(x);
    case Kind::GammaDocExact: {
      if (x <= 1.0) return 0.0;
      // d/du log f = λ (1 - (λu)^(k-1) e^(-λu) / Γ(λu, k)); chain rule du/dlog x = 1/μ.
      const double u = std::log(x) / p2_;
      const double z = p0_ * u;
      const double log_ratio = (p1_ - 1.0) * std::log(z) - z - gammafn::log_upper_incomplete_gamma(z, p1_);
      return -(p0_ / p2_) * (1.0 - std::exp(log_ratio));
    }
  }
  return 0.0;
}

std::string SlowVary::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::One:
      os << "one";
      break;
    case Kind::LogPower:
      os << "log_power(coeff=" << p0_ << ", exponent=" << p1_ << ", x_min=" << x_min_ << ")";
      break;
    case Kind::GammaDocExact:
      os << "gamma_doc_exact(lambda=" << p0_ << ", k=" << p1_ << ", mu=" << p2_ << ")";
      break;
  }
  return os.str();
}

}  // namespace retx
