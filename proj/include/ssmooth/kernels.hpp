#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <span>
#include <string>

#include "ssmooth/errors.hpp"

namespace ssmooth {

enum class KernelKind : std::uint8_t {
  epanechnikov,     // 3/4 (1 - u^2) on [-1, 1]
  uniform,          // 1/2 on [-1, 1]
  quartic,          // 15/16 (1 - u^2)^2 on [-1, 1]
  asym_quadratic,   // 1 - u^2 on [0, 1], used unnormalized
  aitchison_aitkin, // discrete: 1-h on match, h otherwise; h in [0, 1/2]
  wang_van_ryzin,   // discrete: 1-h on match, (1-h) h^|i-j| / 2 otherwise; h in [0, 1]
};

enum class KernelSupport : std::uint8_t { symmetric_unit, positive_unit, discrete };

struct KernelSpec {
  KernelKind kind = KernelKind::epanechnikov;

  KernelSupport support() const {
    switch (kind) {
      case KernelKind::epanechnikov:
      case KernelKind::uniform:
      case KernelKind::quartic:
        return KernelSupport::symmetric_unit;
      case KernelKind::asym_quadratic:
        return KernelSupport::positive_unit;
      default:
        return KernelSupport::discrete;
    }
  }
  bool is_discrete() const { return support() == KernelSupport::discrete; }
  bool is_continuous() const { return !is_discrete(); }
};

//! Config-file names: epanechnikov, uniform, quartic, asymq, aitchison, wvr.
KernelKind kernel_kind_from_name(const std::string& name);
std::string kernel_kind_name(KernelKind kind);

//! Kernel weight at scaled distance u.  Total on finite reals: zero outside
//! the support, no error paths.
inline double eval_univariate(KernelSpec spec, double u) {
  switch (spec.kind) {
    case KernelKind::epanechnikov: {
      double a = std::fabs(u);
      return a <= 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
    }
    case KernelKind::uniform:
      return std::fabs(u) <= 1.0 ? 0.5 : 0.0;
    case KernelKind::quartic: {
      double a = std::fabs(u);
      if (a > 1.0) return 0.0;
      double t = 1.0 - u * u;
      return 0.9375 * t * t;
    }
    case KernelKind::asym_quadratic:
      return (u >= 0.0 && u <= 1.0) ? 1.0 - u * u : 0.0;
    default:
      fail(errc::not_applicable, "eval_univariate: discrete kernel kind");
  }
}

//! Discrete kernel weight between integer codes i and j at bandwidth h.
inline double eval_discrete(KernelSpec spec, double h, long long i, long long j) {
  switch (spec.kind) {
    case KernelKind::aitchison_aitkin:
      require(h >= 0.0 && h <= 0.5, errc::bandwidth_out_of_range,
              "aitchison kernel needs h in [0, 1/2]");
      return i == j ? 1.0 - h : h;
    case KernelKind::wang_van_ryzin: {
      require(h >= 0.0 && h <= 1.0, errc::bandwidth_out_of_range,
              "wvr kernel needs h in [0, 1]");
      if (i == j) return 1.0 - h;
      double d = static_cast<double>(i > j ? i - j : j - i);
      return 0.5 * (1.0 - h) * std::pow(h, d);
    }
    default:
      fail(errc::not_applicable, "eval_discrete: continuous kernel kind");
  }
}

//! Product kernel.  Continuous components of w hold scaled distances and are
//! mapped through their univariate kernel; discrete components hold weights
//! that were already evaluated by eval_discrete and enter the product as-is.
inline double eval_product(std::span<const KernelSpec> specs, std::span<const double> w) {
  require(specs.size() == w.size(), errc::dimension_mismatch,
          "eval_product: spec/argument length mismatch");
  double out = 1.0;
  for (std::size_t l = 0; l < specs.size(); ++l) {
    out *= specs[l].is_discrete() ? w[l] : eval_univariate(specs[l], w[l]);
    if (out == 0.0) return 0.0;
  }
  return out;
}

//! True when the kernel is bounded away from zero on its whole support,
//! i.e. strictly positive at the support boundary.
inline bool is_type_one(KernelSpec spec) {
  require(spec.is_continuous(), errc::not_applicable, "is_type_one: discrete kernel kind");
  return spec.kind == KernelKind::uniform;
}

//! d/du of K(u)^m on the positive half-support, analytic per kind.
//! Feeds the quadrature of kernel moments.
inline double pow_derivative(KernelSpec spec, double u, int m) {
  require(spec.is_continuous(), errc::not_applicable, "pow_derivative: discrete kernel kind");
  require(m >= 1, errc::invalid_argument, "pow_derivative: m must be >= 1");
  if (u < 0.0 || u > 1.0) return 0.0;
  double k = eval_univariate(spec, u);
  double kprime;
  switch (spec.kind) {
    case KernelKind::epanechnikov: kprime = -1.5 * u; break;
    case KernelKind::uniform: kprime = 0.0; break;
    case KernelKind::quartic: kprime = -3.75 * u * (1.0 - u * u); break;
    case KernelKind::asym_quadratic: kprime = -2.0 * u; break;
    default: kprime = 0.0; break;
  }
  if (m == 1) return kprime;
  return static_cast<double>(m) * std::pow(k, m - 1) * kprime;
}

//! True when K vanishes on the boundary of its support (needed by the
//! one-term moment identity).
inline bool vanishes_at_boundary(KernelSpec spec) {
  require(spec.is_continuous(), errc::not_applicable,
          "vanishes_at_boundary: discrete kernel kind");
  return spec.kind != KernelKind::uniform;
}

}  // namespace ssmooth
