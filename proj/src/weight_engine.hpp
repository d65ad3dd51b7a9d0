#pragma once

// Internal machinery shared by the estimator and the cross-validation
// search: prepared column views, bound bandwidths, and per-pair product
// weights.  Everything here is inline so the per-pair dispatch folds into
// the calling loop.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "ssmooth/errors.hpp"
#include "ssmooth/kernels.hpp"
#include "ssmooth/spaces.hpp"

namespace ssmooth::detail {

//! Bandwidth vector prepared for repeated evaluation: reciprocal bandwidths
//! for continuous components (0 encodes +inf, i.e. the component is smoothed
//! out), and tabulated powers h^d for ordered kernels.
struct BoundBandwidths {
  std::vector<double> h;
  std::vector<double> inv_h;               // continuous comps; 0 for infinite h
  std::vector<std::vector<double>> pow_h;  // ordered comps: h^d by code delta
};

class WeightEngine {
public:
  WeightEngine(const Dataset& ds, std::span<const KernelSpec> specs) : ds_(&ds) {
    require(specs.size() == ds.q(), errc::dimension_mismatch,
            "kernel spec count differs from regressor count");
    specs_.assign(specs.begin(), specs.end());
    cols_.reserve(ds.q());
    for (std::size_t l = 0; l < ds.q(); ++l) {
      const RegressorColumn& c = ds.column(l);
      Col col;
      col.kind = c.kind;
      col.spec = specs_[l];
      switch (c.kind) {
        case ColumnKind::scalar:
          require(col.spec.is_continuous(), errc::kind_mismatch,
                  "scalar column '" + c.name + "' needs a continuous kernel");
          col.reals = c.reals.data();
          break;
        case ColumnKind::functional:
          require(col.spec.is_continuous(), errc::kind_mismatch,
                  "functional column '" + c.name + "' needs a continuous kernel");
          break;
        case ColumnKind::ordered:
        case ColumnKind::categorical:
          require(col.spec.is_discrete(), errc::kind_mismatch,
                  "discrete column '" + c.name + "' needs a discrete kernel");
          col.codes = c.codes.data();
          if (c.kind == ColumnKind::ordered && !c.codes.empty()) {
            auto [mn, mx] = std::minmax_element(c.codes.begin(), c.codes.end());
            col.code_span = static_cast<std::size_t>(*mx - *mn);
          }
          break;
      }
      cols_.push_back(col);
    }
  }

  const Dataset& dataset() const { return *ds_; }
  std::span<const KernelSpec> specs() const { return specs_; }

  BoundBandwidths bind(const Bandwidths& h) const {
    require(h.size() == cols_.size(), errc::dimension_mismatch,
            "bandwidth count differs from regressor count");
    BoundBandwidths b;
    b.h = h;
    b.inv_h.assign(h.size(), 0.0);
    b.pow_h.resize(h.size());
    for (std::size_t l = 0; l < h.size(); ++l) {
      const Col& col = cols_[l];
      if (col.kind == ColumnKind::scalar || col.kind == ColumnKind::functional) {
        require(h[l] > 0.0, errc::nonpositive_bandwidth,
                "continuous bandwidth must be positive");
        b.inv_h[l] = std::isinf(h[l]) ? 0.0 : 1.0 / h[l];
      } else if (col.spec.kind == KernelKind::aitchison_aitkin) {
        require(h[l] >= 0.0 && h[l] <= 0.5, errc::bandwidth_out_of_range,
                "aitchison kernel needs h in [0, 1/2]");
      } else {
        require(h[l] >= 0.0 && h[l] <= 1.0, errc::bandwidth_out_of_range,
                "wvr kernel needs h in [0, 1]");
        if (col.kind == ColumnKind::ordered && col.code_span <= 4096) {
          auto& tab = b.pow_h[l];
          tab.resize(col.code_span + 1);
          tab[0] = 1.0;
          for (std::size_t d = 1; d < tab.size(); ++d) tab[d] = tab[d - 1] * h[l];
        }
      }
    }
    return b;
  }

  //! Product weight of observation j against the row-i query.
  double pair_weight(const BoundBandwidths& b, std::size_t i, std::size_t j) const {
    double w = 1.0;
    const std::size_t n = ds_->n();
    for (std::size_t l = 0; l < cols_.size(); ++l) {
      const Col& col = cols_[l];
      switch (col.kind) {
        case ColumnKind::scalar: {
          double u = std::fabs(col.reals[i] - col.reals[j]) * b.inv_h[l];
          if (u > 1.0) return 0.0;
          w *= continuous_weight(col.spec.kind, u);
          break;
        }
        case ColumnKind::functional: {
          double d = ds_->has_distance_cache(l)
                         ? ds_->cached_distance(l, i, j)
                         : deriv_l2(ds_->derivative(l, i), ds_->derivative(l, j));
          double u = d * b.inv_h[l];
          if (u > 1.0) return 0.0;
          w *= continuous_weight(col.spec.kind, u);
          break;
        }
        default:
          w *= discrete_weight(col, b, l, col.codes[i], col.codes[j]);
          break;
      }
      if (w == 0.0) return 0.0;
    }
    (void)n;
    return w;
  }

  //! Query prepared once so repeated observation scans avoid re-deriving
  //! functional components.
  struct BoundQuery {
    std::vector<double> scalars;
    std::vector<long long> codes;
    std::vector<Curve> curve_derivs;
  };

  BoundQuery prepare(const Query& x) const {
    require(x.size() == cols_.size(), errc::dimension_mismatch,
            "query component count differs from regressor count");
    BoundQuery q;
    q.scalars.assign(cols_.size(), 0.0);
    q.codes.assign(cols_.size(), 0);
    q.curve_derivs.resize(cols_.size());
    for (std::size_t l = 0; l < cols_.size(); ++l) {
      switch (cols_[l].kind) {
        case ColumnKind::scalar:
          require(std::holds_alternative<double>(x[l]), errc::kind_mismatch,
                  "query component " + std::to_string(l) + " must be scalar");
          q.scalars[l] = std::get<double>(x[l]);
          break;
        case ColumnKind::functional:
          require(std::holds_alternative<Curve>(x[l]), errc::kind_mismatch,
                  "query component " + std::to_string(l) + " must be a curve");
          q.curve_derivs[l] = curve_derivative(std::get<Curve>(x[l]));
          break;
        default:
          require(std::holds_alternative<long long>(x[l]), errc::kind_mismatch,
                  "query component " + std::to_string(l) + " must be an integer code");
          q.codes[l] = std::get<long long>(x[l]);
          break;
      }
    }
    return q;
  }

  double query_weight(const BoundBandwidths& b, const BoundQuery& q, std::size_t j) const {
    double w = 1.0;
    for (std::size_t l = 0; l < cols_.size(); ++l) {
      const Col& col = cols_[l];
      switch (col.kind) {
        case ColumnKind::scalar: {
          double u = std::fabs(q.scalars[l] - col.reals[j]) * b.inv_h[l];
          if (u > 1.0) return 0.0;
          w *= continuous_weight(col.spec.kind, u);
          break;
        }
        case ColumnKind::functional: {
          double d = deriv_l2(q.curve_derivs[l], ds_->derivative(l, j));
          double u = d * b.inv_h[l];
          if (u > 1.0) return 0.0;
          w *= continuous_weight(col.spec.kind, u);
          break;
        }
        default:
          w *= discrete_weight(col, b, l, q.codes[l], col.codes[j]);
          break;
      }
      if (w == 0.0) return 0.0;
    }
    return w;
  }

  //! Index of the first scalar column (used as the scan window axis), or
  //! npos when there is none.
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t window_column() const {
    for (std::size_t l = 0; l < cols_.size(); ++l)
      if (cols_[l].kind == ColumnKind::scalar) return l;
    return npos;
  }

private:
  struct Col {
    ColumnKind kind = ColumnKind::scalar;
    KernelSpec spec;
    const double* reals = nullptr;
    const long long* codes = nullptr;
    std::size_t code_span = 0;
  };

  static double continuous_weight(KernelKind kind, double u) {
    // u is a nonnegative scaled distance already known to be <= 1.
    switch (kind) {
      case KernelKind::epanechnikov: return 0.75 * (1.0 - u * u);
      case KernelKind::uniform: return 0.5;
      case KernelKind::quartic: {
        double t = 1.0 - u * u;
        return 0.9375 * t * t;
      }
      default: return 1.0 - u * u;  // asym_quadratic
    }
  }

  double discrete_weight(const Col& col, const BoundBandwidths& b, std::size_t l,
                         long long ci, long long cj) const {
    double h = b.h[l];
    if (col.spec.kind == KernelKind::aitchison_aitkin) return ci == cj ? 1.0 - h : h;
    if (ci == cj) return 1.0 - h;
    std::size_t d = static_cast<std::size_t>(ci > cj ? ci - cj : cj - ci);
    const auto& tab = b.pow_h[l];
    double hp = (!tab.empty() && d < tab.size()) ? tab[d]
                                                 : std::pow(h, static_cast<double>(d));
    return 0.5 * (1.0 - h) * hp;
  }

  const Dataset* ds_;
  std::vector<KernelSpec> specs_;
  std::vector<Col> cols_;
};

//! Ascending index order of a scalar column, for windowed neighbor scans.
struct SortedAxis {
  std::vector<std::uint32_t> order;   // dataset indices sorted by value
  std::vector<double> sorted_values;  // values in that order

  static SortedAxis build(const RegressorColumn& c) {
    SortedAxis ax;
    const std::size_t n = c.reals.size();
    ax.order.resize(n);
    std::iota(ax.order.begin(), ax.order.end(), 0u);
    std::stable_sort(ax.order.begin(), ax.order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return c.reals[a] < c.reals[b]; });
    ax.sorted_values.resize(n);
    for (std::size_t k = 0; k < n; ++k) ax.sorted_values[k] = c.reals[ax.order[k]];
    return ax;
  }

  //! Half-open position range of sorted values within [lo, hi].
  std::pair<std::size_t, std::size_t> range(double lo, double hi) const {
    auto first = std::lower_bound(sorted_values.begin(), sorted_values.end(), lo);
    auto last = std::upper_bound(sorted_values.begin(), sorted_values.end(), hi);
    return {static_cast<std::size_t>(first - sorted_values.begin()),
            static_cast<std::size_t>(last - sorted_values.begin())};
  }
};

}  // namespace ssmooth::detail
