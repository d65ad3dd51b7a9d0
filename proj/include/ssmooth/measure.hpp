#pragma once

#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ssmooth/kernels.hpp"
#include "ssmooth/spaces.hpp"

namespace ssmooth {

//! Empirical probe of the bandwidth cuboid around a query point.
struct CubeProbe {
  std::size_t count = 0;
  double p_hat = 0.0;  // count / n
};

namespace detail {
class KdIndex;
}

//! Repeated-probe counter over one dataset.  For all-scalar data an
//! orthogonal range-counting kd-tree is built once; anything else falls back
//! to a linear scan over component distances.  Counts agree exactly with the
//! scan in either mode.  Immutable after construction, safe to share across
//! threads.
class CubeCounter {
public:
  explicit CubeCounter(const Dataset& ds);
  ~CubeCounter();
  CubeCounter(CubeCounter&&) noexcept;
  CubeCounter& operator=(CubeCounter&&) noexcept;

  CubeProbe probe(const Query& x, const Bandwidths& h) const;

  const Dataset& dataset() const { return *ds_; }

private:
  const Dataset* ds_;
  std::unique_ptr<detail::KdIndex> kd_;
};

//! One-off probe: a plain linear scan.  Build a CubeCounter instead when the
//! same dataset is probed many times.
CubeProbe cube_probability(const Dataset& ds, const Query& x, const Bandwidths& h);

//! p(C(x,h)) / p(C(x, eps*h)); empty when the inner cuboid has no
//! observations.
std::optional<double> doubling_ratio(const Dataset& ds, const Query& x, const Bandwidths& h,
                                     double eps);

//! Local decay exponent of the cuboid probability: least-squares slope of
//! log p against log(max bandwidth) over a shrinking ladder, divided by q.
//! Ladder entries with empty cuboids are dropped; at least 3 usable levels
//! are required.
double ahlfors_exponent(const Dataset& ds, const Query& x, const Bandwidths& h_base,
                        std::span<const double> multipliers);

//! Quadrature estimate of E[K^m(scaled distances)] from cuboid probabilities
//! alone: integrates the empirical cuboid probability against the signed
//! mixed derivative of the kernel power over the unit box.  Requires a
//! kernel that vanishes on its support boundary and q <= 3.
double moment_oracle(const Dataset& ds, KernelSpec spec, const Query& x, const Bandwidths& h,
                     int m);

//! Lower/upper envelope for the same moment: U from the total-variation
//! constant, L from the best of the empirical-doubling route and the
//! boundary-value route (type-I kernels).  Both already scaled by p_hat.
std::pair<double, double> moment_bounds(const Dataset& ds, KernelSpec spec, const Query& x,
                                        const Bandwidths& h, int m, double eps);

//! Sample mean of K^s over the cuboid divided by the cuboid probability;
//! plug-in ingredient for the asymptotic variance.
double bbar_ratio(const Dataset& ds, const Query& x, const Bandwidths& h,
                  std::span<const KernelSpec> specs, int s);

}  // namespace ssmooth
