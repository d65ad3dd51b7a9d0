#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ssmooth/kernels.hpp"
#include "ssmooth/spaces.hpp"

namespace ssmooth {

//! Pointwise Nadaraya-Watson result.  numerator/denominator carry the 1/n
//! normalization; estimate = numerator / denominator.  A fit only exists
//! when at least one observation has positive weight, so callers receive
//! std::nullopt (never NaN) for no-neighbor queries.
struct FitPoint {
  double estimate = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
  std::size_t neighbors = 0;
  std::optional<double> variance;  // plug-in variance, filled by inference
};

using FitResult = std::optional<FitPoint>;

//! Unnormalized kernel weights K(W_i(x)) of every observation against x.
std::vector<double> nw_weights(const Dataset& ds, const Query& x, const Bandwidths& h,
                               std::span<const KernelSpec> specs);

FitResult nw_fit(const Dataset& ds, const Query& x, const Bandwidths& h,
                 std::span<const KernelSpec> specs);

//! Fit with per-observation bandwidth vectors (sample-point adaptive form).
FitResult nw_fit_adaptive(const Dataset& ds, const Query& x,
                          std::span<const Bandwidths> per_obs_h,
                          std::span<const KernelSpec> specs);

//! Leave-one-out prediction at observation i.
std::optional<double> loo_predict(const Dataset& ds, std::size_t i, const Bandwidths& h,
                                  std::span<const KernelSpec> specs);

//! Batch of fits; queries are independent and evaluated in parallel with a
//! deterministic output order.
std::vector<FitResult> nw_fit_batch(const Dataset& ds, std::span<const Query> queries,
                                    const Bandwidths& h, std::span<const KernelSpec> specs);

}  // namespace ssmooth
