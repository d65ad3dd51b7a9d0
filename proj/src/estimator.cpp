#include "ssmooth/estimator.hpp"

#include "weight_engine.hpp"

namespace ssmooth {

namespace {

FitResult fit_from_weights(const Dataset& ds, std::span<const double> w) {
  double sw = 0.0, swy = 0.0;
  std::size_t neighbors = 0;
  const auto& y = ds.y();
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (w[j] > 0.0) {
      sw += w[j];
      swy += w[j] * y[j];
      ++neighbors;
    }
  }
  if (neighbors == 0) return std::nullopt;
  FitPoint fp;
  const double n = static_cast<double>(ds.n());
  fp.numerator = swy / n;
  fp.denominator = sw / n;
  fp.estimate = swy / sw;
  fp.neighbors = neighbors;
  return fp;
}

}  // namespace

std::vector<double> nw_weights(const Dataset& ds, const Query& x, const Bandwidths& h,
                               std::span<const KernelSpec> specs) {
  detail::WeightEngine engine(ds, specs);
  auto b = engine.bind(h);
  auto q = engine.prepare(x);
  std::vector<double> w(ds.n());
  for (std::size_t j = 0; j < ds.n(); ++j) w[j] = engine.query_weight(b, q, j);
  return w;
}

FitResult nw_fit(const Dataset& ds, const Query& x, const Bandwidths& h,
                 std::span<const KernelSpec> specs) {
  std::vector<double> w = nw_weights(ds, x, h, specs);
  return fit_from_weights(ds, w);
}

FitResult nw_fit_adaptive(const Dataset& ds, const Query& x,
                          std::span<const Bandwidths> per_obs_h,
                          std::span<const KernelSpec> specs) {
  require(per_obs_h.size() == ds.n(), errc::dimension_mismatch,
          "nw_fit_adaptive: need one bandwidth vector per observation");
  detail::WeightEngine engine(ds, specs);
  auto q = engine.prepare(x);
  std::vector<double> w(ds.n());
  for (std::size_t j = 0; j < ds.n(); ++j) {
    auto b = engine.bind(per_obs_h[j]);
    w[j] = engine.query_weight(b, q, j);
  }
  return fit_from_weights(ds, w);
}

std::optional<double> loo_predict(const Dataset& ds, std::size_t i, const Bandwidths& h,
                                  std::span<const KernelSpec> specs) {
  require(ds.n() >= 2, errc::invalid_argument, "loo_predict: need at least 2 observations");
  detail::WeightEngine engine(ds, specs);
  auto b = engine.bind(h);
  double sw = 0.0, swy = 0.0;
  const auto& y = ds.y();
  for (std::size_t j = 0; j < ds.n(); ++j) {
    if (j == i) continue;
    double w = engine.pair_weight(b, i, j);
    if (w > 0.0) {
      sw += w;
      swy += w * y[j];
    }
  }
  if (sw <= 0.0) return std::nullopt;
  return swy / sw;
}

std::vector<FitResult> nw_fit_batch(const Dataset& ds, std::span<const Query> queries,
                                    const Bandwidths& h, std::span<const KernelSpec> specs) {
  detail::WeightEngine engine(ds, specs);
  auto b = engine.bind(h);
  std::vector<FitResult> out(queries.size());
#pragma omp parallel for schedule(dynamic)
  for (long long k = 0; k < static_cast<long long>(queries.size()); ++k) {
    auto q = engine.prepare(queries[k]);
    double sw = 0.0, swy = 0.0;
    std::size_t neighbors = 0;
    const auto& y = ds.y();
    for (std::size_t j = 0; j < ds.n(); ++j) {
      double w = engine.query_weight(b, q, j);
      if (w > 0.0) {
        sw += w;
        swy += w * y[j];
        ++neighbors;
      }
    }
    if (neighbors == 0) {
      out[k] = std::nullopt;
    } else {
      FitPoint fp;
      const double n = static_cast<double>(ds.n());
      fp.numerator = swy / n;
      fp.denominator = sw / n;
      fp.estimate = swy / sw;
      fp.neighbors = neighbors;
      out[k] = fp;
    }
  }
  return out;
}

}  // namespace ssmooth
