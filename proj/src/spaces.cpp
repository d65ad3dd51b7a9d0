#include "ssmooth/spaces.hpp"

#include <algorithm>
#include <cmath>

namespace ssmooth {

std::shared_ptr<const std::vector<double>> make_uniform_grid(double lo, double hi,
                                                             std::size_t points) {
  require(points >= 3, errc::grid_too_short, "grid needs at least 3 points");
  require(hi > lo, errc::invalid_argument, "grid bounds inverted");
  auto g = std::make_shared<std::vector<double>>(points);
  double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t k = 0; k < points; ++k) (*g)[k] = lo + step * static_cast<double>(k);
  (*g)[points - 1] = hi;
  return g;
}

Curve curve_derivative(const Curve& c) {
  const std::size_t g = c.points();
  require(g >= 3, errc::grid_too_short, "curve_derivative: need at least 3 grid points");
  require(c.grid && c.grid->size() == g, errc::grid_mismatch,
          "curve_derivative: grid/value length mismatch");
  const std::vector<double>& t = *c.grid;
  Curve out;
  out.grid = c.grid;
  out.values.resize(g);
  out.values[0] = (c.values[1] - c.values[0]) / (t[1] - t[0]);
  for (std::size_t k = 1; k + 1 < g; ++k)
    out.values[k] = (c.values[k + 1] - c.values[k - 1]) / (t[k + 1] - t[k - 1]);
  out.values[g - 1] = (c.values[g - 1] - c.values[g - 2]) / (t[g - 1] - t[g - 2]);
  return out;
}

namespace {

bool same_grid(const Curve& a, const Curve& b) {
  if (a.grid == b.grid) return a.values.size() == b.values.size();
  if (!a.grid || !b.grid || a.grid->size() != b.grid->size()) return false;
  return *a.grid == *b.grid;
}

}  // namespace

namespace detail {

double deriv_l2(const Curve& da, const Curve& db) {
  const std::vector<double>& t = *da.grid;
  const std::size_t g = da.points();
  double acc = 0.0;
  for (std::size_t k = 0; k + 1 < g; ++k) {
    double d0 = da.values[k] - db.values[k];
    double d1 = da.values[k + 1] - db.values[k + 1];
    acc += 0.5 * (d0 * d0 + d1 * d1) * (t[k + 1] - t[k]);
  }
  return std::sqrt(acc);
}

}  // namespace detail

double semi_metric_deriv_l2(const Curve& a, const Curve& b) {
  require(same_grid(a, b), errc::grid_mismatch, "semi_metric_deriv_l2: grids differ");
  Curve da = curve_derivative(a);
  Curve db = curve_derivative(b);
  return detail::deriv_l2(da, db);
}

ColumnKind column_kind_from_name(const std::string& name) {
  if (name == "scalar") return ColumnKind::scalar;
  if (name == "ordered") return ColumnKind::ordered;
  if (name == "categorical") return ColumnKind::categorical;
  if (name == "functional") return ColumnKind::functional;
  fail(errc::invalid_argument, "unknown column kind: " + name);
}

std::string column_kind_name(ColumnKind kind) {
  switch (kind) {
    case ColumnKind::scalar: return "scalar";
    case ColumnKind::ordered: return "ordered";
    case ColumnKind::categorical: return "categorical";
    case ColumnKind::functional: return "functional";
  }
  return "?";
}

RegressorColumn RegressorColumn::scalar_column(std::string name, std::vector<double> v) {
  RegressorColumn c;
  c.kind = ColumnKind::scalar;
  c.name = std::move(name);
  c.reals = std::move(v);
  return c;
}

RegressorColumn RegressorColumn::ordered_column(std::string name, std::vector<long long> v) {
  RegressorColumn c;
  c.kind = ColumnKind::ordered;
  c.name = std::move(name);
  c.codes = std::move(v);
  return c;
}

RegressorColumn RegressorColumn::categorical_column(std::string name,
                                                    std::vector<long long> v) {
  RegressorColumn c;
  c.kind = ColumnKind::categorical;
  c.name = std::move(name);
  c.codes = std::move(v);
  return c;
}

RegressorColumn RegressorColumn::functional_column(std::string name, std::vector<Curve> v) {
  RegressorColumn c;
  c.kind = ColumnKind::functional;
  c.name = std::move(name);
  c.curves = std::move(v);
  return c;
}

namespace {
// Pairwise caches beyond this row count would dominate memory; functional
// samples in practice stay far below it.
constexpr std::size_t kMaxPairwiseCacheRows = 4096;
}  // namespace

Dataset::Dataset(std::vector<double> y, std::vector<RegressorColumn> columns)
    : y_(std::move(y)), columns_(std::move(columns)) {
  require(!y_.empty(), errc::invalid_argument, "Dataset: empty response");
  for (const auto& c : columns_) {
    require(c.size() == y_.size(), errc::dimension_mismatch,
            "Dataset: column '" + c.name + "' length differs from response");
    if (c.kind == ColumnKind::ordered || c.kind == ColumnKind::categorical) {
      for (long long code : c.codes)
        require(code >= 0, errc::invalid_argument,
                "Dataset: negative code in column '" + c.name + "'");
    }
  }
  fcache_.resize(columns_.size());
  const std::size_t n = y_.size();
  for (std::size_t l = 0; l < columns_.size(); ++l) {
    if (columns_[l].kind != ColumnKind::functional) continue;
    const auto& curves = columns_[l].curves;
    for (std::size_t i = 1; i < n; ++i)
      require(same_grid(curves[i], curves[0]), errc::grid_mismatch,
              "Dataset: curves in column '" + columns_[l].name + "' have differing grids");
    auto& fc = fcache_[l];
    fc.derivatives.reserve(n);
    for (std::size_t i = 0; i < n; ++i) fc.derivatives.push_back(curve_derivative(curves[i]));
    if (n <= kMaxPairwiseCacheRows) {
      fc.pairwise.assign(n * n, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          double d = deriv_l2(fc.derivatives[i], fc.derivatives[j]);
          fc.pairwise[i * n + j] = d;
          fc.pairwise[j * n + i] = d;
        }
      }
    }
  }
}

const Curve& Dataset::derivative(std::size_t l, std::size_t i) const {
  require(columns_[l].kind == ColumnKind::functional, errc::kind_mismatch,
          "Dataset::derivative: not a functional column");
  return fcache_[l].derivatives[i];
}

double Dataset::cached_distance(std::size_t l, std::size_t i, std::size_t j) const {
  const auto& pw = fcache_[l].pairwise;
  if (pw.empty()) return -1.0;
  return pw[i * n() + j];
}

bool Dataset::has_distance_cache(std::size_t l) const { return !fcache_[l].pairwise.empty(); }

bool Dataset::all_scalar() const {
  for (const auto& c : columns_)
    if (c.kind != ColumnKind::scalar) return false;
  return true;
}

Query Dataset::row_query(std::size_t i) const {
  Query x;
  x.reserve(q());
  for (const auto& c : columns_) {
    switch (c.kind) {
      case ColumnKind::scalar: x.emplace_back(c.reals[i]); break;
      case ColumnKind::functional: x.emplace_back(c.curves[i]); break;
      default: x.emplace_back(c.codes[i]); break;
    }
  }
  return x;
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  std::vector<double> y2;
  y2.reserve(rows.size());
  for (std::size_t r : rows) y2.push_back(y_[r]);
  std::vector<RegressorColumn> cols2;
  cols2.reserve(columns_.size());
  for (const auto& c : columns_) {
    RegressorColumn c2;
    c2.kind = c.kind;
    c2.name = c.name;
    switch (c.kind) {
      case ColumnKind::scalar:
        c2.reals.reserve(rows.size());
        for (std::size_t r : rows) c2.reals.push_back(c.reals[r]);
        break;
      case ColumnKind::functional:
        c2.curves.reserve(rows.size());
        for (std::size_t r : rows) c2.curves.push_back(c.curves[r]);
        break;
      default:
        c2.codes.reserve(rows.size());
        for (std::size_t r : rows) c2.codes.push_back(c.codes[r]);
        break;
    }
    cols2.push_back(std::move(c2));
  }
  return Dataset(std::move(y2), std::move(cols2));
}

double value_distance(ColumnKind kind, const Value& a, const Value& b) {
  switch (kind) {
    case ColumnKind::scalar: {
      require(std::holds_alternative<double>(a) && std::holds_alternative<double>(b),
              errc::kind_mismatch, "value_distance: expected scalar values");
      return std::fabs(std::get<double>(a) - std::get<double>(b));
    }
    case ColumnKind::functional: {
      require(std::holds_alternative<Curve>(a) && std::holds_alternative<Curve>(b),
              errc::kind_mismatch, "value_distance: expected curves");
      return semi_metric_deriv_l2(std::get<Curve>(a), std::get<Curve>(b));
    }
    default:
      fail(errc::kind_mismatch,
           "value_distance: discrete components carry no scaled distance");
  }
}

double component_distance(const Dataset& ds, std::size_t l, std::size_t i, const Value& x) {
  const RegressorColumn& c = ds.column(l);
  switch (c.kind) {
    case ColumnKind::scalar:
      require(std::holds_alternative<double>(x), errc::kind_mismatch,
              "component_distance: scalar column needs a scalar query value");
      return std::fabs(std::get<double>(x) - c.reals[i]);
    case ColumnKind::functional: {
      require(std::holds_alternative<Curve>(x), errc::kind_mismatch,
              "component_distance: functional column needs a curve query value");
      return semi_metric_deriv_l2(std::get<Curve>(x), c.curves[i]);
    }
    default:
      fail(errc::kind_mismatch,
           "component_distance: discrete components resolve inside discrete kernels");
  }
}

std::vector<double> scaled_distance_vector(const Dataset& ds, std::size_t i, const Query& x,
                                           const Bandwidths& h) {
  require(x.size() == ds.q() && h.size() == ds.q(), errc::dimension_mismatch,
          "scaled_distance_vector: dimension mismatch");
  std::vector<double> w(ds.q(), 0.0);
  for (std::size_t l = 0; l < ds.q(); ++l) {
    require(h[l] > 0.0, errc::nonpositive_bandwidth,
            "scaled_distance_vector: bandwidth must be positive");
    double d = component_distance(ds, l, i, x[l]);
    w[l] = std::isinf(h[l]) ? 0.0 : d / h[l];
  }
  return w;
}

}  // namespace ssmooth
