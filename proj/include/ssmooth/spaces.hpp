#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ssmooth/errors.hpp"

namespace ssmooth {

//! Sampled curve on a strictly increasing abscissa grid.  Every curve in a
//! functional column shares one grid object.
struct Curve {
  std::shared_ptr<const std::vector<double>> grid;
  std::vector<double> values;

  std::size_t points() const { return values.size(); }
};

std::shared_ptr<const std::vector<double>> make_uniform_grid(double lo, double hi,
                                                             std::size_t points);

//! Finite-difference derivative: central in the interior, one-sided at the
//! two endpoints, on the same grid.
Curve curve_derivative(const Curve& c);

//! L2 distance between curve derivatives, sqrt of a trapezoid-rule integral.
//! A semi-metric: curves differing by a constant are at distance zero.
double semi_metric_deriv_l2(const Curve& a, const Curve& b);

namespace detail {
//! Same integral on curves that are already derivatives (no re-differentiation).
double deriv_l2(const Curve& da, const Curve& db);
}  // namespace detail

enum class ColumnKind : std::uint8_t { scalar, ordered, categorical, functional };

ColumnKind column_kind_from_name(const std::string& name);
std::string column_kind_name(ColumnKind kind);

struct RegressorColumn {
  ColumnKind kind = ColumnKind::scalar;
  std::string name;
  std::vector<double> reals;     // scalar
  std::vector<long long> codes;  // ordered / categorical
  std::vector<Curve> curves;     // functional

  std::size_t size() const {
    switch (kind) {
      case ColumnKind::scalar: return reals.size();
      case ColumnKind::functional: return curves.size();
      default: return codes.size();
    }
  }

  static RegressorColumn scalar_column(std::string name, std::vector<double> v);
  static RegressorColumn ordered_column(std::string name, std::vector<long long> v);
  static RegressorColumn categorical_column(std::string name, std::vector<long long> v);
  static RegressorColumn functional_column(std::string name, std::vector<Curve> v);
};

//! One query-point component; matches the column kind positionally.
using Value = std::variant<double, long long, Curve>;
using Query = std::vector<Value>;

//! One positive extended-real bandwidth per regressor; +inf smooths the
//! regressor out entirely.
using Bandwidths = std::vector<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

//! Immutable sample: response vector plus typed regressor columns.
//! Functional columns get their derivative curves (and, at moderate n, the
//! pairwise semi-metric distances) precomputed at construction so that
//! leave-one-out scans do not repeat quadrature; the cached distances are
//! bitwise identical to what semi_metric_deriv_l2 returns.
class Dataset {
public:
  Dataset(std::vector<double> y, std::vector<RegressorColumn> columns);

  std::size_t n() const { return y_.size(); }
  std::size_t q() const { return columns_.size(); }
  const std::vector<double>& y() const { return y_; }
  const RegressorColumn& column(std::size_t l) const { return columns_[l]; }
  const std::vector<RegressorColumn>& columns() const { return columns_; }

  //! Derivative curve of observation i in functional column l.
  const Curve& derivative(std::size_t l, std::size_t i) const;

  //! Cached pairwise semi-metric distance, or -1 when no cache was built.
  double cached_distance(std::size_t l, std::size_t i, std::size_t j) const;
  bool has_distance_cache(std::size_t l) const;

  bool all_scalar() const;

  //! Query assembled from row i's components.
  Query row_query(std::size_t i) const;

  //! Dataset restricted to the given rows (in the given order).
  Dataset subset(std::span<const std::size_t> rows) const;

private:
  std::vector<double> y_;
  std::vector<RegressorColumn> columns_;
  struct FunctionalCache {
    std::vector<Curve> derivatives;
    std::vector<double> pairwise;  // row-major n*n, empty when not built
  };
  std::vector<FunctionalCache> fcache_;  // index-aligned with columns_
};

//! Distance between a query component and observation i of a column.
//! Scalar -> |x - X_i|; functional -> derivative-L2 semi-metric; discrete
//! kinds have no scaled distance (their kernels consume the code pair), so
//! asking for one is a kind error.
double component_distance(const Dataset& ds, std::size_t l, std::size_t i, const Value& x);

//! Symmetric form on two raw values of matching type.
double value_distance(ColumnKind kind, const Value& a, const Value& b);

//! Component-wise scaled distances dist_l / h_l for observation i against
//! a query; infinite bandwidth maps to 0.  Discrete components are reported
//! as the already-evaluated |code difference| is not meaningful here, so the
//! vector is only defined for datasets without discrete columns.
std::vector<double> scaled_distance_vector(const Dataset& ds, std::size_t i, const Query& x,
                                           const Bandwidths& h);

}  // namespace ssmooth
