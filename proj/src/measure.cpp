#include "ssmooth/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ssmooth/stats.hpp"
#include "weight_engine.hpp"

namespace ssmooth {

namespace detail {

//! Orthogonal range counting over scalar columns.  Median-split tree with
//! subtree counts and per-node bounds; whole subtrees inside the query box
//! are counted without visiting points.
class KdIndex {
public:
  explicit KdIndex(const Dataset& ds) : q_(ds.q()) {
    const std::size_t n = ds.n();
    axis_values_.resize(q_);
    for (std::size_t l = 0; l < q_; ++l) axis_values_[l] = ds.column(l).reals.data();
    idx_.resize(n);
    std::iota(idx_.begin(), idx_.end(), 0u);
    nodes_.reserve(2 * n / kLeafSize + 4);
    root_ = build(0, n, 0);
  }

  std::size_t count(std::span<const double> lo_dist_center,
                    std::span<const double> h) const {
    // center/h formulation: point j is in iff |v_l - x_l| <= h_l for all l
    return count_node(root_, lo_dist_center, h);
  }

private:
  static constexpr std::size_t kLeafSize = 16;

  struct Node {
    double lo[3] = {0, 0, 0};  // per-axis bounds of the subtree (q <= capacity checked)
    double hi[3] = {0, 0, 0};
    std::size_t begin = 0, end = 0;  // range in idx_ for leaves
    int left = -1, right = -1;
    std::size_t size = 0;
  };

  int build(std::size_t begin, std::size_t end, std::size_t depth) {
    Node node;
    node.begin = begin;
    node.end = end;
    node.size = end - begin;
    for (std::size_t l = 0; l < q_; ++l) {
      double lo = axis_values_[l][idx_[begin]];
      double hi = lo;
      for (std::size_t k = begin + 1; k < end; ++k) {
        double v = axis_values_[l][idx_[k]];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      node.lo[l] = lo;
      node.hi[l] = hi;
    }
    int self = static_cast<int>(nodes_.size());
    nodes_.push_back(node);
    if (end - begin > kLeafSize) {
      std::size_t axis = depth % q_;
      std::size_t mid = begin + (end - begin) / 2;
      const double* vals = axis_values_[axis];
      std::nth_element(idx_.begin() + begin, idx_.begin() + mid, idx_.begin() + end,
                       [vals](std::uint32_t a, std::uint32_t b) { return vals[a] < vals[b]; });
      int left = build(begin, mid, depth + 1);
      int right = build(mid, end, depth + 1);
      nodes_[self].left = left;
      nodes_[self].right = right;
    }
    return self;
  }

  std::size_t count_node(int id, std::span<const double> x, std::span<const double> h) const {
    const Node& node = nodes_[id];
    bool fully_in = true;
    for (std::size_t l = 0; l < q_; ++l) {
      double dlo = node.lo[l] - x[l];
      double dhi = node.hi[l] - x[l];
      double dmin = (dlo <= 0.0 && dhi >= 0.0) ? 0.0 : std::min(std::fabs(dlo), std::fabs(dhi));
      double dmax = std::max(std::fabs(dlo), std::fabs(dhi));
      if (dmin > h[l]) return 0;
      if (dmax > h[l]) fully_in = false;
    }
    if (fully_in) return node.size;
    if (node.left < 0) {
      std::size_t c = 0;
      for (std::size_t k = node.begin; k < node.end; ++k) {
        std::uint32_t j = idx_[k];
        bool in = true;
        for (std::size_t l = 0; l < q_; ++l) {
          if (std::fabs(axis_values_[l][j] - x[l]) > h[l]) {
            in = false;
            break;
          }
        }
        if (in) ++c;
      }
      return c;
    }
    return count_node(node.left, x, h) + count_node(node.right, x, h);
  }

  std::size_t q_;
  std::vector<const double*> axis_values_;
  std::vector<std::uint32_t> idx_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace detail

namespace {

void check_h(const Dataset& ds, const Bandwidths& h) {
  require(h.size() == ds.q(), errc::dimension_mismatch, "bandwidth count differs from q");
  for (double v : h)
    require(v >= 0.0 && !std::isnan(v), errc::nonpositive_bandwidth,
            "cuboid bandwidth must be nonnegative");
}

//! Distance of query component x to observation i, with discrete components
//! mapped to |code difference| (ordered) or a 0/1 mismatch indicator
//! (categorical) so that cuboid counting covers mixed data.
double cube_component_distance(const Dataset& ds, std::size_t l, std::size_t i,
                               const Value& x, const Curve* query_deriv) {
  const RegressorColumn& c = ds.column(l);
  switch (c.kind) {
    case ColumnKind::scalar:
      return std::fabs(std::get<double>(x) - c.reals[i]);
    case ColumnKind::functional:
      return detail::deriv_l2(*query_deriv, ds.derivative(l, i));
    case ColumnKind::ordered: {
      long long d = std::get<long long>(x) - c.codes[i];
      return static_cast<double>(d < 0 ? -d : d);
    }
    default:
      return std::get<long long>(x) == c.codes[i] ? 0.0 : 1.0;
  }
}

std::size_t linear_count(const Dataset& ds, const Query& x, const Bandwidths& h) {
  // Pre-derive functional query components once.
  std::vector<Curve> qderivs(ds.q());
  for (std::size_t l = 0; l < ds.q(); ++l)
    if (ds.column(l).kind == ColumnKind::functional)
      qderivs[l] = curve_derivative(std::get<Curve>(x[l]));
  std::size_t count = 0;
  for (std::size_t i = 0; i < ds.n(); ++i) {
    bool in = true;
    for (std::size_t l = 0; l < ds.q(); ++l) {
      if (cube_component_distance(ds, l, i, x[l], &qderivs[l]) > h[l]) {
        in = false;
        break;
      }
    }
    if (in) ++count;
  }
  return count;
}

}  // namespace

CubeCounter::CubeCounter(const Dataset& ds) : ds_(&ds) {
  if (ds.all_scalar() && ds.q() >= 1 && ds.q() <= 3)
    kd_ = std::make_unique<detail::KdIndex>(ds);
}

CubeCounter::~CubeCounter() = default;
CubeCounter::CubeCounter(CubeCounter&&) noexcept = default;
CubeCounter& CubeCounter::operator=(CubeCounter&&) noexcept = default;

CubeProbe CubeCounter::probe(const Query& x, const Bandwidths& h) const {
  check_h(*ds_, h);
  CubeProbe out;
  if (kd_) {
    std::vector<double> xv(ds_->q());
    for (std::size_t l = 0; l < ds_->q(); ++l) xv[l] = std::get<double>(x[l]);
    out.count = kd_->count(xv, h);
  } else {
    out.count = linear_count(*ds_, x, h);
  }
  out.p_hat = static_cast<double>(out.count) / static_cast<double>(ds_->n());
  return out;
}

CubeProbe cube_probability(const Dataset& ds, const Query& x, const Bandwidths& h) {
  check_h(ds, h);
  CubeProbe out;
  out.count = linear_count(ds, x, h);
  out.p_hat = static_cast<double>(out.count) / static_cast<double>(ds.n());
  return out;
}

std::optional<double> doubling_ratio(const Dataset& ds, const Query& x, const Bandwidths& h,
                                     double eps) {
  require(eps > 0.0 && eps < 1.0, errc::invalid_argument, "doubling_ratio: eps in (0,1)");
  Bandwidths inner(h);
  for (double& v : inner) v *= eps;
  CubeProbe outer = cube_probability(ds, x, h);
  CubeProbe shrunk = cube_probability(ds, x, inner);
  if (shrunk.count == 0) return std::nullopt;
  return outer.p_hat / shrunk.p_hat;
}

double ahlfors_exponent(const Dataset& ds, const Query& x, const Bandwidths& h_base,
                        std::span<const double> multipliers) {
  check_h(ds, h_base);
  require(multipliers.size() >= 3, errc::insufficient_levels,
          "ahlfors_exponent: need at least 3 ladder levels");
  double hbar = 0.0;
  for (double v : h_base) hbar = std::max(hbar, v);
  require(hbar > 0.0, errc::nonpositive_bandwidth, "ahlfors_exponent: zero base bandwidth");
  CubeCounter counter(ds);
  std::vector<double> log_h, log_p;
  for (double mult : multipliers) {
    require(mult > 0.0, errc::invalid_argument, "ahlfors_exponent: multipliers must be > 0");
    Bandwidths h(h_base);
    for (double& v : h) v *= mult;
    CubeProbe pr = counter.probe(x, h);
    if (pr.count == 0) continue;
    log_h.push_back(std::log(mult * hbar));
    log_p.push_back(std::log(pr.p_hat));
  }
  require(log_h.size() >= 3, errc::insufficient_levels,
          "ahlfors_exponent: fewer than 3 levels have observations");
  OlsLine line = ols_line(log_h, log_p);
  return line.slope / static_cast<double>(ds.q());
}

namespace {

constexpr int kOracleGridPoints = 33;

void check_oracle_args(const Dataset& ds, const Query& x, const Bandwidths& h, int m) {
  require(ds.q() <= 3, errc::dimension_too_high, "moment quadrature limited to q <= 3");
  require(x.size() == ds.q(), errc::dimension_mismatch, "query size differs from q");
  check_h(ds, h);
  require(m >= 1, errc::invalid_argument, "moment power must be >= 1");
}

}  // namespace

double moment_oracle(const Dataset& ds, KernelSpec spec, const Query& x, const Bandwidths& h,
                     int m) {
  check_oracle_args(ds, x, h, m);
  require(spec.is_continuous(), errc::not_applicable, "moment_oracle: discrete kernel");
  require(vanishes_at_boundary(spec), errc::kernel_not_zero_at_boundary,
          "moment_oracle: kernel must vanish on its support boundary");
  const std::size_t q = ds.q();
  CubeCounter counter(ds);

  // Per-axis grid over [0,1] and trapezoid weights.
  std::vector<double> grid(kOracleGridPoints), wq(kOracleGridPoints);
  for (int k = 0; k < kOracleGridPoints; ++k) {
    grid[k] = static_cast<double>(k) / (kOracleGridPoints - 1);
    wq[k] = (k == 0 || k == kOracleGridPoints - 1) ? 0.5 : 1.0;
  }
  const double cell = 1.0 / (kOracleGridPoints - 1);

  double acc = 0.0;
  std::vector<int> iv(q, 0);
  Bandwidths hv(q, 0.0);
  while (true) {
    double deriv_prod = 1.0;
    double wprod = 1.0;
    for (std::size_t l = 0; l < q; ++l) {
      double v = grid[iv[l]];
      deriv_prod *= -pow_derivative(spec, v, m);  // (-1)^q times the mixed partial
      wprod *= wq[iv[l]] * cell;
      hv[l] = h[l] * v;
    }
    if (deriv_prod != 0.0) {
      CubeProbe pr = counter.probe(x, hv);
      acc += pr.p_hat * deriv_prod * wprod;
    }
    std::size_t l = 0;
    for (; l < q; ++l) {
      if (++iv[l] < kOracleGridPoints) break;
      iv[l] = 0;
    }
    if (l == q) break;
  }
  return acc;
}

std::pair<double, double> moment_bounds(const Dataset& ds, KernelSpec spec, const Query& x,
                                        const Bandwidths& h, int m, double eps) {
  check_oracle_args(ds, x, h, m);
  require(spec.is_continuous(), errc::not_applicable, "moment_bounds: discrete kernel");
  require(eps > 0.0 && eps < 1.0, errc::invalid_argument, "moment_bounds: eps in (0,1)");
  const double q = static_cast<double>(ds.q());
  CubeProbe pr = cube_probability(ds, x, h);
  if (pr.count == 0) return {0.0, 0.0};

  const double k0 = std::pow(eval_univariate(spec, 0.0), m);
  const double k1 = std::pow(eval_univariate(spec, 1.0), m);
  const double keps = std::pow(eval_univariate(spec, eps), m);

  // Per-axis total variation of K^m on [0,1] is k0 - k1 (monotone kernels);
  // the boundary trace contributes k1.  The extremal subset is all-axes or
  // no-axes, so the constant reduces to max of the two.
  const double upper_const = std::pow(2.0, q) * std::pow(std::max(k0 - k1, k1), q);

  double lower_const = 0.0;
  Bandwidths inner(h);
  for (double& v : inner) v *= eps;
  CubeProbe inner_pr = cube_probability(ds, x, inner);
  if (inner_pr.count > 0) {
    double c_eps = pr.p_hat / inner_pr.p_hat;
    lower_const = std::max(lower_const, std::pow(keps - k1, q) / c_eps);
  }
  if (is_type_one(spec)) lower_const = std::max(lower_const, std::pow(k1, q));

  return {lower_const * pr.p_hat, upper_const * pr.p_hat};
}

double bbar_ratio(const Dataset& ds, const Query& x, const Bandwidths& h,
                  std::span<const KernelSpec> specs, int s) {
  require(s == 1 || s == 2, errc::invalid_argument, "bbar_ratio: s must be 1 or 2");
  require(specs.size() == ds.q(), errc::dimension_mismatch, "bbar_ratio: spec count");
  check_h(ds, h);
  // Membership and weights come from the same distance pass so the in-cuboid
  // set is identical to cube_probability's.
  std::vector<Curve> qderivs(ds.q());
  for (std::size_t l = 0; l < ds.q(); ++l)
    if (ds.column(l).kind == ColumnKind::functional)
      qderivs[l] = curve_derivative(std::get<Curve>(x[l]));
  std::size_t count = 0;
  double acc = 0.0;
  for (std::size_t i = 0; i < ds.n(); ++i) {
    bool in = true;
    double w = 1.0;
    for (std::size_t l = 0; l < ds.q(); ++l) {
      double d = cube_component_distance(ds, l, i, x[l], &qderivs[l]);
      if (d > h[l]) {
        in = false;
        break;
      }
      if (specs[l].is_discrete()) {
        w *= eval_discrete(specs[l], h[l] <= 1.0 ? h[l] : 1.0, std::get<long long>(x[l]),
                           ds.column(l).codes[i]);
      } else {
        double u = std::isinf(h[l]) ? 0.0 : std::min(d / h[l], 1.0);
        w *= eval_univariate(specs[l], u);
      }
    }
    if (!in) continue;
    ++count;
    acc += s == 1 ? w : w * w;
  }
  require(count > 0, errc::empty_cuboid, "bbar_ratio: empty cuboid");
  return acc / static_cast<double>(count);
}

}  // namespace ssmooth
