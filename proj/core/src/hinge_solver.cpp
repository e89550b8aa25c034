#include "mmdt/hinge_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <type_traits>

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include "mmdt/error.hpp"

namespace mmdt::hinge {

double hinge_loss(int y, int k, double score) {
  return std::max(0.0, 1.0 - class_sign(y, k) * score);
}

namespace {

Eigen::Index storage_size(const ExampleStorage& s) {
  return std::visit([](const auto& p) { return p ? p->size() : Eigen::Index{0}; }, s);
}

Eigen::Index storage_dimension(const ExampleStorage& s) {
  return std::visit([](const auto& p) { return p ? p->dimension() : Eigen::Index{0}; }, s);
}

}  // namespace

HingeProblem::HingeProblem(ExampleStorage examples, std::vector<double> signs,
                           std::vector<double> weights, bool fit_bias, std::vector<double> offsets,
                           std::vector<double> bias_coefficients)
    : examples_(std::move(examples)),
      signs_(std::move(signs)),
      weights_(std::move(weights)),
      offsets_(std::move(offsets)),
      bias_coefficients_(std::move(bias_coefficients)),
      fit_bias_(fit_bias),
      num_examples_(storage_size(examples_)),
      dimension_(storage_dimension(examples_)) {
  if (std::visit([](const auto& p) { return p == nullptr; }, examples_)) {
    throw ValidationError("hinge problem: missing examples");
  }
  if (num_examples_ < 1) throw ValidationError("hinge problem: needs at least one example");
  const auto m = static_cast<std::size_t>(num_examples_);
  if (signs_.size() != m || weights_.size() != m) {
    throw ValidationError("hinge problem: signs/weights length must equal the number of examples");
  }
  if (offsets_.empty()) offsets_.assign(m, 0.0);
  if (offsets_.size() != m) throw ValidationError("hinge problem: offsets length mismatch");
  if (bias_coefficients_.empty()) bias_coefficients_.assign(m, 1.0);
  if (bias_coefficients_.size() != m) throw ValidationError("hinge problem: bias coefficients length mismatch");
  for (std::size_t i = 0; i < m; ++i) {
    if (signs_[i] != 1.0 && signs_[i] != -1.0) throw ValidationError("hinge problem: signs must be +1 or -1");
    if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i])) {
      throw ValidationError("hinge problem: weights must be positive and finite");
    }
    if (!std::isfinite(offsets_[i]) || !std::isfinite(bias_coefficients_[i])) {
      throw ValidationError("hinge problem: non-finite offset or bias coefficient");
    }
  }
  const bool finite = std::visit(
      [](const auto& p) {
        if constexpr (std::is_same_v<std::decay_t<decltype(*p)>, DenseExamples>) {
          return p->rows.allFinite();
        } else {
          return p->left.allFinite() && p->right.allFinite();
        }
      },
      examples_);
  if (!finite) throw ValidationError("hinge problem: non-finite example entries");
}

HingeProblem::HingeProblem(RowMatrix examples, std::vector<double> signs, std::vector<double> weights,
                           bool fit_bias)
    : HingeProblem(ExampleStorage(std::make_shared<const DenseExamples>(std::move(examples))),
                   std::move(signs), std::move(weights), fit_bias) {}

namespace {

// Public-facing access to the two example layouts. `w` has length p.
struct DenseOps {
  const DenseExamples& ex;

  Eigen::VectorXd scores(const Eigen::Ref<const Eigen::VectorXd>& w) const { return ex.rows * w; }
  Eigen::VectorXd example(Eigen::Index e) const { return ex.rows.row(e).transpose(); }
};

struct OuterOps {
  const OuterProductExamples& ex;

  Eigen::VectorXd scores(const Eigen::Ref<const Eigen::VectorXd>& w) const {
    const Eigen::VectorXd wc = w;
    const Eigen::Map<const RowMatrix> W(wc.data(), ex.left.cols(), ex.right.cols());
    // (right * W^T) * left^T holds score(i, k) at (i, k); its row-major
    // flattening is the example order.
    const RowMatrix block = (ex.right * W.transpose()) * ex.left.transpose();
    return Eigen::Map<const Eigen::VectorXd>(block.data(), block.size());
  }
  Eigen::VectorXd example(Eigen::Index e) const {
    const Eigen::Index K = ex.left.rows();
    const RowMatrix outer = ex.left.row(e % K).transpose() * ex.right.row(e / K);
    return Eigen::Map<const Eigen::VectorXd>(outer.data(), outer.size());
  }
};

template <class F>
decltype(auto) visit_ops(const ExampleStorage& storage, F&& f) {
  return std::visit(
      [&](const auto& p) -> decltype(auto) {
        if constexpr (std::is_same_v<std::decay_t<decltype(*p)>, DenseExamples>) {
          return f(DenseOps{*p});
        } else {
          return f(OuterOps{*p});
        }
      },
      storage);
}

struct BiasFit {
  double b = 0.0;
  double loss = 0.0;
};

double weighted_hinge_sum(std::span<const double> u, double b, const HingeProblem& problem) {
  const auto& s = problem.signs();
  const auto& c = problem.weights();
  const auto& beta = problem.bias_coefficients();
  double total = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) total += c[i] * std::max(0.0, 1.0 - s[i] * (u[i] + beta[i] * b));
  return total;
}

// Exact minimiser of the piecewise-linear bias term given shifted scores
// u_i = x_i.w + offset_i. Term i has slope -c_i g_i while active, with
// g_i = s_i beta_i, and a breakpoint at (s_i - u_i) / beta_i. Picks the
// midpoint of a flat optimal interval, or its finite endpoint when the
// interval is unbounded.
BiasFit optimal_bias(std::span<const double> u, const HingeProblem& problem) {
  const auto& s = problem.signs();
  const auto& c = problem.weights();
  const auto& beta = problem.bias_coefficients();
  const std::size_t m = u.size();
  std::vector<std::size_t> order;
  order.reserve(m);
  std::vector<double> breakpoint(m, 0.0);
  double slope = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double g = s[i] * beta[i];
    if (g == 0.0) continue;
    breakpoint[i] = (s[i] - u[i]) / beta[i];
    if (g > 0) slope -= c[i] * g;
    total += c[i] * std::abs(g);
    order.push_back(i);
  }
  if (order.empty()) return {0.0, weighted_hinge_sum(u, 0.0, problem)};
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return breakpoint[a] < breakpoint[b]; });

  const double flat = 1e-12 * total;
  const std::size_t n = order.size();
  double b = breakpoint[order.back()];
  if (slope >= -flat) {
    b = breakpoint[order.front()];
  } else {
    for (std::size_t r = 0; r < n; ++r) {
      slope += c[order[r]] * std::abs(s[order[r]] * beta[order[r]]);
      if (slope > flat) {
        b = breakpoint[order[r]];
        break;
      }
      if (slope >= -flat) {
        b = r + 1 < n ? 0.5 * (breakpoint[order[r]] + breakpoint[order[r + 1]]) : breakpoint[order[r]];
        break;
      }
    }
  }
  return {b, weighted_hinge_sum(u, b, problem)};
}


// Solver-side view of the examples as an m x n matrix X whose rows live in the
// subspace that contains the optimum.
class DenseDesign {
 public:
  explicit DenseDesign(const DenseExamples& ex) : ex_(ex) {}

  Eigen::Index size() const { return ex_.rows.rows(); }
  Eigen::Index dimension() const { return ex_.rows.cols(); }
  Eigen::VectorXd combine(const Eigen::VectorXd& coef) const { return ex_.rows.transpose() * coef; }
  Eigen::VectorXd scores(const Eigen::VectorXd& v) const { return ex_.rows * v; }
  // X^T diag(d) X
  Eigen::MatrixXd normal(const Eigen::VectorXd& d) const {
    const RowMatrix weighted = d.asDiagonal() * ex_.rows;
    return ex_.rows.transpose() * weighted;
  }
  Eigen::MatrixXd gram() const { return ex_.rows * ex_.rows.transpose(); }
  Eigen::VectorXd expand(const Eigen::VectorXd& v) const { return v; }

 private:
  const DenseExamples& ex_;
};

// Outer-product examples expressed in orthonormal bases of span(left rows)
// and span(right rows): W = P_L B P_R^T, which preserves both the scores and
// |W|_F. B is r x t with r <= min(K, a) and t <= min(n, q).
class OuterDesign {
 public:
  explicit OuterDesign(const OuterProductExamples& ex)
      : basis_l_(basis(ex.left)), basis_r_(basis(ex.right)),
        left_(ex.left * basis_l_), right_(ex.right * basis_r_) {}

  Eigen::Index size() const { return left_.rows() * right_.rows(); }
  Eigen::Index dimension() const { return left_.cols() * right_.cols(); }
  Eigen::VectorXd combine(const Eigen::VectorXd& coef) const {
    const Eigen::Map<const RowMatrix> per_point(coef.data(), right_.rows(), left_.rows());
    const RowMatrix b = left_.transpose() * (per_point.transpose() * right_);
    return Eigen::Map<const Eigen::VectorXd>(b.data(), b.size());
  }
  Eigen::VectorXd scores(const Eigen::VectorXd& v) const {
    const Eigen::Map<const RowMatrix> b(v.data(), left_.cols(), right_.cols());
    const RowMatrix block = (right_ * b.transpose()) * left_.transpose();
    return Eigen::Map<const Eigen::VectorXd>(block.data(), block.size());
  }
  // sum_k (l_k l_k^T) kron (R^T diag(d_.k) R)
  Eigen::MatrixXd normal(const Eigen::VectorXd& d) const {
    const Eigen::Index K = left_.rows(), n = right_.rows(), r = left_.cols(), t = right_.cols();
    const Eigen::Map<const RowMatrix> per_point(d.data(), n, K);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(r * t, r * t);
    for (Eigen::Index k = 0; k < K; ++k) {
      const RowMatrix weighted = per_point.col(k).asDiagonal() * right_;
      const Eigen::MatrixXd s = right_.transpose() * weighted;
      for (Eigen::Index u = 0; u < r; ++u) {
        for (Eigen::Index v = 0; v <= u; ++v) {
          const double f = left_(k, u) * left_(k, v);
          if (f != 0.0) out.block(u * t, v * t, t, t).noalias() += f * s;
        }
      }
    }
    return out.selfadjointView<Eigen::Lower>();
  }
  Eigen::MatrixXd gram() const {
    const Eigen::MatrixXd gl = left_ * left_.transpose(), gr = right_ * right_.transpose();
    const Eigen::Index K = left_.rows();
    Eigen::MatrixXd out(size(), size());
    for (Eigen::Index e = 0; e < size(); ++e)
      for (Eigen::Index f = 0; f < size(); ++f) out(e, f) = gl(e % K, f % K) * gr(e / K, f / K);
    return out;
  }
  Eigen::VectorXd expand(const Eigen::VectorXd& v) const {
    const Eigen::Map<const RowMatrix> b(v.data(), left_.cols(), right_.cols());
    const RowMatrix w = basis_l_ * b * basis_r_.transpose();
    return Eigen::Map<const Eigen::VectorXd>(w.data(), w.size());
  }

 private:
  static Eigen::MatrixXd basis(const RowMatrix& rows) {
    const Eigen::Index dim = rows.cols(), rank = std::min(rows.rows(), rows.cols());
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(rows.transpose());
    return qr.householderQ() * Eigen::MatrixXd::Identity(dim, rank);
  }

  Eigen::MatrixXd basis_l_, basis_r_;
  RowMatrix left_, right_;
};

// Tracks the best primal point and the best dual value seen so far.
struct Certificate {
  Eigen::VectorXd w;
  double b = 0.0;
  double primal = std::numeric_limits<double>::infinity();
  double dual = -std::numeric_limits<double>::infinity();

  double gap() const { return std::max(0.0, primal - dual); }
};

// Primal-dual interior point method (Mehrotra predictor-corrector) on the dual
//   min_a 1/2 |X^T (s .* a)|^2 - e.a   s.t. 0 <= a <= c, g.a = 0,
// with g_i = s_i beta_i when a bias is fitted. Newton systems
// (S X X^T S + D) x = r are solved in the n-dimensional primal space
// (Sherman-Morrison-Woodbury) when n <= m, otherwise directly.
template <class Design>
class InteriorPoint {
 public:
  InteriorPoint(const Design& design, const HingeProblem& problem)
      : design_(design),
        problem_(problem),
        m_(problem.num_examples()),
        s_(Eigen::Map<const Eigen::VectorXd>(problem.signs().data(), m_)),
        c_(Eigen::Map<const Eigen::VectorXd>(problem.weights().data(), m_)),
        e_(m_),
        g_(Eigen::VectorXd::Zero(m_)),
        free_(m_, true) {
    for (Eigen::Index i = 0; i < m_; ++i) e_[i] = 1.0 - s_[i] * problem.offsets()[static_cast<std::size_t>(i)];
    if (problem.fit_bias()) {
      for (Eigen::Index i = 0; i < m_; ++i) g_[i] = s_[i] * problem.bias_coefficients()[static_cast<std::size_t>(i)];
      const bool up = (g_.array() > 0.0).any(), down = (g_.array() < 0.0).any();
      equality_ = up && down;
      // With one-signed g the constraint forces those multipliers to zero.
      if (!equality_) {
        for (Eigen::Index i = 0; i < m_; ++i) free_[static_cast<std::size_t>(i)] = g_[i] == 0.0;
      }
    }
    for (Eigen::Index i = 0; i < m_; ++i) num_free_ += free_[static_cast<std::size_t>(i)] ? 1 : 0;
    direct_ = design_.dimension() > num_free_;
    if (direct_) gram_ = design_.gram();
  }

  HingeSolution run(const SolverOptions& opt) {
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(m_);
    Eigen::VectorXd zl = Eigen::VectorXd::Zero(m_), zu = Eigen::VectorXd::Zero(m_);
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (!is_free(i)) continue;
      alpha[i] = 0.5 * c_[i];
      zl[i] = zu[i] = 1.0;
    }
    if (equality_) balance(alpha);
    double y = 0.0;

    Certificate cert;
    HingeSolution out;
    double best_gap = std::numeric_limits<double>::infinity();
    int stalled = 0;
    for (int iter = 0;; ++iter) {
      const Eigen::VectorXd w = design_.combine(s_.cwiseProduct(alpha));
      const Eigen::VectorXd xw = design_.scores(w);
      certify(w, xw, alpha, cert);
      out.passes = iter;
      if (cert.gap() <= opt.tol || num_free_ == 0 || iter >= opt.max_passes) break;
      if (cert.gap() < best_gap * (1.0 - 1e-3)) {
        best_gap = cert.gap();
        stalled = 0;
      } else if (++stalled >= kMaxStalled) {
        break;
      }

      const Eigen::VectorXd grad = s_.cwiseProduct(xw) - e_;
      Eigen::VectorXd rd = grad + y * g_ - zl + zu;
      const double rp = equality_ ? g_.dot(alpha) : 0.0;
      Eigen::VectorXd upper = c_ - alpha, inv_d = Eigen::VectorXd::Zero(m_);
      double mu = 0.0;
      for (Eigen::Index i = 0; i < m_; ++i) {
        if (!is_free(i)) {
          rd[i] = 0.0;
          continue;
        }
        mu += alpha[i] * zl[i] + upper[i] * zu[i];
        inv_d[i] = 1.0 / (zl[i] / alpha[i] + zu[i] / upper[i]);
      }
      mu /= 2.0 * static_cast<double>(num_free_);
      if (!factorize(inv_d)) break;
      const Eigen::VectorXd v = equality_ ? solve(inv_d, g_) : Eigen::VectorXd();

      // Newton direction for complementarity targets R_l, R_u.
      auto direction = [&](const Eigen::VectorXd& rl, const Eigen::VectorXd& ru, Eigen::VectorXd& da,
                           Eigen::VectorXd& dzl, Eigen::VectorXd& dzu, double& dy) {
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m_);
        for (Eigen::Index i = 0; i < m_; ++i) {
          if (is_free(i)) rhs[i] = -rd[i] + rl[i] / alpha[i] - ru[i] / upper[i];
        }
        da = solve(inv_d, rhs);
        dy = 0.0;
        if (equality_) {
          dy = (g_.dot(da) + rp) / g_.dot(v);
          da -= dy * v;
        }
        dzl = Eigen::VectorXd::Zero(m_);
        dzu = Eigen::VectorXd::Zero(m_);
        for (Eigen::Index i = 0; i < m_; ++i) {
          if (!is_free(i)) continue;
          dzl[i] = (rl[i] - zl[i] * da[i]) / alpha[i];
          dzu[i] = (ru[i] + zu[i] * da[i]) / upper[i];
        }
      };
      auto max_step = [&](const Eigen::VectorXd& da, const Eigen::VectorXd& dzl, const Eigen::VectorXd& dzu) {
        double t = 1.0;
        for (Eigen::Index i = 0; i < m_; ++i) {
          if (!is_free(i)) continue;
          if (da[i] < 0.0) t = std::min(t, -alpha[i] / da[i]);
          if (da[i] > 0.0) t = std::min(t, upper[i] / da[i]);
          if (dzl[i] < 0.0) t = std::min(t, -zl[i] / dzl[i]);
          if (dzu[i] < 0.0) t = std::min(t, -zu[i] / dzu[i]);
        }
        return t;
      };

      Eigen::VectorXd da, dzl, dzu;
      double dy = 0.0;
      const Eigen::VectorXd rl0 = -alpha.cwiseProduct(zl), ru0 = -upper.cwiseProduct(zu);
      direction(rl0, ru0, da, dzl, dzu, dy);
      const double t_aff = max_step(da, dzl, dzu);
      double mu_aff = 0.0;
      for (Eigen::Index i = 0; i < m_; ++i) {
        if (!is_free(i)) continue;
        mu_aff += (alpha[i] + t_aff * da[i]) * (zl[i] + t_aff * dzl[i]) +
                  (upper[i] - t_aff * da[i]) * (zu[i] + t_aff * dzu[i]);
      }
      mu_aff /= 2.0 * static_cast<double>(num_free_);
      const double sigma = std::pow(mu_aff / mu, 3.0);
      Eigen::VectorXd rl = rl0, ru = ru0;
      for (Eigen::Index i = 0; i < m_; ++i) {
        if (!is_free(i)) continue;
        rl[i] += sigma * mu - da[i] * dzl[i];
        ru[i] += sigma * mu + da[i] * dzu[i];
      }
      direction(rl, ru, da, dzl, dzu, dy);
      const double t = std::min(1.0, kToBoundary * max_step(da, dzl, dzu));
      if (!(t > 0.0)) break;
      alpha += t * da;
      zl += t * dzl;
      zu += t * dzu;
      y += t * dy;
      for (Eigen::Index i = 0; i < m_; ++i) {
        if (is_free(i)) alpha[i] = std::clamp(alpha[i], 0.0, c_[i]);
      }
    }
    out.w = design_.expand(cert.w);
    out.b = cert.b;
    out.suboptimality_bound = cert.gap();
    out.converged = cert.gap() <= opt.tol;
    return out;
  }

 private:
  static constexpr double kToBoundary = 0.995;
  static constexpr int kMaxStalled = 8;

  bool is_free(Eigen::Index i) const { return free_[static_cast<std::size_t>(i)]; }

  // Scales the larger side of g.a down so that g.a = 0.
  void balance(Eigen::VectorXd& alpha) const {
    double up = 0.0, down = 0.0;
    for (Eigen::Index i = 0; i < m_; ++i) (g_[i] > 0.0 ? up : down) += std::abs(g_[i]) * alpha[i];
    const bool shrink_up = up > down;
    const double f = shrink_up ? down / up : up / down;
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (g_[i] != 0.0 && (g_[i] > 0.0) == shrink_up) alpha[i] *= f;
    }
  }

  void certify(const Eigen::VectorXd& w, const Eigen::VectorXd& xw, const Eigen::VectorXd& alpha,
               Certificate& cert) const {
    Eigen::VectorXd u = xw;
    for (Eigen::Index i = 0; i < m_; ++i) u[i] += problem_.offsets()[static_cast<std::size_t>(i)];
    const std::span<const double> us(u.data(), static_cast<std::size_t>(m_));
    const BiasFit fit = problem_.fit_bias() ? optimal_bias(us, problem_)
                                            : BiasFit{0.0, weighted_hinge_sum(us, 0.0, problem_)};
    const double reg = 0.5 * w.squaredNorm();
    if (reg + fit.loss < cert.primal) {
      cert.primal = reg + fit.loss;
      cert.w = w;
      cert.b = fit.b;
    }
    cert.dual = std::max(cert.dual, e_.dot(alpha) - reg);
  }

  bool factorize(const Eigen::VectorXd& inv_d) {
    if (direct_) {
      index_.clear();
      for (Eigen::Index i = 0; i < m_; ++i) {
        if (is_free(i)) index_.push_back(i);
      }
      const auto nf = static_cast<Eigen::Index>(index_.size());
      Eigen::MatrixXd a(nf, nf);
      for (Eigen::Index r = 0; r < nf; ++r) {
        for (Eigen::Index k = 0; k < nf; ++k) a(r, k) = s_[index_[r]] * s_[index_[k]] * gram_(index_[r], index_[k]);
        a(r, r) += 1.0 / inv_d[index_[r]];
      }
      llt_.compute(a);
    } else {
      Eigen::MatrixXd a = design_.normal(inv_d);
      a.diagonal().array() += 1.0;
      llt_.compute(a);
    }
    return llt_.info() == Eigen::Success;
  }

  Eigen::VectorXd solve_once(const Eigen::VectorXd& inv_d, const Eigen::VectorXd& r) const {
    if (direct_) {
      Eigen::VectorXd rr(static_cast<Eigen::Index>(index_.size()));
      for (std::size_t k = 0; k < index_.size(); ++k) rr[static_cast<Eigen::Index>(k)] = r[index_[k]];
      const Eigen::VectorXd xr = llt_.solve(rr);
      Eigen::VectorXd x = Eigen::VectorXd::Zero(m_);
      for (std::size_t k = 0; k < index_.size(); ++k) x[index_[k]] = xr[static_cast<Eigen::Index>(k)];
      return x;
    }
    const Eigen::VectorXd dr = inv_d.cwiseProduct(r);
    const Eigen::VectorXd t = llt_.solve(design_.combine(s_.cwiseProduct(dr)));
    return dr - inv_d.cwiseProduct(s_.cwiseProduct(design_.scores(t)));
  }

  // (S X X^T S + D) x = r on the free coordinates, with one step of
  // iterative refinement.
  Eigen::VectorXd solve(const Eigen::VectorXd& inv_d, const Eigen::VectorXd& r) const {
    Eigen::VectorXd x = solve_once(inv_d, r);
    Eigen::VectorXd residual = r - s_.cwiseProduct(design_.scores(design_.combine(s_.cwiseProduct(x))));
    for (Eigen::Index i = 0; i < m_; ++i) {
      residual[i] = is_free(i) ? residual[i] - x[i] / inv_d[i] : 0.0;
    }
    return x + solve_once(inv_d, residual);
  }

  const Design& design_;
  const HingeProblem& problem_;
  Eigen::Index m_;
  Eigen::VectorXd s_, c_, e_, g_;
  std::vector<bool> free_;
  Eigen::Index num_free_ = 0;
  bool equality_ = false;
  bool direct_ = false;
  Eigen::MatrixXd gram_;
  std::vector<Eigen::Index> index_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

template <class Design>
HingeSolution run_interior_point(const Design& design, const HingeProblem& problem, const SolverOptions& opt) {
  return InteriorPoint<Design>(design, problem).run(opt);
}

}  // namespace


Eigen::VectorXd HingeProblem::example(Eigen::Index e) const {
  if (e < 0 || e >= num_examples_) throw ValidationError("hinge problem: example index out of range");
  return visit_ops(examples_, [e](const auto& ops) { return ops.example(e); });
}

Eigen::VectorXd HingeProblem::scores(const Eigen::Ref<const Eigen::VectorXd>& w) const {
  if (w.size() != dimension_) {
    throw ValidationError("hinge problem: w has length " + std::to_string(w.size()) + ", expected " +
                          std::to_string(dimension_));
  }
  return visit_ops(examples_, [&w](const auto& ops) { return ops.scores(w); });
}

double objective(const HingeProblem& problem, const Eigen::Ref<const Eigen::VectorXd>& w, double b) {
  const Eigen::VectorXd u = problem.scores(w);
  const auto& s = problem.signs();
  const auto& c = problem.weights();
  const auto& o = problem.offsets();
  const auto& beta = problem.bias_coefficients();
  double total = 0.5 * w.squaredNorm();
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const auto ui = static_cast<std::size_t>(i);
    total += c[ui] * std::max(0.0, 1.0 - s[ui] * (u[i] + beta[ui] * b + o[ui]));
  }
  return total;
}

HingeSolution solve(const HingeProblem& problem, const SolverOptions& options) {
  if (!(options.tol > 0.0)) throw ValidationError("hinge solve: tol must be positive");
  if (options.max_passes < 1) throw ValidationError("hinge solve: max_passes must be >= 1");
  HingeSolution out = std::visit(
      [&](const auto& p) {
        if constexpr (std::is_same_v<std::decay_t<decltype(*p)>, DenseExamples>) {
          return run_interior_point(DenseDesign(*p), problem, options);
        } else {
          return run_interior_point(OuterDesign(*p), problem, options);
        }
      },
      problem.examples());
  out.objective = objective(problem, out.w, out.b);
  return out;
}

}  // namespace mmdt::hinge
