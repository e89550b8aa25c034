#include "mmdt/synthgen.hpp"

#include <cmath>
#include <random>
#include <string>

#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "mmdt/error.hpp"

namespace mmdt {

namespace {

constexpr double kMaxCondition = 10.0;
constexpr int kMaxAttempts = 1000;

class Gaussian {
 public:
  explicit Gaussian(std::uint64_t seed) : rng_(seed) {}

  double operator()() { return normal_(rng_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  Eigen::VectorXd vector(Eigen::Index n) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = (*this)();
    return v;
  }
  RowMatrix matrix(Eigen::Index rows, Eigen::Index cols) {
    RowMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = (*this)();
    return m;
  }
  Eigen::VectorXd on_sphere(Eigen::Index n, double radius) {
    Eigen::VectorXd v;
    do {
      v = vector(n);
    } while (v.norm() == 0.0);
    return radius * v / v.norm();
  }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

Eigen::MatrixXd orthonormal_columns(Eigen::Index rows, Eigen::Index cols, Gaussian& gauss) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(Eigen::MatrixXd(gauss.matrix(rows, cols)));
  return qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
}

RowMatrix class_means(const ShiftConfig& config, Gaussian& gauss) {
  RowMatrix means(config.num_classes, config.d_source);
  const double min_distance = config.mean_scale / 2.0;
  const bool full = config.mean_rank == 0 || config.mean_rank == config.d_source;
  const Eigen::MatrixXd basis =
      full ? Eigen::MatrixXd() : orthonormal_columns(config.d_source, config.mean_rank, gauss);
  for (int k = 0; k < config.num_classes; ++k) {
    int attempt = 0;
    while (true) {
      const Eigen::VectorXd candidate = full ? gauss.on_sphere(config.d_source, config.mean_scale)
                                             : Eigen::VectorXd(basis * gauss.on_sphere(config.mean_rank, config.mean_scale));
      bool ok = true;
      for (int l = 0; l < k && ok; ++l) ok = (means.row(l).transpose() - candidate).norm() >= min_distance;
      if (ok) {
        means.row(k) = candidate.transpose();
        break;
      }
      if (++attempt >= kMaxAttempts) {
        throw ValidationError("cannot place " + std::to_string(config.num_classes) + " class means in " +
                              std::to_string(config.d_source) + " dimensions with the required spacing");
      }
    }
  }
  return means;
}

// Random orthogonal times a diagonal with entries in [0.5, 2].
RowMatrix well_conditioned(Eigen::Index d, Gaussian& gauss) {
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const Eigen::MatrixXd g = gauss.matrix(d, d);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < d; ++i) {
      if (r(i, i) < 0) q.col(i) *= -1.0;
    }
    Eigen::VectorXd diag(d);
    for (Eigen::Index i = 0; i < d; ++i) diag[i] = gauss.uniform(0.5, 2.0);
    RowMatrix a = q * diag.asDiagonal();
    if (condition_number(a) <= kMaxCondition) return a;
  }
  throw std::runtime_error("failed to draw a well-conditioned shift matrix");
}

}  // namespace

const char* to_string(ShiftKind kind) { return kind == ShiftKind::Affine ? "affine" : "projection"; }

ShiftKind shift_kind_from_string(const std::string& name) {
  if (name == "affine") return ShiftKind::Affine;
  if (name == "projection") return ShiftKind::Projection;
  throw ValidationError("unknown shift kind `" + name + "` (expected affine or projection)");
}

void ShiftConfig::validate() const {
  if (num_classes < 2) throw ValidationError("shift config: num_classes must be >= 2");
  if (d_source < 1 || d_target < 1) throw ValidationError("shift config: dimensions must be >= 1");
  if (!(noise >= 0.0) || !(target_noise >= 0.0)) throw ValidationError("shift config: noise must be >= 0");
  if (!(mean_scale > 0.0)) throw ValidationError("shift config: mean_scale must be positive");
  if (mean_rank < 0 || mean_rank > d_source) throw ValidationError("shift config: mean_rank must lie in [0, d_source]");
  if (!(translation_scale >= 0.0)) throw ValidationError("shift config: translation_scale must be >= 0");
  if (source_per_class < 0 || target_per_class < 0) throw ValidationError("shift config: negative sample count");
  if (kind == ShiftKind::Affine && d_source != d_target) {
    throw ValidationError("shift config: affine shifts require d_target == d_source");
  }
  if (matrix && (matrix->rows() != d_target || matrix->cols() != d_source)) {
    throw ValidationError("shift config: matrix must be d_target x d_source");
  }
  if (translation && translation->size() != d_target) {
    throw ValidationError("shift config: translation must have length d_target");
  }
}

double condition_number(const Eigen::Ref<const RowMatrix>& matrix) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(matrix);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 1.0;
  const double smallest = sv[sv.size() - 1];
  return smallest > 0.0 ? sv[0] / smallest : std::numeric_limits<double>::infinity();
}

double invertibility_check(const GroundTruthShift& shift) { return condition_number(shift.matrix); }

GeneratedDomains generate(const ShiftConfig& config) {
  config.validate();
  Gaussian gauss(config.seed);
  const int K = config.num_classes;
  const Eigen::Index d_s = config.d_source, d_t = config.d_target;

  GroundTruthShift shift;
  shift.kind = config.kind;
  shift.class_means = class_means(config, gauss);
  if (config.matrix) {
    shift.matrix = *config.matrix;
  } else if (config.kind == ShiftKind::Affine) {
    shift.matrix = well_conditioned(d_s, gauss);
  } else {
    shift.matrix = gauss.matrix(d_t, d_s) / std::sqrt(static_cast<double>(d_s));
  }
  if (config.translation) {
    shift.translation = *config.translation;
  } else if (config.kind == ShiftKind::Affine && config.translation_scale > 0.0) {
    shift.translation = gauss.on_sphere(d_t, config.translation_scale);
  } else {
    shift.translation = Eigen::VectorXd::Zero(d_t);
  }

  auto draw = [&](int per_class, bool mapped) {
    RowMatrix rows(static_cast<Eigen::Index>(per_class) * K, mapped ? d_t : d_s);
    std::vector<int> labels;
    labels.reserve(static_cast<std::size_t>(rows.rows()));
    Eigen::Index r = 0;
    for (int k = 0; k < K; ++k) {
      for (int n = 0; n < per_class; ++n, ++r) {
        Eigen::VectorXd x = shift.class_means.row(k).transpose() + config.noise * gauss.vector(d_s);
        if (mapped) {
          Eigen::VectorXd y = shift.matrix * x + shift.translation;
          if (config.target_noise > 0.0) y += config.target_noise * gauss.vector(d_t);
          rows.row(r) = y.transpose();
        } else {
          rows.row(r) = x.transpose();
        }
        labels.push_back(k);
      }
    }
    return LabeledDataset(std::move(rows), std::move(labels), mapped ? Domain::Target : Domain::Source, K);
  };
  LabeledDataset source = draw(config.source_per_class, false);
  LabeledDataset target = draw(config.target_per_class, true);

  if (config.kind == ShiftKind::Affine && std::isfinite(condition_number(shift.matrix))) {
    const Eigen::MatrixXd inv = Eigen::MatrixXd(shift.matrix).inverse();
    RowMatrix w = RowMatrix::Zero(d_s + 1, d_t + 1);
    w.topLeftCorner(d_s, d_t) = inv;
    w.topRightCorner(d_s, 1) = -inv * shift.translation;
    w(d_s, d_t) = 1.0;
    shift.inverse = TransformMatrix(std::move(w));
  }
  return GeneratedDomains{std::move(source), std::move(target), std::move(shift)};
}

}  // namespace mmdt
