#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Core>

#include "mmdt/dataset.hpp"
#include "mmdt/transform.hpp"

namespace mmdt {

enum class ShiftKind {
  Affine,     // target = A x + t + noise, A square and well conditioned
  Projection  // target = P x + noise, P is d_target x d_source
};

const char* to_string(ShiftKind kind);
ShiftKind shift_kind_from_string(const std::string& name);

struct ShiftConfig {
  int num_classes = 2;
  int d_source = 2;
  int d_target = 2;
  double mean_scale = 5.0;  // class means lie on the sphere of this radius
  int mean_rank = 0;        // class means span a random subspace of this dimension; 0 = d_source
  double noise = 1.0;       // within-class standard deviation
  double target_noise = 0.0;  // extra isotropic noise added after the map
  double translation_scale = 0.0;  // |t| for affine shifts
  ShiftKind kind = ShiftKind::Affine;
  int source_per_class = 20;
  int target_per_class = 20;
  std::uint64_t seed = 0;
  std::optional<RowMatrix> matrix;            // overrides the random A or P
  std::optional<Eigen::VectorXd> translation; // overrides the random t

  void validate() const;
};

struct GroundTruthShift {
  ShiftKind kind = ShiftKind::Affine;
  RowMatrix matrix;             // A (d_T x d_S) or P
  Eigen::VectorXd translation;  // t, zero for projections
  RowMatrix class_means;        // K x d_S
  /// For affine shifts, [A^-1, -A^-1 t; 0, 1]: maps noise-free target points
  /// back to their source positions.
  std::optional<TransformMatrix> inverse;
};

struct GeneratedDomains {
  LabeledDataset source;
  LabeledDataset target;
  GroundTruthShift shift;
};

/// Gaussian class blobs in the source domain and a mapped copy of fresh draws
/// in the target domain. Bit-identical for equal configs.
GeneratedDomains generate(const ShiftConfig& config);

/// 2-norm condition number of the shift matrix.
double invertibility_check(const GroundTruthShift& shift);
double condition_number(const Eigen::Ref<const RowMatrix>& matrix);

}  // namespace mmdt
