#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace mmdt {

/// Row-major dense matrix; one example per row.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class Domain { Source, Target };

const char* to_string(Domain domain);

/// Maps the label values found in a file onto contiguous class indices
/// 0..K-1. Index order is the sorted order of the original values.
class LabelMap {
 public:
  LabelMap() = default;
  explicit LabelMap(std::vector<std::int64_t> original_labels);

  /// Identity map over 0..num_classes-1.
  static LabelMap identity(int num_classes);

  int num_classes() const { return static_cast<int>(original_.size()); }
  std::optional<int> index_of(std::int64_t original) const;
  std::int64_t original(int index) const { return original_.at(static_cast<std::size_t>(index)); }
  const std::vector<std::int64_t>& originals() const { return original_; }

  bool operator==(const LabelMap&) const = default;

 private:
  std::vector<std::int64_t> original_;  // sorted, unique
};

/// Dense labeled examples from one domain. Immutable after construction.
class LabeledDataset {
 public:
  LabeledDataset(RowMatrix features, std::vector<int> labels, Domain domain, int num_classes,
                 LabelMap label_map = {});

  /// Empty dataset with `dim` features.
  static LabeledDataset empty(Eigen::Index dim, Domain domain, int num_classes);

  Eigen::Index size() const { return features_.rows(); }
  Eigen::Index dim() const { return features_.cols(); }
  bool empty() const { return size() == 0; }
  int num_classes() const { return num_classes_; }
  Domain domain() const { return domain_; }

  const RowMatrix& features() const { return features_; }
  auto row(Eigen::Index i) const { return features_.row(i); }
  const std::vector<int>& labels() const { return labels_; }
  int label(Eigen::Index i) const { return labels_[static_cast<std::size_t>(i)]; }
  const LabelMap& label_map() const { return label_map_; }

  /// Examples at `indices`, in that order.
  LabeledDataset subset(std::span<const Eigen::Index> indices) const;

  /// Number of examples per class, indexed by class.
  std::vector<Eigen::Index> class_counts() const;

 private:
  RowMatrix features_;
  std::vector<int> labels_;
  Domain domain_;
  int num_classes_;
  LabelMap label_map_;
};

/// [x; 1]
Eigen::VectorXd augment(std::span<const double> x);
Eigen::VectorXd augment(const Eigen::Ref<const Eigen::VectorXd>& x);

/// Row-wise augmentation of a whole feature matrix: [X, 1].
RowMatrix augment_rows(const RowMatrix& features);

// Dense CSV: header row, one column named `label`, all other columns are
// features in file order. When `labels` is given it is used instead of
// building a map from the file, and unknown labels are a parse error.
LabeledDataset load_dense(const std::filesystem::path& path, Domain domain,
                          const LabelMap* labels = nullptr);
void save_dense(const LabeledDataset& data, const std::filesystem::path& path);

// Sparse text: `label idx:val idx:val ...`, 1-based indices <= dim.
LabeledDataset load_sparse(const std::filesystem::path& path, Eigen::Index dim, Domain domain,
                           const LabelMap* labels = nullptr);
void save_sparse(const LabeledDataset& data, const std::filesystem::path& path);

struct SplitSpec {
  int train_per_class = 3;
  std::set<int> holdout_classes;
  std::uint64_t seed = 0;
};

struct Split {
  LabeledDataset train;
  LabeledDataset test;
  std::vector<Eigen::Index> train_indices;  // into the input dataset, ascending
  std::vector<Eigen::Index> test_indices;
};

/// Draws `train_per_class` examples of every non-holdout class into the train
/// set; everything else goes to the test set. Deterministic in `spec.seed`.
Split make_split(const LabeledDataset& data, const SplitSpec& spec);

}  // namespace mmdt
