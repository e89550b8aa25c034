#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "mmdt/dataset.hpp"
#include "mmdt/error.hpp"
#include "oracles.hpp"

using namespace mmdt;
using namespace mmdt::testing;

namespace {

LabeledDataset counted(int per_class, int classes) {
  RowMatrix x(per_class * classes, 2);
  std::vector<int> y;
  for (int i = 0; i < x.rows(); ++i) {
    x(i, 0) = i;
    x(i, 1) = -i;
    y.push_back(i % classes);
  }
  return LabeledDataset(std::move(x), std::move(y), Domain::Target, classes);
}

void expect_parse_error_at(const std::function<void()>& load, std::size_t line) {
  try {
    load();
    FAIL() << "expected a ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), line) << e.what();
  }
}

}  // namespace

TEST(Augment, Examples) {
  EXPECT_EQ(augment(std::span<const double>{}), Eigen::VectorXd::Ones(1));
  const std::vector<double> a{3.0, -2.0};
  EXPECT_EQ(augment(a), Eigen::Vector3d(3.0, -2.0, 1.0));
  const std::vector<double> zero(3, 0.0);
  EXPECT_EQ(augment(zero), Eigen::Vector4d(0.0, 0.0, 0.0, 1.0));
}

TEST(Augment, RejectsNonFinite) {
  const std::vector<double> bad{1.0, std::numeric_limits<double>::quiet_NaN()};
  EXPECT_THROW(augment(bad), ValidationError);
  const std::vector<double> inf{std::numeric_limits<double>::infinity()};
  EXPECT_THROW(augment(inf), ValidationError);
}

TEST(Augment, SquaredNormGrowsByOne) {
  std::mt19937_64 rng(3);
  for (int d = 0; d < 12; ++d) {
    const Eigen::VectorXd x = random_matrix(rng, 1, d).transpose();
    const Eigen::VectorXd z = augment(x);
    ASSERT_EQ(z.size(), d + 1);
    EXPECT_EQ(z[d], 1.0);
    EXPECT_NEAR(z.squaredNorm(), x.squaredNorm() + 1.0, 1e-12);
  }
}

TEST(Augment, RowsMatchVectorForm) {
  std::mt19937_64 rng(5);
  const RowMatrix x = random_matrix(rng, 4, 3);
  const RowMatrix z = augment_rows(x);
  for (Eigen::Index i = 0; i < x.rows(); ++i) EXPECT_EQ(z.row(i).transpose(), augment(x.row(i).transpose()));
}

TEST(LabeledDataset, RejectsInvalidContents) {
  RowMatrix x(2, 1);
  x << 1.0, 2.0;
  EXPECT_THROW(LabeledDataset(x, {0, 2}, Domain::Source, 2), ValidationError);
  EXPECT_THROW(LabeledDataset(x, {0}, Domain::Source, 2), ValidationError);
  x(1, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(LabeledDataset(x, {0, 1}, Domain::Source, 2), ValidationError);
}

TEST(LoadDense, TwoRows) {
  const auto data = load_dense(data_file("dense_two_rows.csv"), Domain::Source);
  EXPECT_EQ(data.size(), 2);
  EXPECT_EQ(data.dim(), 2);
  EXPECT_EQ(data.num_classes(), 2);
  EXPECT_EQ(data.domain(), Domain::Source);
  EXPECT_EQ(data.row(0), Eigen::RowVector2d(1.0, 2.0));
  EXPECT_EQ(data.row(1), Eigen::RowVector2d(3.0, 4.0));
  EXPECT_EQ(data.labels(), (std::vector<int>{0, 1}));
}

TEST(LoadDense, HeaderOnlyGivesEmptyDataset) {
  const auto data = load_dense(data_file("dense_header_only.csv"), Domain::Target);
  EXPECT_EQ(data.size(), 0);
  EXPECT_EQ(data.dim(), 2);
  EXPECT_TRUE(data.empty());
}

TEST(LoadDense, RemapsLabelsAndKeepsColumnOrder) {
  const auto data = load_dense(data_file("dense_remap.csv"), Domain::Source);
  EXPECT_EQ(data.num_classes(), 2);
  EXPECT_EQ(data.labels(), (std::vector<int>{1, 0, 1}));
  EXPECT_EQ(data.label_map().originals(), (std::vector<std::int64_t>{2, 5}));
  EXPECT_EQ(data.label_map().original(0), 2);
  EXPECT_EQ(data.label_map().index_of(5), 1);
  EXPECT_FALSE(data.label_map().index_of(3).has_value());
  EXPECT_EQ(data.row(0), Eigen::RowVector2d(0.5, 1.5));
  EXPECT_EQ(data.row(1), Eigen::RowVector2d(-1.0, 2e-3));
}

TEST(LoadDense, ErrorsCarryLineNumbers) {
  expect_parse_error_at([] { load_dense(data_file("dense_ragged.csv"), Domain::Source); }, 3);
  expect_parse_error_at([] { load_dense(data_file("dense_non_numeric.csv"), Domain::Source); }, 4);
  expect_parse_error_at([] { load_dense(data_file("dense_no_label.csv"), Domain::Source); }, 1);
  expect_parse_error_at([] { load_dense(data_file("does_not_exist.csv"), Domain::Source); }, 0);
}

TEST(LoadDense, UnknownLabelAgainstGivenMap) {
  const LabelMap map(std::vector<std::int64_t>{0, 1});
  expect_parse_error_at([&] { load_dense(data_file("dense_remap.csv"), Domain::Target, &map); }, 2);
}

TEST(LoadSparse, BasicLines) {
  const auto data = load_sparse(data_file("sparse_basic.txt"), 3, Domain::Target);
  ASSERT_EQ(data.size(), 2);
  EXPECT_EQ(data.row(0), Eigen::RowVector3d(0.5, 0.0, 2.0));
  EXPECT_EQ(data.label_map().original(data.label(0)), 1);
  EXPECT_TRUE(data.row(1).isZero(0.0));
  EXPECT_EQ(data.label_map().original(data.label(1)), 0);
}

TEST(LoadSparse, LabelOnlyLineIsZeroRow) {
  TempDir dir;
  write_text(dir / "one.txt", "0\n");
  const auto data = load_sparse(dir / "one.txt", 4, Domain::Target);
  ASSERT_EQ(data.size(), 1);
  EXPECT_EQ(data.dim(), 4);
  EXPECT_TRUE(data.row(0).isZero(0.0));
}

TEST(LoadSparse, HighDimensionalFixture) {
  const auto data = load_sparse(data_file("sparse_dim800.txt"), 800, Domain::Source);
  EXPECT_EQ(data.size(), 3);
  EXPECT_EQ(data.dim(), 800);
  EXPECT_EQ(data.features()(0, 0), 0.25);
  EXPECT_EQ(data.features()(0, 16), -1.5);
  EXPECT_EQ(data.features()(0, 799), 2.0);
  EXPECT_EQ(data.features().row(0).cwiseAbs().sum(), 3.75);
  EXPECT_TRUE(data.row(1).isZero(0.0));
  EXPECT_EQ(data.features()(2, 399), 1e-3);
  EXPECT_EQ(data.features()(2, 1), 4.5);
  EXPECT_EQ(data.labels(), (std::vector<int>{0, 1, 0}));
}

TEST(LoadSparse, IndexErrors) {
  expect_parse_error_at([] { load_sparse(data_file("sparse_index_zero.txt"), 4, Domain::Source); }, 2);
  expect_parse_error_at([] { load_sparse(data_file("sparse_index_over.txt"), 4, Domain::Source); }, 2);
  expect_parse_error_at([] { load_sparse(data_file("sparse_duplicate.txt"), 4, Domain::Source); }, 2);
}

TEST(RoundTrip, DenseAndSparseAreExact) {
  std::mt19937_64 rng(11);
  RowMatrix x = random_matrix(rng, 7, 5, 3.0);
  x(2, 3) = 0.0;
  x(4, 0) = 1e-300;
  x(5, 1) = -123456789.123456789;
  const LabelMap map(std::vector<std::int64_t>{-4, 2, 9});
  const LabeledDataset data(x, {0, 1, 2, 1, 0, 2, 2}, Domain::Source, 3, map);
  TempDir dir;

  save_dense(data, dir / "d.csv");
  const auto dense = load_dense(dir / "d.csv", Domain::Source);
  EXPECT_EQ(dense.features(), data.features());
  EXPECT_EQ(dense.labels(), data.labels());
  EXPECT_EQ(dense.label_map(), data.label_map());
  save_dense(dense, dir / "d2.csv");
  EXPECT_EQ(read_bytes(dir / "d.csv"), read_bytes(dir / "d2.csv"));

  save_sparse(data, dir / "s.txt");
  const auto sparse = load_sparse(dir / "s.txt", 5, Domain::Source);
  EXPECT_EQ(sparse.features(), data.features());
  EXPECT_EQ(sparse.labels(), data.labels());
  save_sparse(sparse, dir / "s2.txt");
  EXPECT_EQ(read_bytes(dir / "s.txt"), read_bytes(dir / "s2.txt"));
}

TEST(MakeSplit, CountsWithoutHoldout) {
  const auto data = counted(10, 2);
  const auto split = make_split(data, SplitSpec{3, {}, 1});
  EXPECT_EQ(split.train.size(), 6);
  EXPECT_EQ(split.test.size(), 14);
  EXPECT_EQ(split.train.class_counts(), (std::vector<Eigen::Index>{3, 3}));
}

TEST(MakeSplit, HoldoutClassesStayOutOfTrain) {
  const auto data = counted(10, 2);
  const auto split = make_split(data, SplitSpec{3, {1}, 1});
  EXPECT_EQ(split.train.size(), 3);
  for (int y : split.train.labels()) EXPECT_EQ(y, 0);
  EXPECT_EQ(split.test.class_counts(), (std::vector<Eigen::Index>{7, 10}));
}

TEST(MakeSplit, PartitionsIndices) {
  const auto data = counted(9, 4);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto split = make_split(data, SplitSpec{2, {3}, seed});
    EXPECT_EQ(split.train.size() + split.test.size(), data.size());
    std::vector<Eigen::Index> all = split.train_indices;
    all.insert(all.end(), split.test_indices.begin(), split.test_indices.end());
    std::sort(all.begin(), all.end());
    std::vector<Eigen::Index> expected(static_cast<std::size_t>(data.size()));
    std::iota(expected.begin(), expected.end(), 0);
    EXPECT_EQ(all, expected);
    for (std::size_t r = 0; r < split.train_indices.size(); ++r) {
      EXPECT_EQ(split.train.row(static_cast<Eigen::Index>(r)), data.row(split.train_indices[r]));
    }
  }
}

TEST(MakeSplit, DeterministicInSeed) {
  const auto data = counted(10, 3);
  const auto a = make_split(data, SplitSpec{3, {}, 42});
  const auto b = make_split(data, SplitSpec{3, {}, 42});
  EXPECT_EQ(a.train_indices, b.train_indices);
  EXPECT_EQ(a.test_indices, b.test_indices);
}

TEST(MakeSplit, SeedsProduceDifferentTrainSets) {
  const auto data = counted(50, 2);
  std::set<std::vector<Eigen::Index>> distinct;
  for (std::uint64_t seed = 0; seed < 10; ++seed) distinct.insert(make_split(data, SplitSpec{3, {}, seed}).train_indices);
  EXPECT_GE(distinct.size(), 2U);
}

TEST(MakeSplit, InsufficientPopulationNamesClass) {
  RowMatrix x = RowMatrix::Zero(5, 1);
  const LabeledDataset data(x, {0, 0, 0, 1, 1}, Domain::Target, 2);
  try {
    make_split(data, SplitSpec{3, {}, 0});
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("class 1"), std::string::npos) << e.what();
  }
  EXPECT_NO_THROW(make_split(data, SplitSpec{3, {1}, 0}));
  EXPECT_THROW(make_split(data, SplitSpec{1, {2}, 0}), ValidationError);
}
