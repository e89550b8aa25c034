#include "mmdt/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <string_view>

#include "mmdt/error.hpp"
#include "text_format.hpp"

namespace mmdt {

const char* to_string(Domain domain) {
  return domain == Domain::Source ? "source" : "target";
}

LabelMap::LabelMap(std::vector<std::int64_t> original_labels) : original_(std::move(original_labels)) {
  std::sort(original_.begin(), original_.end());
  original_.erase(std::unique(original_.begin(), original_.end()), original_.end());
}

LabelMap LabelMap::identity(int num_classes) {
  std::vector<std::int64_t> labels(static_cast<std::size_t>(num_classes));
  for (int k = 0; k < num_classes; ++k) labels[static_cast<std::size_t>(k)] = k;
  return LabelMap(std::move(labels));
}

std::optional<int> LabelMap::index_of(std::int64_t original) const {
  auto it = std::lower_bound(original_.begin(), original_.end(), original);
  if (it == original_.end() || *it != original) return std::nullopt;
  return static_cast<int>(it - original_.begin());
}

LabeledDataset::LabeledDataset(RowMatrix features, std::vector<int> labels, Domain domain,
                               int num_classes, LabelMap label_map)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      domain_(domain),
      num_classes_(num_classes),
      label_map_(std::move(label_map)) {
  if (num_classes_ < 1) throw ValidationError("dataset needs at least one class");
  if (static_cast<Eigen::Index>(labels_.size()) != features_.rows()) {
    throw ValidationError("dataset has " + std::to_string(features_.rows()) + " rows but " +
                          std::to_string(labels_.size()) + " labels");
  }
  for (int y : labels_) {
    if (y < 0 || y >= num_classes_) {
      throw ValidationError("label " + std::to_string(y) + " outside 0.." +
                            std::to_string(num_classes_ - 1));
    }
  }
  if (!features_.allFinite()) throw ValidationError("dataset features contain non-finite values");
  if (label_map_.num_classes() == 0) {
    label_map_ = LabelMap::identity(num_classes_);
  } else if (label_map_.num_classes() != num_classes_) {
    throw ValidationError("label map size does not match num_classes");
  }
}

LabeledDataset LabeledDataset::empty(Eigen::Index dim, Domain domain, int num_classes) {
  return LabeledDataset(RowMatrix(0, dim), {}, domain, num_classes);
}

LabeledDataset LabeledDataset::subset(std::span<const Eigen::Index> indices) const {
  RowMatrix rows(static_cast<Eigen::Index>(indices.size()), dim());
  std::vector<int> labels;
  labels.reserve(indices.size());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const Eigen::Index i = indices[r];
    if (i < 0 || i >= size()) throw ValidationError("subset index out of range");
    rows.row(static_cast<Eigen::Index>(r)) = features_.row(i);
    labels.push_back(label(i));
  }
  return LabeledDataset(std::move(rows), std::move(labels), domain_, num_classes_, label_map_);
}

std::vector<Eigen::Index> LabeledDataset::class_counts() const {
  std::vector<Eigen::Index> counts(static_cast<std::size_t>(num_classes_), 0);
  for (int y : labels_) ++counts[static_cast<std::size_t>(y)];
  return counts;
}

Eigen::VectorXd augment(std::span<const double> x) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(x.size()) + 1);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) throw ValidationError("augment: non-finite feature value");
    out[static_cast<Eigen::Index>(i)] = x[i];
  }
  out[out.size() - 1] = 1.0;
  return out;
}

Eigen::VectorXd augment(const Eigen::Ref<const Eigen::VectorXd>& x) {
  return augment(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
}

RowMatrix augment_rows(const RowMatrix& features) {
  RowMatrix out(features.rows(), features.cols() + 1);
  out.leftCols(features.cols()) = features;
  out.col(features.cols()).setOnes();
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return in;
}

// Assigns class indices, either from a caller-supplied map or from the sorted
// set of labels seen in the file.
LabeledDataset finish(RowMatrix rows, const std::vector<std::int64_t>& raw,
                      const std::vector<std::size_t>& line_numbers, Domain domain,
                      const LabelMap* labels, const std::filesystem::path& path) {
  LabelMap map = labels != nullptr ? *labels : LabelMap(raw);
  if (map.num_classes() == 0) map = LabelMap::identity(1);
  std::vector<int> mapped(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto index = map.index_of(raw[i]);
    if (!index) {
      throw ParseError(path.string(), line_numbers[i],
                       "label " + std::to_string(raw[i]) + " is not in the label map");
    }
    mapped[i] = *index;
  }
  const int num_classes = map.num_classes();
  return LabeledDataset(std::move(rows), std::move(mapped), domain, num_classes, std::move(map));
}

}  // namespace

LabeledDataset load_dense(const std::filesystem::path& path, Domain domain, const LabelMap* labels) {
  auto in = open_input(path);
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError(path.string(), 1, "missing header row");
  ++line_no;
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const auto header = split_commas(line);
  const auto label_it = std::find(header.begin(), header.end(), std::string_view("label"));
  if (label_it == header.end()) throw ParseError(path.string(), 1, "missing `label` column");
  const auto label_col = static_cast<std::size_t>(label_it - header.begin());
  const std::size_t dim = header.size() - 1;

  std::vector<double> values;
  std::vector<std::int64_t> raw;
  std::vector<std::size_t> line_numbers;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_commas(line);
    if (cells.size() != header.size()) {
      throw ParseError(path.string(), line_no,
                       "expected " + std::to_string(header.size()) + " columns, found " +
                           std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c == label_col) {
        auto value = detail::parse_int(cells[c]);
        if (!value) throw ParseError(path.string(), line_no, "bad label `" + std::string(cells[c]) + "`");
        raw.push_back(*value);
      } else {
        auto value = detail::parse_double(cells[c]);
        if (!value || !std::isfinite(*value)) {
          throw ParseError(path.string(), line_no,
                           "bad feature value `" + std::string(cells[c]) + "` in column " +
                               std::to_string(c + 1));
        }
        values.push_back(*value);
      }
    }
    line_numbers.push_back(line_no);
  }

  const auto n = static_cast<Eigen::Index>(raw.size());
  RowMatrix rows = Eigen::Map<const RowMatrix>(values.data(), n, static_cast<Eigen::Index>(dim));
  return finish(std::move(rows), raw, line_numbers, domain, labels, path);
}

void save_dense(const LabeledDataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "label";
  for (Eigen::Index j = 0; j < data.dim(); ++j) out << ",f" << j;
  out << '\n';
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    out << data.label_map().original(data.label(i));
    for (Eigen::Index j = 0; j < data.dim(); ++j) out << ',' << detail::format_double(data.features()(i, j));
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

LabeledDataset load_sparse(const std::filesystem::path& path, Eigen::Index dim, Domain domain,
                           const LabelMap* labels) {
  if (dim < 0) throw ValidationError("load_sparse: negative dimension");
  auto in = open_input(path);
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> values;
  std::vector<std::int64_t> raw;
  std::vector<std::size_t> line_numbers;
  std::vector<char> seen(static_cast<std::size_t>(dim));
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream tokens(line);
    std::string token;
    if (!(tokens >> token)) continue;
    auto label = detail::parse_int(token);
    if (!label) throw ParseError(path.string(), line_no, "bad label `" + token + "`");
    raw.push_back(*label);
    const std::size_t base = values.size();
    values.resize(base + static_cast<std::size_t>(dim), 0.0);
    std::fill(seen.begin(), seen.end(), 0);
    while (tokens >> token) {
      const auto colon = token.find(':');
      if (colon == std::string::npos) throw ParseError(path.string(), line_no, "expected idx:val, got `" + token + "`");
      auto index = detail::parse_int(std::string_view(token).substr(0, colon));
      auto value = detail::parse_double(std::string_view(token).substr(colon + 1));
      if (!index) throw ParseError(path.string(), line_no, "bad index in `" + token + "`");
      if (*index < 1 || *index > dim) {
        throw ParseError(path.string(), line_no,
                         "index " + std::to_string(*index) + " outside 1.." + std::to_string(dim));
      }
      if (!value || !std::isfinite(*value)) throw ParseError(path.string(), line_no, "bad value in `" + token + "`");
      const auto j = static_cast<std::size_t>(*index - 1);
      if (seen[j] != 0) throw ParseError(path.string(), line_no, "duplicate index " + std::to_string(*index));
      seen[j] = 1;
      values[base + j] = *value;
    }
    line_numbers.push_back(line_no);
  }
  const auto n = static_cast<Eigen::Index>(raw.size());
  RowMatrix rows = Eigen::Map<const RowMatrix>(values.data(), n, dim);
  return finish(std::move(rows), raw, line_numbers, domain, labels, path);
}

void save_sparse(const LabeledDataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    out << data.label_map().original(data.label(i));
    for (Eigen::Index j = 0; j < data.dim(); ++j) {
      const double v = data.features()(i, j);
      if (v != 0.0) out << ' ' << (j + 1) << ':' << detail::format_double(v);
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Split make_split(const LabeledDataset& data, const SplitSpec& spec) {
  if (spec.train_per_class < 0) throw ValidationError("make_split: train_per_class must be >= 0");
  for (int k : spec.holdout_classes) {
    if (k < 0 || k >= data.num_classes()) {
      throw ValidationError("make_split: holdout class " + std::to_string(k) + " out of range");
    }
  }
  std::vector<std::vector<Eigen::Index>> by_class(static_cast<std::size_t>(data.num_classes()));
  for (Eigen::Index i = 0; i < data.size(); ++i) by_class[static_cast<std::size_t>(data.label(i))].push_back(i);

  std::mt19937_64 rng(spec.seed);
  std::vector<char> in_train(static_cast<std::size_t>(data.size()), 0);
  for (int k = 0; k < data.num_classes(); ++k) {
    if (spec.holdout_classes.contains(k)) continue;
    auto& members = by_class[static_cast<std::size_t>(k)];
    if (static_cast<Eigen::Index>(members.size()) < spec.train_per_class) {
      throw ValidationError("make_split: class " + std::to_string(k) + " has " +
                            std::to_string(members.size()) + " examples, needs " +
                            std::to_string(spec.train_per_class));
    }
    std::shuffle(members.begin(), members.end(), rng);
    for (int r = 0; r < spec.train_per_class; ++r) in_train[static_cast<std::size_t>(members[static_cast<std::size_t>(r)])] = 1;
  }

  std::vector<Eigen::Index> train_idx, test_idx;
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    (in_train[static_cast<std::size_t>(i)] != 0 ? train_idx : test_idx).push_back(i);
  }
  auto train = data.subset(train_idx);
  auto test = data.subset(test_idx);
  return Split{std::move(train), std::move(test), std::move(train_idx), std::move(test_idx)};
}

}  // namespace mmdt
