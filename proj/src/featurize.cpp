#include "htps/featurize.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace htps {

SparseFeaturizer::SparseFeaturizer(const DatasetSpec& spec)
    : window_(spec.window), n_features_(spec.n_features) {
  validate_spec(spec);
}

std::optional<SparseFeatureMatrix> SparseFeaturizer::on_record(
    const Record& rec) {
  if (rec.feature_type == 0) {
    if (static_cast<int>(rows_.size()) == window_) {
      SparseFeatureMatrix out;
      out.data = Matrix(window_, n_features_);
      for (int r = 0; r < window_; ++r) {
        for (int c = 0; c < n_features_; ++c) out.data.at(r, c) = rows_[r][c];
      }
      out.label = rec.value;
      return out;
    }
    return std::nullopt;
  }
  Vector row(n_features_, 0.0);
  row[rec.feature_type - 1] = rec.value;
  rows_.push_back(std::move(row));
  if (static_cast<int>(rows_.size()) > window_) rows_.pop_front();
  return std::nullopt;
}

DenseFeaturizer::DenseFeaturizer(const DatasetSpec& spec)
    : window_(spec.window), n_features_(spec.n_features), values_(spec.n_features) {
  validate_spec(spec);
}

bool DenseFeaturizer::all_full() const {
  for (const auto& ring : values_) {
    if (static_cast<int>(ring.size()) < window_) return false;
  }
  return true;
}

std::optional<DenseFeatureMatrix> DenseFeaturizer::on_record(
    const Record& rec) {
  if (rec.feature_type == 0) {
    if (all_full()) {
      DenseFeatureMatrix out;
      out.data = Matrix(window_, n_features_);
      for (int c = 0; c < n_features_; ++c) {
        for (int r = 0; r < window_; ++r) out.data.at(r, c) = values_[c][r];
      }
      out.label = rec.value;
      return out;
    }
    return std::nullopt;
  }
  auto& ring = values_[rec.feature_type - 1];
  ring.push_back(rec.value);
  if (static_cast<int>(ring.size()) > window_) ring.pop_front();
  return std::nullopt;
}

std::vector<SparseFeatureMatrix> sparse_featurize(
    const std::vector<Record>& records, const DatasetSpec& spec) {
  SparseFeaturizer featurizer(spec);
  std::vector<SparseFeatureMatrix> out;
  for (const Record& rec : records) {
    if (auto emitted = featurizer.on_record(rec)) {
      out.push_back(std::move(*emitted));
    }
  }
  return out;
}

std::vector<DenseFeatureMatrix> dense_featurize(
    const std::vector<Record>& records, const DatasetSpec& spec) {
  DenseFeaturizer featurizer(spec);
  std::vector<DenseFeatureMatrix> out;
  for (const Record& rec : records) {
    if (auto emitted = featurizer.on_record(rec)) {
      out.push_back(std::move(*emitted));
    }
  }
  return out;
}

std::vector<SparseFeatureMatrix> sparse_featurize_oracle(
    const std::vector<Record>& records, const DatasetSpec& spec) {
  validate_spec(spec);
  const int window = spec.window;
  std::vector<SparseFeatureMatrix> out;
  for (std::size_t t = 0; t < records.size(); ++t) {
    if (records[t].feature_type != 0) continue;
    std::vector<std::size_t> feature_positions;
    for (std::size_t i = 0; i < t; ++i) {
      if (records[i].feature_type != 0) feature_positions.push_back(i);
    }
    if (static_cast<int>(feature_positions.size()) < window) continue;
    SparseFeatureMatrix sample;
    sample.data = Matrix(window, spec.n_features);
    const std::size_t first = feature_positions.size() - window;
    for (int r = 0; r < window; ++r) {
      const Record& src = records[feature_positions[first + r]];
      sample.data.at(r, src.feature_type - 1) = src.value;
    }
    sample.label = records[t].value;
    out.push_back(std::move(sample));
  }
  return out;
}

std::vector<DenseFeatureMatrix> dense_featurize_oracle(
    const std::vector<Record>& records, const DatasetSpec& spec) {
  validate_spec(spec);
  const int window = spec.window;
  std::vector<DenseFeatureMatrix> out;
  for (std::size_t t = 0; t < records.size(); ++t) {
    if (records[t].feature_type != 0) continue;
    std::vector<std::vector<double>> history(spec.n_features);
    for (std::size_t i = 0; i < t; ++i) {
      if (records[i].feature_type != 0) {
        history[records[i].feature_type - 1].push_back(records[i].value);
      }
    }
    bool complete = true;
    for (const auto& values : history) {
      if (static_cast<int>(values.size()) < window) {
        complete = false;
        break;
      }
    }
    if (!complete) continue;
    DenseFeatureMatrix sample;
    sample.data = Matrix(window, spec.n_features);
    for (int c = 0; c < spec.n_features; ++c) {
      const auto& values = history[c];
      const std::size_t first = values.size() - window;
      for (int r = 0; r < window; ++r) {
        sample.data.at(r, c) = values[first + r];
      }
    }
    sample.label = records[t].value;
    out.push_back(std::move(sample));
  }
  return out;
}

std::vector<JointSample> joint_featurize(const std::vector<Record>& records,
                                         const DatasetSpec& spec) {
  SparseFeaturizer sparse(spec);
  DenseFeaturizer dense(spec);
  std::vector<JointSample> out;
  for (const Record& rec : records) {
    auto sparse_emit = sparse.on_record(rec);
    auto dense_emit = dense.on_record(rec);
    if (dense_emit) {
      if (!sparse_emit) {
        throw std::logic_error(
            "joint_featurize: dense emission without sparse emission");
      }
      out.push_back(JointSample{std::move(dense_emit->data),
                                std::move(sparse_emit->data),
                                dense_emit->label});
    }
  }
  return out;
}

std::string to_string(FeatureVariant variant) {
  return variant == FeatureVariant::kSparse ? "sparse" : "dense";
}

FeatureVariant feature_variant_from_string(const std::string& name) {
  if (name == "sparse") return FeatureVariant::kSparse;
  if (name == "dense") return FeatureVariant::kDense;
  throw std::invalid_argument("unknown feature matrix variant: " + name);
}

namespace {

void append_double(std::string& line, double value) {
  char buf[64];
  auto result = std::to_chars(buf, buf + sizeof(buf), value);
  line.append(buf, result.ptr);
}

double parse_double_token(const std::string& token, const std::string& path,
                          std::size_t line_no) {
  double value = 0.0;
  auto result =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (result.ec != std::errc() || result.ptr != token.data() + token.size()) {
    throw std::runtime_error(path + ":" + std::to_string(line_no) +
                             ": bad number '" + token + "'");
  }
  return value;
}

}  // namespace

void write_matrix_file(const std::string& path, const FeatureMatrixFile& file) {
  if (file.matrices.size() != file.labels.size()) {
    throw std::invalid_argument("matrix/label count mismatch");
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "HTPSFM v1 " << to_string(file.variant) << ' ' << file.window << ' '
      << file.n_features << ' ' << file.matrices.size() << '\n';
  std::string line;
  for (std::size_t s = 0; s < file.matrices.size(); ++s) {
    const Matrix& m = file.matrices[s];
    if (m.rows != static_cast<std::size_t>(file.window) ||
        m.cols != static_cast<std::size_t>(file.n_features)) {
      throw std::invalid_argument("matrix shape does not match header");
    }
    for (std::size_t r = 0; r < m.rows; ++r) {
      line.clear();
      for (std::size_t c = 0; c < m.cols; ++c) {
        if (c != 0) line.push_back(' ');
        append_double(line, m.at(r, c));
      }
      out << line << '\n';
    }
    line.clear();
    append_double(line, file.labels[s]);
    out << line << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

FeatureMatrixFile read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file: " + path);

  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) {
    throw std::runtime_error(path + ": empty matrix file");
  }
  ++line_no;
  std::istringstream header(line);
  std::string magic, version, variant_name;
  FeatureMatrixFile file;
  std::size_t count = 0;
  if (!(header >> magic >> version >> variant_name >> file.window >>
        file.n_features >> count) ||
      magic != "HTPSFM") {
    throw std::runtime_error(path + ": bad matrix file header");
  }
  if (version != "v1") {
    throw std::runtime_error(path + ": unsupported matrix file version " +
                             version);
  }
  file.variant = feature_variant_from_string(variant_name);
  if (file.window < 1 || file.n_features < 1) {
    throw std::runtime_error(path + ": bad matrix dimensions in header");
  }

  file.matrices.reserve(count);
  file.labels.reserve(count);
  std::vector<std::string> tokens;
  for (std::size_t s = 0; s < count; ++s) {
    Matrix m(file.window, file.n_features);
    for (int r = 0; r < file.window; ++r) {
      if (!std::getline(in, line)) {
        throw std::runtime_error(path + ": truncated matrix file");
      }
      ++line_no;
      tokens.clear();
      std::istringstream row(line);
      std::string token;
      while (row >> token) tokens.push_back(token);
      if (static_cast<int>(tokens.size()) != file.n_features) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": expected " +
                                 std::to_string(file.n_features) + " values");
      }
      for (int c = 0; c < file.n_features; ++c) {
        m.at(r, c) = parse_double_token(tokens[c], path, line_no);
      }
    }
    if (!std::getline(in, line)) {
      throw std::runtime_error(path + ": truncated matrix file");
    }
    ++line_no;
    file.matrices.push_back(std::move(m));
    file.labels.push_back(parse_double_token(line, path, line_no));
  }
  return file;
}

}  // namespace htps
