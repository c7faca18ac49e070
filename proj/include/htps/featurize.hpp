#pragma once

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "htps/matrix.hpp"
#include "htps/records.hpp"

namespace htps {

// W x N matrix with at most one populated cell per row (position FT-1 of the
// row's source record), paired with the target value seen at emission time.
struct SparseFeatureMatrix {
  Matrix data;
  double label = 0.0;
  bool operator==(const SparseFeatureMatrix&) const = default;
};

// W x N matrix whose column j holds the last W observed values of feature
// j+1, oldest (row 0) to newest (row W-1).
struct DenseFeatureMatrix {
  Matrix data;
  double label = 0.0;
  bool operator==(const DenseFeatureMatrix&) const = default;
};

// Streaming ring-buffer featurizers. A target record (feature_type 0) emits a
// matrix when the buffer condition holds and never contributes to the
// buffers; the buffers are not reset by an emission, so back-to-back targets
// reuse the same window.
class SparseFeaturizer {
 public:
  explicit SparseFeaturizer(const DatasetSpec& spec);
  std::optional<SparseFeatureMatrix> on_record(const Record& rec);

 private:
  int window_;
  int n_features_;
  std::deque<Vector> rows_;  // oldest first, length <= W
};

class DenseFeaturizer {
 public:
  explicit DenseFeaturizer(const DatasetSpec& spec);
  std::optional<DenseFeatureMatrix> on_record(const Record& rec);

 private:
  bool all_full() const;
  int window_;
  int n_features_;
  std::vector<std::deque<double>> values_;  // one ring per feature, <= W each
};

std::vector<SparseFeatureMatrix> sparse_featurize(
    const std::vector<Record>& records, const DatasetSpec& spec);
std::vector<DenseFeatureMatrix> dense_featurize(
    const std::vector<Record>& records, const DatasetSpec& spec);

// Brute-force reference implementations: re-scan the whole record prefix for
// every target record, no incremental state. Deliberately naive; kept as an
// independent check of the streaming path and used only by tests.
std::vector<SparseFeatureMatrix> sparse_featurize_oracle(
    const std::vector<Record>& records, const DatasetSpec& spec);
std::vector<DenseFeatureMatrix> dense_featurize_oracle(
    const std::vector<Record>& records, const DatasetSpec& spec);

// One sample per target record at which the dense buffers are full. The
// sparse buffer is necessarily full too by then (N*W >= W feature records
// seen), so both matrices exist and are aligned on the same target.
struct JointSample {
  Matrix dense;
  Matrix sparse;
  double label = 0.0;
};

std::vector<JointSample> joint_featurize(const std::vector<Record>& records,
                                         const DatasetSpec& spec);

// --- Feature matrix file format -------------------------------------------
//
// Text file, header line `HTPSFM v1 <variant> <W> <N> <count>` with variant
// `sparse` or `dense`, then per sample W lines of N space-separated values
// followed by one label line. Values use shortest round-trip rendering, so a
// write/read cycle is bit-exact.

enum class FeatureVariant { kSparse, kDense };

std::string to_string(FeatureVariant variant);
FeatureVariant feature_variant_from_string(const std::string& name);

struct FeatureMatrixFile {
  FeatureVariant variant = FeatureVariant::kDense;
  int window = 0;
  int n_features = 0;
  std::vector<Matrix> matrices;
  std::vector<double> labels;
};

void write_matrix_file(const std::string& path, const FeatureMatrixFile& file);
FeatureMatrixFile read_matrix_file(const std::string& path);

}  // namespace htps
