#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace htps {

// One measurement event. feature_type 0 is the prediction target, 1..N are
// predictor features. Only the collection order matters; there is no
// wall-clock timestamp. Within a user, seq is strictly increasing.
struct Record {
  std::string user_id;
  std::int64_t seq = 0;
  int feature_type = 0;
  double value = 0.0;
};

struct DatasetSpec {
  int n_features = 0;  // N
  std::vector<std::string> feature_names;  // exactly N entries, distinct
  std::string target_name;
  int window = 1;  // W
};

// Throws std::invalid_argument on violated invariants.
void validate_spec(const DatasetSpec& spec);

struct UserRecords {
  std::string user_id;
  std::vector<Record> records;  // in file/seq order
};

struct UserSplit {
  std::vector<std::string> train_users;
  std::vector<std::string> valid_users;
  std::vector<std::string> test_users;
};

// CSV format: header `user_id,seq,feature_type,value`, one record per row.
// Rows are grouped by user (first-appearance order) preserving file order
// within each user. Throws std::runtime_error naming the offending line on
// malformed rows, out-of-range feature types, non-numeric values, or
// non-increasing seq within a user. An empty file yields an empty result.
std::vector<UserRecords> ingest_csv(const std::string& path,
                                    const DatasetSpec& spec);

void write_csv(const std::string& path, const std::vector<UserRecords>& groups);

// Keeps exactly the users with at least min_target_records target records.
std::vector<UserRecords> filter_users(std::vector<UserRecords> groups,
                                      int min_target_records);

// Deterministic seeded shuffle, then floor(fractions[0]*n) users to train,
// floor(fractions[1]*n) to validation, remainder to test. Throws on an
// empty user list or fractions that do not sum to 1.
UserSplit split_users(const std::vector<std::string>& user_ids,
                      const std::array<double, 3>& fractions,
                      std::uint64_t seed);

inline constexpr std::array<double, 3> kDefaultSplitFractions{0.6, 0.2, 0.2};

}  // namespace htps
