#include "htps/records.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "htps/rng.hpp"

namespace htps {

namespace {

[[noreturn]] void fail_line(const std::string& path, std::size_t line_no,
                            const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + what);
}

bool parse_int64(const std::string& text, std::int64_t& out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto result = std::from_chars(begin, end, out);
  return result.ec == std::errc() && result.ptr == end;
}

bool parse_value(const std::string& text, double& out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto result = std::from_chars(begin, end, out);
  return result.ec == std::errc() && result.ptr == end;
}

}  // namespace

void validate_spec(const DatasetSpec& spec) {
  if (spec.n_features < 1) {
    throw std::invalid_argument("dataset spec: n_features must be >= 1");
  }
  if (spec.window < 1) {
    throw std::invalid_argument("dataset spec: window must be >= 1");
  }
  if (static_cast<int>(spec.feature_names.size()) != spec.n_features) {
    throw std::invalid_argument(
        "dataset spec: feature_names must have exactly n_features entries");
  }
  std::set<std::string> seen(spec.feature_names.begin(),
                             spec.feature_names.end());
  if (static_cast<int>(seen.size()) != spec.n_features) {
    throw std::invalid_argument("dataset spec: feature_names must be distinct");
  }
}

std::vector<UserRecords> ingest_csv(const std::string& path,
                                    const DatasetSpec& spec) {
  validate_spec(spec);
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open records file: " + path);
  }

  std::vector<UserRecords> groups;
  std::unordered_map<std::string, std::size_t> group_index;

  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) {
    return groups;  // empty file
  }
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "user_id,seq,feature_type,value") {
    fail_line(path, line_no, "expected header user_id,seq,feature_type,value");
  }

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::array<std::string, 4> fields;
    std::size_t field = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == ',') {
        if (field >= 4) fail_line(path, line_no, "too many fields");
        fields[field++] = line.substr(start, i - start);
        start = i + 1;
      }
    }
    if (field != 4) fail_line(path, line_no, "expected 4 fields");

    Record rec;
    rec.user_id = fields[0];
    if (rec.user_id.empty()) fail_line(path, line_no, "empty user_id");
    if (!parse_int64(fields[1], rec.seq) || rec.seq < 0) {
      fail_line(path, line_no, "seq must be a nonnegative integer, got '" +
                                   fields[1] + "'");
    }
    std::int64_t ft = 0;
    if (!parse_int64(fields[2], ft)) {
      fail_line(path, line_no, "feature_type must be an integer, got '" +
                                   fields[2] + "'");
    }
    if (ft < 0 || ft > spec.n_features) {
      fail_line(path, line_no,
                "feature_type " + std::to_string(ft) + " out of range 0.." +
                    std::to_string(spec.n_features));
    }
    rec.feature_type = static_cast<int>(ft);
    if (!parse_value(fields[3], rec.value) || !std::isfinite(rec.value)) {
      fail_line(path, line_no, "value must be a finite number, got '" +
                                   fields[3] + "'");
    }

    auto [it, inserted] = group_index.try_emplace(rec.user_id, groups.size());
    if (inserted) {
      groups.push_back(UserRecords{rec.user_id, {}});
    }
    UserRecords& group = groups[it->second];
    if (!group.records.empty() && group.records.back().seq >= rec.seq) {
      fail_line(path, line_no, "seq not strictly increasing for user '" +
                                   rec.user_id + "'");
    }
    group.records.push_back(std::move(rec));
  }
  return groups;
}

void write_csv(const std::string& path,
               const std::vector<UserRecords>& groups) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  out << "user_id,seq,feature_type,value\n";
  char buf[64];
  for (const UserRecords& group : groups) {
    for (const Record& rec : group.records) {
      auto result = std::to_chars(buf, buf + sizeof(buf), rec.value);
      out << rec.user_id << ',' << rec.seq << ',' << rec.feature_type << ','
          << std::string_view(buf, result.ptr - buf) << '\n';
    }
  }
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

std::vector<UserRecords> filter_users(std::vector<UserRecords> groups,
                                      int min_target_records) {
  if (min_target_records < 0) {
    throw std::invalid_argument("min_target_records must be >= 0");
  }
  std::erase_if(groups, [min_target_records](const UserRecords& group) {
    int targets = 0;
    for (const Record& rec : group.records) {
      if (rec.feature_type == 0) ++targets;
    }
    return targets < min_target_records;
  });
  return groups;
}

UserSplit split_users(const std::vector<std::string>& user_ids,
                      const std::array<double, 3>& fractions,
                      std::uint64_t seed) {
  if (user_ids.empty()) {
    throw std::invalid_argument("split_users: empty user list");
  }
  const double sum = fractions[0] + fractions[1] + fractions[2];
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("split_users: fractions must sum to 1");
  }

  std::vector<std::string> shuffled = user_ids;
  Rng rng(seed);
  rng.shuffle(shuffled);

  const std::size_t n = shuffled.size();
  const auto n_train = static_cast<std::size_t>(
      std::floor(fractions[0] * static_cast<double>(n)));
  const auto n_valid = static_cast<std::size_t>(
      std::floor(fractions[1] * static_cast<double>(n)));

  UserSplit split;
  split.train_users.assign(shuffled.begin(), shuffled.begin() + n_train);
  split.valid_users.assign(shuffled.begin() + n_train,
                           shuffled.begin() + n_train + n_valid);
  split.test_users.assign(shuffled.begin() + n_train + n_valid,
                          shuffled.end());
  return split;
}

}  // namespace htps
