#pragma once

#include <map>
#include <string>
#include <vector>

#include "htps/matrix.hpp"

namespace htps {

// Shortest round-trip decimal rendering of a float64 (and its inverse).
std::string format_double(double value);
double parse_double(const std::string& text);

struct NamedTensor {
  std::string name;
  Matrix value;
};

// Self-describing text container for model parameters plus training
// metadata. Write/read round-trips are bit-exact.
//
// Layout:
//   HTPSCKPT v1
//   kind <model_kind>
//   meta <key> <value...>        (sorted by key)
//   tensor <name> <rows> <cols>
//   <rows lines of cols space-separated values>
//   ...
//   end
struct Checkpoint {
  int format_version = 1;
  std::string model_kind;
  std::map<std::string, std::string> metadata;
  std::vector<NamedTensor> tensors;

  bool operator==(const Checkpoint&) const = default;
};

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);

// Throws std::runtime_error on version mismatch, truncation or malformed
// content; messages name the file.
Checkpoint load_checkpoint(const std::string& path);

}  // namespace htps
