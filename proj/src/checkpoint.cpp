#include "htps/checkpoint.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace htps {

std::string format_double(double value) {
  char buf[64];
  auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

double parse_double(const std::string& text) {
  double value = 0.0;
  auto result =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size()) {
    throw std::runtime_error("bad float literal '" + text + "'");
  }
  return value;
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "HTPSCKPT v" << ckpt.format_version << '\n';
  out << "kind " << ckpt.model_kind << '\n';
  for (const auto& [key, value] : ckpt.metadata) {
    out << "meta " << key << ' ' << value << '\n';
  }
  std::string line;
  for (const NamedTensor& tensor : ckpt.tensors) {
    out << "tensor " << tensor.name << ' ' << tensor.value.rows << ' '
        << tensor.value.cols << '\n';
    for (std::size_t r = 0; r < tensor.value.rows; ++r) {
      line.clear();
      for (std::size_t c = 0; c < tensor.value.cols; ++c) {
        if (c != 0) line.push_back(' ');
        line += format_double(tensor.value.at(r, c));
      }
      out << line << '\n';
    }
  }
  out << "end\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);

  auto fail = [&path](const std::string& what) -> std::runtime_error {
    return std::runtime_error(path + ": " + what);
  };

  std::string line;
  if (!std::getline(in, line)) throw fail("empty checkpoint file");
  if (line != "HTPSCKPT v1") {
    throw fail("version mismatch, expected 'HTPSCKPT v1', got '" + line + "'");
  }

  Checkpoint ckpt;
  bool saw_end = false;
  while (std::getline(in, line)) {
    if (line == "end") {
      saw_end = true;
      break;
    }
    std::istringstream fields(line);
    std::string tag;
    fields >> tag;
    if (tag == "kind") {
      fields >> ckpt.model_kind;
      if (ckpt.model_kind.empty()) throw fail("missing model kind");
    } else if (tag == "meta") {
      std::string key;
      fields >> key;
      if (key.empty()) throw fail("meta line without key");
      std::string value;
      std::getline(fields, value);
      if (!value.empty() && value.front() == ' ') value.erase(0, 1);
      ckpt.metadata[key] = value;
    } else if (tag == "tensor") {
      NamedTensor tensor;
      std::size_t rows = 0, cols = 0;
      if (!(fields >> tensor.name >> rows >> cols)) {
        throw fail("malformed tensor header: " + line);
      }
      tensor.value = Matrix(rows, cols);
      std::string token;
      for (std::size_t r = 0; r < rows; ++r) {
        if (!std::getline(in, line)) throw fail("corrupt file: truncated tensor");
        std::istringstream values(line);
        for (std::size_t c = 0; c < cols; ++c) {
          if (!(values >> token)) {
            throw fail("corrupt file: short tensor row in " + tensor.name);
          }
          tensor.value.at(r, c) = parse_double(token);
        }
        if (values >> token) {
          throw fail("corrupt file: extra values in tensor " + tensor.name);
        }
      }
      ckpt.tensors.push_back(std::move(tensor));
    } else {
      throw fail("unrecognized line: " + line);
    }
  }
  if (!saw_end) throw fail("corrupt file: missing end marker");
  if (ckpt.model_kind.empty()) throw fail("missing model kind");
  return ckpt;
}

}  // namespace htps
