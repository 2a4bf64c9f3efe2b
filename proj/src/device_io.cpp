#include "riclab/device_io.hpp"

#include "riclab/error.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace riclab {

namespace {

using nlohmann::json;

void append_matrix_row_major(std::string& out, const Matrix& m) {
  out += '[';
  bool first = true;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (!first) out += ", ";
      first = false;
      out += format_double(m(r, c));
    }
  }
  out += ']';
}

void append_matrix_list(std::string& out, const std::vector<Matrix>& ms) {
  out += "[\n";
  for (std::size_t i = 0; i < ms.size(); ++i) {
    out += "    ";
    append_matrix_row_major(out, ms[i]);
    out += (i + 1 < ms.size()) ? ",\n" : "\n";
  }
  out += "  ]";
}

std::string escape_json_string(const std::string& s) { return json(s).dump(); }

[[noreturn]] void field_error(const std::string& field, const std::string& msg) {
  throw Error(ErrorKind::Parse, "device file: field '" + field + "': " + msg);
}

int line_of_offset(const std::string& text, std::size_t offset) {
  int line = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

double number_at(const json& v, const std::string& field) {
  if (!v.is_number()) field_error(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) field_error(field, "non-finite number");
  return x;
}

std::vector<Matrix> read_matrix_list(const json& root, const char* key, int n, int d) {
  const json& arr = root.at(key);
  if (!arr.is_array()) field_error(key, "expected an array");
  if (static_cast<int>(arr.size()) != n) {
    field_error(key, "expected " + std::to_string(n) + " entries, got " + std::to_string(arr.size()));
  }
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const std::string field = std::string(key) + "[" + std::to_string(i) + "]";
    const json& flat = arr[static_cast<std::size_t>(i)];
    if (!flat.is_array() || static_cast<int>(flat.size()) != d * d) {
      field_error(field, "expected an array of " + std::to_string(d * d) + " numbers");
    }
    Matrix m(d, d);
    for (int r = 0; r < d; ++r) {
      for (int c = 0; c < d; ++c) {
        m(r, c) = number_at(flat[static_cast<std::size_t>(r * d + c)],
                            field + "[" + std::to_string(r * d + c) + "]");
      }
    }
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string device_to_json(const ReferenceDevice& device) {
  std::string out = "{\n";
  out += "  \"dim\": " + std::to_string(device.dim()) + ",\n";
  out += "  \"n\": " + std::to_string(device.count()) + ",\n";
  if (!device.label().empty()) out += "  \"label\": " + escape_json_string(device.label()) + ",\n";
  if (device.frame()) {
    const Matrix& f = device.frame()->rows();
    out += "  \"frame\": [\n";
    for (Eigen::Index i = 0; i < f.rows(); ++i) {
      out += "    ";
      append_matrix_row_major(out, f.row(i));
      out += (i + 1 < f.rows()) ? ",\n" : "\n";
    }
    out += "  ],\n";
  }
  if (!device.parallel_update()) {
    out += "  \"post_states\": ";
    append_matrix_list(out, device.post_states());
    out += ",\n";
  }
  out += "  \"elements\": ";
  append_matrix_list(out, device.elements());
  out += "\n}\n";
  return out;
}

ReferenceDevice device_from_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    std::ostringstream os;
    os << "device file: line " << line_of_offset(text, e.byte) << ": " << e.what();
    throw Error(ErrorKind::Parse, os.str());
  }
  if (!root.is_object()) throw Error(ErrorKind::Parse, "device file: top level must be an object");
  for (const char* key : {"dim", "n"}) {
    if (!root.contains(key)) field_error(key, "missing");
    if (!root.at(key).is_number_integer()) field_error(key, "expected an integer");
  }
  const int d = root.at("dim").get<int>();
  const int n = root.at("n").get<int>();
  if (d < 1) field_error("dim", "must be positive");
  if (n < 1) field_error("n", "must be positive");

  std::string label;
  if (root.contains("label")) {
    if (!root.at("label").is_string()) field_error("label", "expected a string");
    label = root.at("label").get<std::string>();
  }
  std::vector<Matrix> post;
  if (root.contains("post_states")) post = read_matrix_list(root, "post_states", n, d);

  if (root.contains("frame")) {
    const json& arr = root.at("frame");
    if (!arr.is_array() || static_cast<int>(arr.size()) != n) {
      field_error("frame", "expected " + std::to_string(n) + " rows");
    }
    Matrix f(n, d);
    for (int i = 0; i < n; ++i) {
      const json& row = arr[static_cast<std::size_t>(i)];
      const std::string field = "frame[" + std::to_string(i) + "]";
      if (!row.is_array() || static_cast<int>(row.size()) != d) {
        field_error(field, "expected " + std::to_string(d) + " numbers");
      }
      for (int c = 0; c < d; ++c) {
        f(i, c) = number_at(row[static_cast<std::size_t>(c)], field + "[" + std::to_string(c) + "]");
      }
    }
    ReferenceDevice dev = frame_to_device(FrameMatrix(std::move(f)), std::move(post));
    if (root.contains("elements")) {
      const std::vector<Matrix> given = read_matrix_list(root, "elements", n, d);
      for (int i = 0; i < n; ++i) {
        if ((given[static_cast<std::size_t>(i)] - dev.elements()[static_cast<std::size_t>(i)])
                .cwiseAbs()
                .maxCoeff() > 1e-9) {
          field_error("elements[" + std::to_string(i) + "]", "inconsistent with frame");
        }
      }
    }
    dev.set_label(std::move(label));
    return dev;
  }
  if (!root.contains("elements")) field_error("elements", "missing");
  return ReferenceDevice::make(d, read_matrix_list(root, "elements", n, d), std::move(post),
                               std::move(label));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ReferenceDevice load_device(const std::filesystem::path& path) {
  return device_from_json(read_file(path));
}

void save_device(const std::filesystem::path& path, const ReferenceDevice& device) {
  write_file_atomic(path, device_to_json(device));
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw Error(ErrorKind::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot rename " + tmp.string() + ": " + ec.message());
}

}  // namespace riclab
