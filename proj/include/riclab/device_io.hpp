#pragma once

// Device file format (JSON, UTF-8):
//   { "dim": d, "n": N,
//     "elements":    [N arrays of d*d numbers, row-major],
//     "post_states": [same shape]          (optional; absent => parallel update)
//     "frame":       [N arrays of d numbers] (optional; elements derived from it)
//     "label":       "..." }              (optional)
// Numbers are written with 17 significant digits.

#include "riclab/povm.hpp"

#include <filesystem>
#include <string>

namespace riclab {

std::string device_to_json(const ReferenceDevice& device);

/// Throws ErrorKind::Parse with line and field information on malformed input.
ReferenceDevice device_from_json(const std::string& text);

ReferenceDevice load_device(const std::filesystem::path& path);
void save_device(const std::filesystem::path& path, const ReferenceDevice& device);

/// Formats a double with 17 significant digits ("%.17g").
std::string format_double(double v);

/// Writes via a temporary file in the same directory followed by rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

}  // namespace riclab
