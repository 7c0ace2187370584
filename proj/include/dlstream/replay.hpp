#pragma once

// Line-oriented event replay format.
//
//   H,<n_classes>,<attr>,...      attr = N:<name> (numeric) | C<k>:<name> (nominal, k values)
//   I,<id>,<t>,<v1>,...,<vn>      instance; values in schema order
//   L,<id>,<t>,<y>                true label
//   O,<id>,<t>,<y>                oracle (active learning) label
//
// Numeric values use the shortest decimal text that round-trips to the same
// double, so a written file is byte-stable for a given section.

#include <filesystem>
#include <iosfwd>
#include <string>

#include "dlstream/stream_model.hpp"

namespace dls {

std::string format_double(double v);

/// Validates the section, then writes it. Throws ProtocolViolation on an invalid section.
void write_replay(std::ostream& out, const StreamSection& section);
void write_replay_file(const std::filesystem::path& path, const StreamSection& section);

/// Parses and validates; throws ProtocolViolation naming the offending line.
StreamSection read_replay(std::istream& in);
StreamSection read_replay_file(const std::filesystem::path& path);

}  // namespace dls
