#pragma once

#include <filesystem>
#include <iosfwd>

#include "acsplit/grid.hpp"

namespace acsplit {

/// Field file layout:
///
///   ACF1 <dims> <M1> [M2 M3] <L1> [L2 L3]\n
///   <M1*...*Md IEEE-754 binary64 values, little-endian, axis 0 slowest>
///
/// Lengths are written with 17 significant digits so save/load is lossless.
void write_field(std::ostream& out, const Field& f);

/// Throws FieldFormatError on a malformed header, a payload of the wrong
/// size, or non-finite values (unless allow_nonfinite).
Field read_field(std::istream& in, bool allow_nonfinite = false);

/// File wrappers; IoError names the path when it cannot be opened or written.
void save_field(const std::filesystem::path& path, const Field& f);
Field load_field(const std::filesystem::path& path, bool allow_nonfinite = false);

}  // namespace acsplit
