#include "acsplit/field_io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "acsplit/errors.hpp"

namespace acsplit {

namespace {

constexpr const char* kMagic = "ACF1";

std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return r;
  }
  return v;
}

}  // namespace

void write_field(std::ostream& out, const Field& f) {
  const GridSpec& g = f.grid();
  std::ostringstream header;
  header.precision(17);
  header << kMagic << ' ' << g.dims();
  for (int a = 0; a < g.dims(); ++a) header << ' ' << g.cells(a);
  for (int a = 0; a < g.dims(); ++a) header << ' ' << g.length(a);
  header << '\n';
  out << header.str();

  std::vector<char> payload(f.size() * sizeof(double));
  for (std::size_t i = 0; i < f.size(); ++i) {
    const std::uint64_t bits = to_little_endian(std::bit_cast<std::uint64_t>(f[i]));
    std::memcpy(payload.data() + i * sizeof(double), &bits, sizeof(bits));
  }
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
}

Field read_field(std::istream& in, bool allow_nonfinite) {
  std::string line;
  if (!std::getline(in, line)) throw FieldFormatError("missing ACF1 header line");

  std::istringstream header(line);
  std::vector<std::string> tokens;
  for (std::string t; header >> t;) tokens.push_back(t);
  if (tokens.size() < 2 || tokens[0] != kMagic) throw FieldFormatError("header does not start with 'ACF1 <dims>'");

  int dims = 0;
  try {
    std::size_t used = 0;
    dims = std::stoi(tokens[1], &used);
    if (used != tokens[1].size()) dims = 0;
  } catch (const std::exception&) {
    dims = 0;
  }
  if (dims < 1 || dims > GridSpec::kMaxDims) throw FieldFormatError("header dims must be 1, 2 or 3");
  if (tokens.size() != 2 + 2 * static_cast<std::size_t>(dims)) {
    std::ostringstream os;
    os << "header declares dims=" << dims << " but carries " << tokens.size() - 2
       << " axis entries (expected " << 2 * dims << ")";
    throw FieldFormatError(os.str());
  }

  std::vector<std::size_t> cells;
  std::vector<double> lengths;
  try {
    for (int a = 0; a < dims; ++a) {
      const std::string& t = tokens[2 + a];
      std::size_t used = 0;
      const unsigned long long m = std::stoull(t, &used);
      if (used != t.size() || t.front() == '-') throw FieldFormatError("bad cell count '" + t + "'");
      cells.push_back(static_cast<std::size_t>(m));
    }
    for (int a = 0; a < dims; ++a) {
      const std::string& t = tokens[2 + dims + a];
      std::size_t used = 0;
      lengths.push_back(std::stod(t, &used));
      if (used != t.size()) throw FieldFormatError("bad length '" + t + "'");
    }
  } catch (const FieldFormatError&) {
    throw;
  } catch (const std::exception&) {
    throw FieldFormatError("header axis entries are not numbers");
  }

  std::optional<GridSpec> grid;
  try {
    grid.emplace(cells, lengths);
  } catch (const InvalidArgument& e) {
    throw FieldFormatError(std::string("header describes an invalid grid: ") + e.what());
  }

  const std::size_t expected = grid->total_cells() * sizeof(double);
  std::vector<char> payload(expected);
  in.read(payload.data(), static_cast<std::streamsize>(expected));
  const auto got = static_cast<std::size_t>(in.gcount());
  if (got != expected) {
    std::ostringstream os;
    os << "payload size mismatch: expected " << expected << " bytes, found " << got;
    throw FieldFormatError(os.str());
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw FieldFormatError("payload size mismatch: trailing bytes after the last value");
  }

  Field f(*grid);
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, payload.data() + i * sizeof(double), sizeof(bits));
    f[i] = std::bit_cast<double>(to_little_endian(bits));
    if (!allow_nonfinite && !std::isfinite(f[i])) {
      std::ostringstream os;
      os << "non-finite value at cell " << i;
      throw FieldFormatError(os.str());
    }
  }
  return f;
}

void save_field(const std::filesystem::path& path, const Field& f) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_field(out, f);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

Field load_field(const std::filesystem::path& path, bool allow_nonfinite) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  try {
    return read_field(in, allow_nonfinite);
  } catch (const FieldFormatError& e) {
    throw FieldFormatError(path.string() + ": " + e.what());
  }
}

}  // namespace acsplit
