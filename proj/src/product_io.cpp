#include <bit>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "crnet/errors.hpp"
#include "crnet/fast_product.hpp"

namespace crnet {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    std::string field = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    const auto b = field.find_first_not_of(" \t");
    const auto e = field.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? std::string() : field.substr(b, e - b + 1));
    if (comma == std::string::npos) return out;
    start = comma + 1;
  }
}

bool parse_double(const std::string& s, double& v) {
  if (s.empty()) return false;
  errno = 0;
  char* end = nullptr;
  v = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && errno != ERANGE;
}

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char bytes[sizeof(T)];
    std::memcpy(bytes, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
    std::memcpy(&v, bytes, sizeof(T));
  }
  return v;
}

}  // namespace

RealMatrix read_matrix_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::size_t cols = 0;
  std::vector<double> data;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto fields = split_fields(line);
    std::vector<double> row(fields.size());
    bool numeric = true;
    for (std::size_t i = 0; i < fields.size() && numeric; ++i) numeric = parse_double(fields[i], row[i]);
    if (!numeric) {
      if (first) {
        first = false;
        continue;
      }
      throw ParseError("matrix CSV line " + std::to_string(lineno) + ": non-numeric field");
    }
    first = false;
    if (cols == 0) cols = row.size();
    if (row.size() != cols)
      throw ParseError("matrix CSV line " + std::to_string(lineno) + ": expected " +
                       std::to_string(cols) + " fields");
    data.insert(data.end(), row.begin(), row.end());
  }
  if (cols == 0) throw ParseError("matrix CSV has no data rows");
  const std::size_t rows = data.size() / cols;
  RealMatrix out(rows, cols, std::move(data));
  if (!out.all_finite()) throw ParseError("matrix CSV has non-finite entries");
  return out;
}

RealMatrix load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open matrix file '" + path + "'");
  return read_matrix_csv(in);
}

void write_matrix_csv(std::ostream& out, const RealMatrix& m) {
  char buf[32];
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", m(r, c));
      if (c) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

void write_matrix_binary(std::ostream& out, const RealMatrix& m) {
  const std::uint64_t hdr[2] = {to_little<std::uint64_t>(m.rows()),
                                to_little<std::uint64_t>(m.cols())};
  out.write(reinterpret_cast<const char*>(hdr), sizeof hdr);
  for (double v : m.entries()) {
    const double le = to_little(v);
    out.write(reinterpret_cast<const char*>(&le), sizeof le);
  }
}

RealMatrix read_matrix_binary(std::istream& in) {
  std::uint64_t hdr[2];
  if (!in.read(reinterpret_cast<char*>(hdr), sizeof hdr)) throw ParseError("binary matrix: short header");
  const std::uint64_t rows = to_little(hdr[0]);
  const std::uint64_t cols = to_little(hdr[1]);
  std::uint64_t count;
  if (__builtin_mul_overflow(rows, cols, &count) || count > (std::uint64_t{1} << 40))
    throw ParseError("binary matrix: implausible dimensions");
  std::vector<double> data(count);
  if (count && !in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(count * 8)))
    throw ParseError("binary matrix: truncated data");
  for (double& v : data) v = to_little(v);
  if (in.peek() != std::char_traits<char>::eof()) throw ParseError("binary matrix: trailing bytes");
  return RealMatrix(rows, cols, std::move(data));
}

}  // namespace crnet
