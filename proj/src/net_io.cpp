#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "crnet/errors.hpp"
#include "crnet/net.hpp"

namespace crnet {

void write_net(std::ostream& out, const NetSpec& net) {
  out << net.base() << ' ' << net.m() << ' ' << net.s() << '\n';
  for (const auto& c : net.matrices()) {
    for (std::size_t r = 0; r < c.rows(); ++r) {
      for (std::size_t col = 0; col < c.cols(); ++col) {
        if (col) out << ' ';
        out << c(r, col);
      }
      out << '\n';
    }
  }
}

namespace {

bool next_content_line(std::istream& in, std::string& line, std::size_t& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") != std::string::npos) return true;
  }
  return false;
}

[[noreturn]] void fail(std::size_t lineno, const std::string& msg) {
  throw ParseError("net file line " + std::to_string(lineno) + ": " + msg);
}

}  // namespace

NetSpec read_net(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!next_content_line(in, line, lineno)) throw ParseError("net file is empty");
  long long b = 0, m = 0, s = 0;
  {
    std::istringstream hdr(line);
    std::string extra;
    if (!(hdr >> b >> m >> s) || (hdr >> extra)) fail(lineno, "expected header 'b m s'");
  }
  if (b < 2 || b > kMaxBase || !is_prime(static_cast<std::uint32_t>(b)))
    fail(lineno, "base must be a prime");
  if (m < 1 || m > 62) fail(lineno, "m out of range");
  if (s < 1) fail(lineno, "s must be >= 1");

  std::vector<FieldMatrix> mats;
  mats.reserve(static_cast<std::size_t>(s));
  for (long long j = 0; j < s; ++j) {
    std::vector<Digit> e;
    e.reserve(static_cast<std::size_t>(m * m));
    for (long long r = 0; r < m; ++r) {
      if (!next_content_line(in, line, lineno))
        throw ParseError("net file ended inside matrix " + std::to_string(j + 1));
      std::istringstream row(line);
      long long d;
      long long count = 0;
      while (row >> d) {
        if (d < 0 || d >= b) fail(lineno, "entry is not a digit in base " + std::to_string(b));
        e.push_back(static_cast<Digit>(d));
        ++count;
      }
      if (!row.eof()) fail(lineno, "non-numeric entry");
      if (count != m) fail(lineno, "expected " + std::to_string(m) + " digits");
    }
    mats.emplace_back(static_cast<std::uint32_t>(b), static_cast<std::size_t>(m),
                      static_cast<std::size_t>(m), std::move(e));
  }
  if (next_content_line(in, line, lineno)) fail(lineno, "trailing content after last matrix");
  return NetSpec(static_cast<std::uint32_t>(b), static_cast<unsigned>(m), std::move(mats),
                 Provenance::file);
}

NetSpec load_net(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open net file '" + path + "'");
  return read_net(in);
}

void save_net(const std::string& path, const NetSpec& net) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write net file '" + path + "'");
  write_net(out, net);
}

void write_points_csv(std::ostream& out, const PointBlock& points, PointFormat format) {
  out << 'k';
  for (std::size_t j = 0; j < points.s(); ++j) out << ",x" << (j + 1);
  out << '\n';
  const std::uint64_t den = points.denominator();
  char buf[32];
  for (std::size_t k = 0; k < points.rows(); ++k) {
    out << k;
    for (std::size_t j = 0; j < points.s(); ++j) {
      if (format == PointFormat::fraction) {
        out << ',' << points(k, j) << '/' << den;
      } else {
        std::snprintf(buf, sizeof buf, "%.17g", points.value(k, j));
        out << ',' << buf;
      }
    }
    out << '\n';
  }
}

}  // namespace crnet
