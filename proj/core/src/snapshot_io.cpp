#include "atmocirc/snapshot_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>
#include <vector>

namespace atmocirc {

namespace {

void append(std::string& out, double x) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", x);
  out.append(buf, static_cast<std::size_t>(n));
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SnapshotError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Splits a CSV file with the given header into rows of `columns` doubles.
std::vector<double> parse_table(const std::filesystem::path& path, std::string_view header,
                                std::size_t columns) {
  const std::string text = slurp(path);
  std::vector<double> values;
  std::size_t pos = 0;
  int line_no = 0;
  bool saw_header = false;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != header)
        throw SnapshotError(path.string() + ": expected header '" + std::string(header) + "'");
      saw_header = true;
      continue;
    }
    std::size_t count = 0;
    const char* p = line.data();
    const char* last = line.data() + line.size();
    while (true) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(p, last, v);
      if (ec != std::errc())
        throw SnapshotError(path.string() + ":" + std::to_string(line_no) + ": bad number");
      values.push_back(v);
      ++count;
      p = ptr;
      if (p == last) break;
      if (*p != ',')
        throw SnapshotError(path.string() + ":" + std::to_string(line_no) + ": expected ','");
      ++p;
    }
    if (count != columns)
      throw SnapshotError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                          std::to_string(columns) + " columns");
  }
  if (!saw_header) throw SnapshotError(path.string() + ": empty file");
  return values;
}

void check_coordinates(const std::filesystem::path& path, const Grid& grid,
                       const std::vector<double>& v, std::size_t columns) {
  if (v.size() != grid.size() * columns)
    throw SnapshotError(path.string() + ": expected " + std::to_string(grid.size()) +
                        " rows for a " + std::to_string(grid.n1()) + "x" +
                        std::to_string(grid.n2()) + " grid");
  for (int j = 0; j < grid.n2(); ++j) {
    for (int i = 0; i < grid.n1(); ++i) {
      const std::size_t r = grid.index(i, j) * columns;
      if (std::abs(v[r] - grid.x1(i)) > 1e-9 || std::abs(v[r + 1] - grid.x2(j)) > 1e-9)
        throw SnapshotError(path.string() + ": node (" + std::to_string(i) + ", " +
                            std::to_string(j) + ") is off the grid");
    }
  }
}

}  // namespace

std::string snapshot_name(long step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snap_%06ld.csv", step);
  return buf;
}

std::string format_snapshot(const State& s) {
  const Grid& g = s.grid();
  std::string out = "x1,x2,u1,u2,T,q,p\n";
  out.reserve(g.size() * 7 * 24);
  for (int j = 0; j < g.n2(); ++j) {
    for (int i = 0; i < g.n1(); ++i) {
      append(out, g.x1(i));
      out += ',';
      append(out, g.x2(j));
      for (const ScalarField* f : {&s.u1, &s.u2, &s.T, &s.q, &s.p}) {
        out += ',';
        append(out, (*f)(i, j));
      }
      out += '\n';
    }
  }
  return out;
}

void write_snapshot(const std::filesystem::path& path, const State& s) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SnapshotError("cannot write " + path.string());
  out << format_snapshot(s);
  if (!out.flush()) throw SnapshotError("write failed: " + path.string());
}

State read_snapshot(const std::filesystem::path& path, const Grid& grid) {
  const std::vector<double> v = parse_table(path, "x1,x2,u1,u2,T,q,p", 7);
  check_coordinates(path, grid, v, 7);
  State s(grid);
  ScalarField* fields[] = {&s.u1, &s.u2, &s.T, &s.q, &s.p};
  for (std::size_t n = 0; n < grid.size(); ++n)
    for (std::size_t c = 0; c < 5; ++c) fields[c]->values()[n] = v[n * 7 + 2 + c];
  return s;
}

std::pair<ScalarField, ScalarField> read_forcing_file(const std::filesystem::path& path,
                                                      const Grid& grid) {
  const std::vector<double> v = parse_table(path, "x1,x2,Q,G", 4);
  check_coordinates(path, grid, v, 4);
  ScalarField Q(grid, Boundary::free);
  ScalarField G(grid, Boundary::free);
  for (std::size_t n = 0; n < grid.size(); ++n) {
    Q.values()[n] = v[n * 4 + 2];
    G.values()[n] = v[n * 4 + 3];
  }
  return {std::move(Q), std::move(G)};
}

}  // namespace atmocirc
