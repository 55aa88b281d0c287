#include "bwave/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace bwave {

namespace {

void write_grid_header(std::ostream& os, const Grid& g) {
  os << "# n=" << g.size() << " L=" << format_double(g.length()) << '\n';
}

// Parses "# k1=v1 k2=v2 ..." into a map.
std::map<std::string, std::string> parse_header(const std::string& line) {
  if (line.empty() || line[0] != '#') throw ParseError("expected '#' header line, got: " + line);
  std::map<std::string, std::string> out;
  std::istringstream ss(line.substr(1));
  std::string tok;
  while (ss >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) continue;
    out[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return out;
}

double to_number(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw ParseError("trailing characters in " + what + ": " + s);
    return v;
  } catch (const std::logic_error&) {
    throw ParseError("malformed number for " + what + ": " + s);
  }
}

double header_value(const std::map<std::string, std::string>& h, const std::string& key) {
  const auto it = h.find(key);
  if (it == h.end()) throw ParseError("missing header key " + key);
  return to_number(it->second, key);
}

std::string next_line(std::istream& is, const char* what) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError(std::string("unexpected end of input: ") + what);
  return line;
}

Grid read_grid_header(std::istream& is) {
  const auto h = parse_header(next_line(is, "grid header"));
  const double n = header_value(h, "n");
  const double L = header_value(h, "L");
  if (!(n >= 16) || n != std::floor(n)) throw ParseError("bad grid size in header");
  try {
    return Grid(static_cast<std::size_t>(n), L);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("bad grid header: ") + e.what());
  }
}

// Reads n rows of `cols` numbers; column 0 is x and must match the grid.
std::vector<std::vector<double>> read_rows(std::istream& is, const Grid& g, std::size_t cols) {
  std::vector<std::vector<double>> out(cols - 1, std::vector<double>(g.size()));
  std::string line;
  std::size_t j = 0;
  while (j < g.size() && std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    double x = 0.0;
    if (!(ss >> x)) throw ParseError("malformed row " + std::to_string(j));
    if (std::abs(x - g.x(j)) > 1e-9 * (1.0 + g.length())) {
      throw ParseError("abscissa mismatch at row " + std::to_string(j));
    }
    for (std::size_t c = 0; c + 1 < cols; ++c) {
      std::string tok;
      if (!(ss >> tok)) throw ParseError("missing column in row " + std::to_string(j));
      out[c][j] = to_number(tok, "sample");
    }
    ++j;
  }
  if (j != g.size()) throw ParseError("expected " + std::to_string(g.size()) + " rows, got " +
                                      std::to_string(j));
  return out;
}

Field make_field(const Grid& g, std::vector<double> v) {
  try {
    return Field(g, std::move(v));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_field(std::ostream& os, const Field& u) {
  const Grid& g = u.grid();
  write_grid_header(os, g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    os << format_double(g.x(j)) << ' ' << format_double(u[j]) << '\n';
  }
}

Field read_field(std::istream& is) {
  const Grid g = read_grid_header(is);
  auto cols = read_rows(is, g, 2);
  return make_field(g, std::move(cols[0]));
}

void write_pair(std::ostream& os, const MinimizerResult& r, double a, double c) {
  const Grid& g = r.pair.grid();
  write_grid_header(os, g);
  os << "# mu=" << format_double(r.mu) << " lambda=" << format_double(r.lambda)
     << " a=" << format_double(a) << " c=" << format_double(c) << '\n';
  for (std::size_t j = 0; j < g.size(); ++j) {
    os << format_double(g.x(j)) << ' ' << format_double(r.pair.f[j]) << ' '
       << format_double(r.pair.g[j]) << '\n';
  }
}

PairFile read_pair(std::istream& is) {
  const Grid g = read_grid_header(is);
  const auto h = parse_header(next_line(is, "pair header"));
  auto cols = read_rows(is, g, 3);
  PairFile out{FieldPair(make_field(g, std::move(cols[0])), make_field(g, std::move(cols[1])))};
  out.mu = header_value(h, "mu");
  out.lambda = header_value(h, "lambda");
  out.a = header_value(h, "a");
  out.c = header_value(h, "c");
  return out;
}

void write_wave(std::ostream& os, const Wave& w) {
  const Grid& g = w.phi.grid();
  write_grid_header(os, g);
  os << "# omega=" << format_double(w.omega) << " mu=" << format_double(w.source_mu)
     << " lambda=" << format_double(w.source_lambda) << '\n';
  for (std::size_t j = 0; j < g.size(); ++j) {
    os << format_double(g.x(j)) << ' ' << format_double(w.phi[j]) << ' '
       << format_double(w.psi[j]) << '\n';
  }
}

Wave read_wave(std::istream& is) {
  const Grid g = read_grid_header(is);
  const auto h = parse_header(next_line(is, "wave header"));
  auto cols = read_rows(is, g, 3);
  Wave w{make_field(g, std::move(cols[0])), make_field(g, std::move(cols[1]))};
  w.omega = header_value(h, "omega");
  w.source_mu = header_value(h, "mu");
  w.source_lambda = header_value(h, "lambda");
  return w;
}

void write_diagnostics(std::ostream& os, const EvolutionDiagnostics& d) {
  os << "# t H mass_u mass_eta momentum prop_err\n";
  for (std::size_t i = 0; i < d.size(); ++i) {
    os << format_double(d.times[i]) << ' ' << format_double(d.h_values[i]) << ' '
       << format_double(d.mass_u[i]) << ' ' << format_double(d.mass_eta[i]) << ' '
       << format_double(d.momentum[i]) << ' ' << format_double(d.propagation_error[i]) << '\n';
  }
}

void write_history(std::ostream& os, const std::vector<IterationRecord>& history) {
  os << "# tau residual\n";
  for (const auto& r : history) {
    os << format_double(r.tau) << ' ' << format_double(r.residual) << '\n';
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << contents;
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace bwave
