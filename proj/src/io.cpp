#include "tdchan/io.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "tdchan/error.hpp"

namespace tdchan::io {

namespace {

void dump_into(std::string& out, const json& v, int indent, int depth) {
  auto newline = [&](int level) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * level), ' ');
  };
  switch (v.type()) {
    case json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        dump_into(out, it.value(), indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      // arrays of scalars stay on one line
      bool flat = true;
      for (const auto& e : v) flat = flat && !e.is_structured();
      out += '[';
      bool first = true;
      for (const auto& e : v) {
        if (!first) out += flat ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        dump_into(out, e, indent, depth + 1);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case json::value_t::number_float:
      out += format_number(v.get<double>());
      return;
    default:
      out += v.dump();
      return;
  }
}

double parse_double(std::string_view s, std::string_view what) {
  std::string buf(s);
  char* end = nullptr;
  errno = 0;
  double v = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size() || errno == ERANGE || !std::isfinite(v))
    throw Error(Errc::ParseError, "cannot parse " + std::string(what) + " '" + buf + "'");
  return v;
}

int parse_int(std::string_view s, std::string_view what) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error(Errc::ParseError, "cannot parse " + std::string(what) + " '" + std::string(s) + "'");
  return v;
}

json optional_number(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

}  // namespace

std::string format_number(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string dump(const json& value, int indent) {
  std::string out;
  dump_into(out, value, indent, 0);
  return out;
}

CMatrix matrix_from_json(const json& doc) {
  if (!doc.is_object()) throw Error(Errc::ParseError, "top-level value must be an object");
  if (!doc.contains("dim")) throw Error(Errc::ParseError, "missing field 'dim'");
  if (!doc["dim"].is_number_integer() || doc["dim"].get<long long>() < 1)
    throw Error(Errc::ParseError, "field 'dim' must be a positive integer");
  const auto n = static_cast<Eigen::Index>(doc["dim"].get<long long>());
  if (!doc.contains("rows")) throw Error(Errc::ParseError, "missing field 'rows'");
  const json& rows = doc["rows"];
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != n)
    throw Error(Errc::ParseError, "field 'rows' must be an array of " + std::to_string(n) + " rows");
  CMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    const std::string where = "rows[" + std::to_string(i) + "]";
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
      throw Error(Errc::ParseError, "field '" + where + "' must be an array of " + std::to_string(n) + " entries");
    for (Eigen::Index j = 0; j < n; ++j) {
      const json& e = row[static_cast<std::size_t>(j)];
      const std::string ewhere = where + "[" + std::to_string(j) + "]";
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw Error(Errc::ParseError, "field '" + ewhere + "' must be a [re, im] pair of numbers");
      m(i, j) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return json{{"dim", m.rows()}, {"rows", std::move(rows)}};
}

std::vector<double> parse_grid(std::string_view spec) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    std::size_t pos = spec.find(':', start);
    parts.push_back(spec.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  if (parts.size() == 1) return {parse_double(parts[0], "t")};
  if (parts.size() != 3) throw Error(Errc::ParseError, "grid spec must be 'a:b:steps', got '" + std::string(spec) + "'");
  const double a = parse_double(parts[0], "grid start");
  const double b = parse_double(parts[1], "grid end");
  const int steps = parse_int(parts[2], "grid steps");
  if (steps < 2) throw Error(Errc::ParseError, "grid needs at least 2 steps");
  if (!(a < b)) throw Error(Errc::ParseError, "grid start must be below grid end");
  std::vector<double> grid(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) grid[static_cast<std::size_t>(i)] = a + (b - a) * i / (steps - 1);
  grid.back() = b;
  return grid;
}

std::pair<int, int> parse_int_range(std::string_view spec) {
  std::size_t pos = spec.find(':');
  if (pos == std::string_view::npos) {
    int v = parse_int(spec, "d");
    return {v, v};
  }
  int a = parse_int(spec.substr(0, pos), "d range start");
  int b = parse_int(spec.substr(pos + 1), "d range end");
  if (a > b) throw Error(Errc::ParseError, "d range start exceeds its end");
  return {a, b};
}

std::vector<double> parse_list(std::string_view spec) {
  std::vector<double> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t pos = spec.find(',', start);
    out.push_back(parse_double(spec.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start), "list entry"));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

json spectrum_to_json(const Spectrum& s) {
  json offdiag = json::array();
  for (const auto& e : s.offdiag) offdiag.push_back(e.value);
  json secular = json::array();
  for (double g : s.secular) secular.push_back(g);
  return json{{"offdiag", std::move(offdiag)}, {"secular", std::move(secular)}};
}

json scan_report_to_json(const ScanReport& report) {
  json cells = json::array();
  for (const auto& c : report.cells) {
    cells.push_back(json{{"t", optional_number(c.t)},
                         {"k", c.k ? json(*c.k) : json(nullptr)},
                         {"samples", c.samples},
                         {"vertices", c.vertices},
                         {"violations", c.violations},
                         {"worst_margin", optional_number(c.worst_margin)},
                         {"worst_input", c.worst_input}});
  }
  return json{{"kind", std::string(to_string(report.kind))},
              {"d", report.d},
              {"t_values", report.t_values},
              {"k_values", report.k_values},
              {"samples", report.samples},
              {"violations", report.violations},
              {"worst_margin", optional_number(report.worst_margin)},
              {"seed", report.seed},
              {"cells", std::move(cells)}};
}

std::string scan_csv_header() { return "kind,d,t,k,samples,vertices,violations,worst_margin,seed"; }

std::string scan_cell_csv(const ScanCell& c) {
  std::ostringstream os;
  os << to_string(c.kind) << ',' << c.d << ',' << (c.t ? format_number(*c.t) : "") << ',' << (c.k ? std::to_string(*c.k) : "")
     << ',' << c.samples << ',' << c.vertices << ',' << c.violations << ','
     << (c.worst_margin ? format_number(*c.worst_margin) : "") << ',' << c.seed;
  return os.str();
}

}  // namespace tdchan::io
