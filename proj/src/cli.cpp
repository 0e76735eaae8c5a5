#include "tdchan/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "tdchan/channel.hpp"
#include "tdchan/entropy.hpp"
#include "tdchan/error.hpp"
#include "tdchan/io.hpp"
#include "tdchan/spectrum.hpp"
#include "tdchan/verification.hpp"

namespace tdchan {

namespace {

using io::json;

constexpr double kDenseDeltaTol = 1e-9;
constexpr double kGapTol = 1e-6;

enum class Format { Json, Csv, Text };

struct GlobalOptions {
  std::uint64_t seed = 0;
  int threads = 0;
  std::string log_base = "e";
  std::string format = "json";
  double tol = 1e-10;
};

struct Result {
  std::string text;
  int code = kExitOk;
};

Format parse_format(const std::string& s) {
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  return Format::Text;
}

LogBase parse_log_base(const std::string& s) { return s == "2" ? LogBase::Two : LogBase::E; }

std::string short_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

// Left-aligned table with a header row; columns sized to their widest cell.
std::string table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c + 1 < cells.size())
        os << std::left << std::setw(static_cast<int>(width[c])) << cells[c] << "  ";
      else
        os << cells[c];
    }
    os << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return os.str();
}

std::string csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) os << (c ? "," : "") << cells[c];
    os << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return os.str();
}

std::string render(Format fmt, const json& doc, const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& csv_rows,
                   const std::vector<std::vector<std::string>>& text_rows) {
  switch (fmt) {
    case Format::Json: return io::dump(doc) + "\n";
    case Format::Csv: return csv(header, csv_rows);
    case Format::Text: return table(header, text_rows);
  }
  return {};
}

SchmidtVector lambda_for(const Channel& ch, const std::string& spec) {
  auto values = io::parse_list(spec);
  if (static_cast<int>(values.size()) != ch.d())
    throw Error(Errc::DimensionMismatch, "--lambda has " + std::to_string(values.size()) + " entries, expected d = " + std::to_string(ch.d()));
  return SchmidtVector::make(std::move(values));
}

// apply ----------------------------------------------------------------------

struct ApplyArgs {
  int d = 0;
  double t = 0.0;
  std::string input;
  double herm_tol = kDefaultTolerances.hermitian;
  double trace_tol = kDefaultTolerances.trace;
  double psd_tol = kDefaultTolerances.psd;
};

Result cmd_apply(const ApplyArgs& a) {
  json doc;
  try {
    if (a.input == "-") {
      doc = json::parse(std::cin);
    } else {
      std::ifstream in(a.input);
      if (!in) throw Error(Errc::ParseError, "cannot open input file '" + a.input + "'");
      doc = json::parse(in);
    }
  } catch (const json::parse_error& e) {
    throw Error(Errc::ParseError, std::string("malformed JSON: ") + e.what());
  }
  CMatrix m = io::matrix_from_json(doc);
  Channel ch(a.d, a.t);
  DensityMatrix rho = DensityMatrix::make(std::move(m), Tolerances{a.herm_tol, a.trace_tol, a.psd_tol});
  DensityMatrix out = apply(ch, rho);
  return {io::dump(io::matrix_to_json(out.matrix())) + "\n", kExitOk};
}

// spectrum -------------------------------------------------------------------

struct PointArgs {
  int d = 0;
  double t = 0.0;
  std::string lambda;
};

Result cmd_spectrum(const PointArgs& a, Format fmt) {
  Channel ch(a.d, a.t);
  SchmidtVector lam = lambda_for(ch, a.lambda);
  Spectrum s = full_spectrum(ch, lam);
  auto closed = s.all_sorted();
  auto dense = sigma12(ch, lam).eigenvalues();
  double delta = 0.0;
  for (std::size_t i = 0; i < closed.size(); ++i) delta = std::max(delta, std::abs(closed[i] - dense[i]));

  json doc = io::spectrum_to_json(s);
  doc["dense_delta"] = delta;

  std::vector<std::vector<std::string>> csv_rows, text_rows;
  for (const auto& e : s.offdiag) {
    csv_rows.push_back({"offdiag", std::to_string(e.alpha + 1), std::to_string(e.beta + 1), io::format_number(e.value)});
    text_rows.push_back({"offdiag", std::to_string(e.alpha + 1), std::to_string(e.beta + 1), short_number(e.value)});
  }
  for (std::size_t i = 0; i < s.secular.size(); ++i) {
    csv_rows.push_back({"secular", std::to_string(i + 1), "", io::format_number(s.secular[i])});
    text_rows.push_back({"secular", std::to_string(i + 1), "", short_number(s.secular[i])});
  }
  csv_rows.push_back({"dense_delta", "", "", io::format_number(delta)});
  text_rows.push_back({"dense_delta", "", "", short_number(delta)});
  return {render(fmt, doc, {"family", "alpha", "beta", "value"}, csv_rows, text_rows),
          delta > kDenseDeltaTol ? kExitViolation : kExitOk};
}

// entropy --------------------------------------------------------------------

Result cmd_entropy(const PointArgs& a, Format fmt, LogBase base) {
  Channel ch(a.d, a.t);
  SchmidtVector lam = lambda_for(ch, a.lambda);
  EntropyReport r = entropy_split(ch, lam);
  const double dense = von_neumann_entropy(sigma12(ch, lam));
  json doc{{"s_total", in_base(r.s_total, base)},
           {"s1", in_base(r.s1, base)},
           {"s2", in_base(r.s2, base)},
           {"c", r.c},
           {"dense_s_total", in_base(dense, base)},
           {"log_base", base == LogBase::Two ? "2" : "e"}};
  std::vector<std::string> header{"s_total", "s1", "s2", "c", "dense_s_total"};
  std::vector<double> vals{in_base(r.s_total, base), in_base(r.s1, base), in_base(r.s2, base), r.c, in_base(dense, base)};
  std::vector<std::string> c_row, t_row;
  for (double v : vals) {
    c_row.push_back(io::format_number(v));
    t_row.push_back(short_number(v));
  }
  return {render(fmt, doc, header, {c_row}, {t_row}), kExitOk};
}

// min-entropy ----------------------------------------------------------------

Result cmd_min_entropy(int d, double t, const OptimizerConfig& cfg, Format fmt, LogBase base) {
  Channel ch(d, t);
  MinEntropyResult r = min_output_entropy(ch, cfg);
  json argmin = json::array();
  for (Eigen::Index i = 0; i < r.argmin.size(); ++i) argmin.push_back(json::array({r.argmin(i).real(), r.argmin(i).imag()}));
  json doc{{"d", d},
           {"t", t},
           {"h", in_base(r.h, base)},
           {"closed_form", in_base(r.closed_form, base)},
           {"argmin", std::move(argmin)},
           {"log_base", base == LogBase::Two ? "2" : "e"}};
  std::vector<std::string> header{"d", "t", "h", "closed_form"};
  return {render(fmt, doc, header,
                 {{std::to_string(d), io::format_number(t), io::format_number(in_base(r.h, base)),
                   io::format_number(in_base(r.closed_form, base))}},
                 {{std::to_string(d), short_number(t), short_number(in_base(r.h, base)), short_number(in_base(r.closed_form, base))}}),
          kExitOk};
}

// additivity -----------------------------------------------------------------

Result cmd_additivity(int d, const std::vector<double>& grid, const OptimizerConfig& cfg, Format fmt, LogBase base) {
  json rows = json::array();
  std::vector<std::vector<std::string>> csv_rows, text_rows;
  int code = kExitOk;
  for (double t : grid) {
    Channel ch(d, t);
    AdditivityResult r = additivity_gap(ch, cfg);
    if (r.gap < -kGapTol) code = kExitViolation;
    const double dist = distance_to_nearest_vertex(r.simplex_argmin);
    rows.push_back(json{{"t", t},
                        {"h", in_base(r.h, base)},
                        {"min_simplex", in_base(r.min_simplex, base)},
                        {"min_random", in_base(r.min_random, base)},
                        {"gap", in_base(r.gap, base)},
                        {"argmin", r.simplex_argmin},
                        {"vertex_distance", dist}});
    std::vector<double> vals{t, in_base(r.h, base), in_base(r.min_simplex, base), in_base(r.min_random, base), in_base(r.gap, base), dist};
    std::vector<std::string> c_row{std::to_string(d)}, t_row{std::to_string(d)};
    for (double v : vals) {
      c_row.push_back(io::format_number(v));
      t_row.push_back(short_number(v));
    }
    csv_rows.push_back(std::move(c_row));
    text_rows.push_back(std::move(t_row));
  }
  json doc{{"d", d}, {"log_base", base == LogBase::Two ? "2" : "e"}, {"seed", cfg.seed}, {"rows", std::move(rows)}};
  return {render(fmt, doc, {"d", "t", "h", "min_simplex", "min_random", "gap", "vertex_distance"}, csv_rows, text_rows), code};
}

// scans ----------------------------------------------------------------------

Result render_scans(const std::vector<ScanReport>& reports, Format fmt) {
  long violations = 0;
  json arr = json::array();
  std::vector<std::vector<std::string>> text_rows;
  std::string csv_out = io::scan_csv_header() + "\n";
  for (const auto& r : reports) {
    violations += r.violations;
    arr.push_back(io::scan_report_to_json(r));
    for (const auto& c : r.cells) {
      csv_out += io::scan_cell_csv(c) + "\n";
      text_rows.push_back({std::string(to_string(c.kind)), std::to_string(c.d), c.t ? short_number(*c.t) : "-",
                           c.k ? std::to_string(*c.k) : "-", std::to_string(c.samples), std::to_string(c.vertices),
                           std::to_string(c.violations), c.worst_margin ? short_number(*c.worst_margin) : "n/a"});
    }
  }
  const int code = violations > 0 ? kExitViolation : kExitOk;
  switch (fmt) {
    case Format::Json: return {io::dump(json{{"reports", std::move(arr)}, {"violations", violations}}) + "\n", code};
    case Format::Csv: return {csv_out, code};
    case Format::Text:
      return {table({"kind", "d", "t", "k", "samples", "vertices", "violations", "worst_margin"}, text_rows), code};
  }
  return {};
}

struct ScanArgs {
  std::string kind = "all";
  std::string d_range;
  std::string t_grid;
  long samples = 100000;
};

Result cmd_verify(const ScanArgs& a, const GlobalOptions& g, Format fmt, bool s2_only) {
  std::vector<ScanKind> kinds;
  if (s2_only) {
    kinds = {ScanKind::S2Schur};
  } else if (a.kind == "all") {
    kinds = all_verify_kinds();
  } else if (auto k = parse_scan_kind(a.kind)) {
    kinds = {*k};
  } else {
    throw Error(Errc::ConfigError, "unknown scan kind '" + a.kind + "'");
  }
  auto [d_min, d_max] = io::parse_int_range(a.d_range);
  std::vector<double> grid;
  if (!a.t_grid.empty()) grid = io::parse_grid(a.t_grid);

  std::vector<ScanReport> all;
  for (ScanKind kind : kinds) {
    ScanConfig cfg;
    cfg.kind = kind;
    cfg.d_min = d_min;
    cfg.d_max = d_max;
    cfg.t_grid = grid;
    cfg.samples = a.samples;
    cfg.seed = g.seed;
    cfg.threads = g.threads;
    auto reports = run_scan(cfg);
    all.insert(all.end(), std::make_move_iterator(reports.begin()), std::make_move_iterator(reports.end()));
  }
  return render_scans(all, fmt);
}

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::ParseError:
    case Errc::ConfigError:
    case Errc::BadK:
    case Errc::BadLength:
      return kExitUsage;
    default:
      return kExitValidation;
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Transpose depolarizing channel: spectra, output entropies and inequality scans", "tdchan"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (0: TDCHAN_THREADS or all cores)")->capture_default_str();
  app.add_option("--log-base", g.log_base, "Entropy logarithm base")->check(CLI::IsMember({"e", "2"}))->capture_default_str();
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}))->capture_default_str();
  app.add_option("--tol", g.tol, "Optimizer tolerance")->capture_default_str();

  ApplyArgs apply_args;
  auto* apply_cmd = app.add_subcommand("apply", "Apply the channel to a density matrix given as JSON");
  apply_cmd->add_option("--d", apply_args.d, "Dimension")->required();
  apply_cmd->add_option("--t", apply_args.t, "Channel parameter")->required();
  apply_cmd->add_option("--input", apply_args.input, "Input matrix JSON file ('-' for stdin)")->required();
  apply_cmd->add_option("--herm-tol", apply_args.herm_tol, "Hermiticity tolerance")->capture_default_str();
  apply_cmd->add_option("--trace-tol", apply_args.trace_tol, "Trace tolerance")->capture_default_str();
  apply_cmd->add_option("--psd-tol", apply_args.psd_tol, "Negative-eigenvalue tolerance")->capture_default_str();

  PointArgs spec_args;
  auto* spectrum_cmd = app.add_subcommand("spectrum", "Closed-form two-copy output spectrum with dense cross-check");
  spectrum_cmd->add_option("--d", spec_args.d, "Dimension")->required();
  spectrum_cmd->add_option("--t", spec_args.t, "Channel parameter")->required();
  spectrum_cmd->add_option("--lambda", spec_args.lambda, "Schmidt coefficients, comma separated")->required();

  PointArgs ent_args;
  auto* entropy_cmd = app.add_subcommand("entropy", "Output entropy split S1 + S2 at a Schmidt vector");
  entropy_cmd->add_option("--d", ent_args.d, "Dimension")->required();
  entropy_cmd->add_option("--t", ent_args.t, "Channel parameter")->required();
  entropy_cmd->add_option("--lambda", ent_args.lambda, "Schmidt coefficients, comma separated")->required();

  int me_d = 0;
  double me_t = 0.0;
  int restarts = 50;
  int n_random = 200;
  auto* min_cmd = app.add_subcommand("min-entropy", "Minimum output entropy of the single channel");
  min_cmd->add_option("--d", me_d, "Dimension")->required();
  min_cmd->add_option("--t", me_t, "Channel parameter")->required();
  min_cmd->add_option("--restarts", restarts, "Optimizer restarts")->capture_default_str();

  int add_d = 0;
  std::string add_t;
  auto* add_cmd = app.add_subcommand("additivity", "Two-copy minimum output entropy against twice the single-copy value");
  add_cmd->add_option("--d", add_d, "Dimension")->required();
  add_cmd->add_option("--t", add_t, "Channel parameter or grid a:b:steps")->required();
  add_cmd->add_option("--restarts", restarts, "Random simplex restarts")->capture_default_str();
  add_cmd->add_option("--n-random", n_random, "Random bipartite pure states")->capture_default_str();

  ScanArgs schur_args;
  auto* schur_cmd = app.add_subcommand("schur-scan", "Check S2 along T-transform pairs");
  schur_cmd->add_option("--d", schur_args.d_range, "Dimension or range a:b")->required();
  schur_cmd->add_option("--t-grid", schur_args.t_grid, "Grid a:b:steps (default: 9 points on [-1/(d-1), -1e-6])");
  schur_cmd->add_option("--samples", schur_args.samples, "Pairs per grid point")->capture_default_str();

  ScanArgs verify_args;
  auto* verify_cmd = app.add_subcommand("verify", "Scan the inequality chain for violations");
  verify_cmd->add_option("--kind", verify_args.kind,
                         "main, k0, second-term, first-term, extreme, final-poly, sympol, schur, s2-schur or all")
      ->capture_default_str();
  verify_cmd->add_option("--d", verify_args.d_range, "Dimension or range a:b")->required();
  verify_cmd->add_option("--t-grid", verify_args.t_grid, "Grid a:b:steps (default per kind)");
  verify_cmd->add_option("--samples", verify_args.samples, "Samples per (d, t) cell")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const Format fmt = parse_format(g.format);
  const LogBase base = parse_log_base(g.log_base);
  OptimizerConfig ocfg;
  ocfg.restarts = restarts;
  ocfg.tol = g.tol;
  ocfg.n_random = n_random;
  ocfg.seed = g.seed;
  ocfg.threads = g.threads;

  try {
    Result r;
    if (*apply_cmd) {
      r = cmd_apply(apply_args);
    } else if (*spectrum_cmd) {
      r = cmd_spectrum(spec_args, fmt);
    } else if (*entropy_cmd) {
      r = cmd_entropy(ent_args, fmt, base);
    } else if (*min_cmd) {
      r = cmd_min_entropy(me_d, me_t, ocfg, fmt, base);
    } else if (*add_cmd) {
      r = cmd_additivity(add_d, io::parse_grid(add_t), ocfg, fmt, base);
    } else if (*schur_cmd) {
      r = cmd_verify(schur_args, g, fmt, true);
    } else if (*verify_cmd) {
      r = cmd_verify(verify_args, g, fmt, false);
    }
    out << r.text;
    out.flush();
    return r.code;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace tdchan
