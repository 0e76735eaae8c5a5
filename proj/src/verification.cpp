#include "tdchan/verification.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "tdchan/entropy.hpp"
#include "tdchan/error.hpp"
#include "tdchan/parallel.hpp"

namespace tdchan {

namespace {

constexpr int kMaxRejections = 10000;
constexpr double kNearZero = 1e-12;
constexpr double kFeasibilitySlack = 1e-12;
constexpr int kMaxEnumeratedN = 4;
constexpr double kNearZeroT = -1e-6;

void check_t_negative(int d, double t) {
  const double lo = Channel::lower_bound(d);
  if (!(t < 0.0) || t < lo - 1e-12 * std::abs(lo)) {
    std::ostringstream os;
    os << "t = " << t << " outside [" << lo << ", 0) for d = " << d;
    throw Error(Errc::BadT, os.str());
  }
}

// margins of the master inequality for every k in [0, n-1]
std::vector<double> master_margins(std::span<const double> nu, int d, double t) {
  const int n = static_cast<int>(nu.size());
  const double coef = master_coefficient(d, t);
  std::vector<double> first(static_cast<std::size_t>(n), 0.0);
  std::vector<double> rest;
  rest.reserve(nu.size());
  for (int l = 0; l < n; ++l) {
    rest.clear();
    for (int m = 0; m < n; ++m)
      if (m != l) rest.push_back(nu[static_cast<std::size_t>(m)]);
    auto e = elem_sym_all(rest);  // s_0 .. s_{n-1}
    const double w = 1.0 - nu[static_cast<std::size_t>(l)];
    for (int k = 0; k < n; ++k) first[static_cast<std::size_t>(k)] += w * e[static_cast<std::size_t>(n - k - 1)];
  }
  auto all = elem_sym_all(nu);
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    out[static_cast<std::size_t>(k)] = first[static_cast<std::size_t>(k)] - coef * all[static_cast<std::size_t>(n - k)];
  return out;
}

// vertices of {lo <= x_l <= hi, sum x >= bound}
std::vector<std::vector<double>> box_sum_vertices(int n, double lo, double hi, double bound) {
  std::vector<std::vector<double>> out;
  if (n <= 0) return out;
  const double slack = kFeasibilitySlack * std::max(1.0, std::abs(bound));
  const unsigned corners = 1u << n;
  for (unsigned mask = 0; mask < corners; ++mask) {
    std::vector<double> v(static_cast<std::size_t>(n));
    double sum = 0.0;
    for (int l = 0; l < n; ++l) {
      v[static_cast<std::size_t>(l)] = (mask >> l) & 1u ? hi : lo;
      sum += v[static_cast<std::size_t>(l)];
    }
    if (sum >= bound - slack) out.push_back(std::move(v));
  }
  for (int free = 0; free < n; ++free) {
    const unsigned others = 1u << (n - 1);
    for (unsigned mask = 0; mask < others; ++mask) {
      std::vector<double> v(static_cast<std::size_t>(n));
      double sum = 0.0;
      int bit = 0;
      for (int l = 0; l < n; ++l) {
        if (l == free) continue;
        v[static_cast<std::size_t>(l)] = (mask >> bit++) & 1u ? hi : lo;
        sum += v[static_cast<std::size_t>(l)];
      }
      const double x = bound - sum;
      if (x < lo - slack || x > hi + slack) continue;
      v[static_cast<std::size_t>(free)] = std::clamp(x, lo, hi);
      out.push_back(std::move(v));
    }
  }
  return out;
}

SchmidtVector sample_lambda(int d, Stream& rng) {
  std::vector<double> v = SchmidtVector::random(d, rng).values();
  // a quarter of the draws land on a face, exercising zero-weight deflation
  if (rng.uniform() < 0.25) {
    v[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(d)))] = 0.0;
    double sum = 0.0;
    for (double x : v) sum += x;
    if (sum <= 0.0) return SchmidtVector::uniform(d);
    for (auto& x : v) x /= sum;
  }
  return SchmidtVector::make(std::move(v), 1e-10);
}

std::pair<int, int> distinct_pair(int d, Stream& rng) {
  int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(d)));
  int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(d - 1)));
  if (j >= i) ++j;
  return {i, j};
}

bool requires_n_positive(ScanKind kind) {
  return kind == ScanKind::Main || kind == ScanKind::K0 || kind == ScanKind::SecondTerm || kind == ScanKind::FirstTerm;
}

bool requires_negative_t(ScanKind kind) { return kind != ScanKind::FinalPoly; }

std::vector<int> k_values_for(ScanKind kind, int d) {
  const int n = d - 2;
  std::vector<int> ks;
  switch (kind) {
    case ScanKind::Main:
    case ScanKind::FirstTerm:
      for (int k = 0; k <= n - 1; ++k) ks.push_back(k);
      break;
    case ScanKind::SecondTerm:
      for (int k = 1; k <= n; ++k) ks.push_back(k);
      break;
    case ScanKind::Sympol:
      for (int k = 0; k <= d - 1; ++k) ks.push_back(k);
      break;
    case ScanKind::Schur:
      for (int k = 0; k <= d - 2; ++k) ks.push_back(k);
      break;
    default:
      break;
  }
  return ks;
}

struct SampleOutcome {
  std::vector<double> input;
  std::vector<double> margins;  // one per k (or a single entry)
};

using SampleFn = std::function<SampleOutcome(std::size_t index)>;

struct CellAccumulator {
  long evaluated = 0;
  long violations = 0;
  double worst = std::numeric_limits<double>::infinity();
  std::vector<double> worst_input;

  void add(double margin, const std::vector<double>& input) {
    ++evaluated;
    if (margin < -kViolationTol) ++violations;
    if (margin < worst) {
      worst = margin;
      worst_input = input;
    }
  }
};

// Runs `samples` draws in parallel and folds them per k in index order.
std::vector<CellAccumulator> run_samples(std::size_t samples, std::size_t width, int threads, const SampleFn& fn) {
  std::vector<double> margins(samples * width, 0.0);
  parallel_for(samples, threads, [&](std::size_t i) {
    SampleOutcome o = fn(i);
    std::copy(o.margins.begin(), o.margins.end(), margins.begin() + static_cast<std::ptrdiff_t>(i * width));
  });
  std::vector<CellAccumulator> acc(width);
  std::vector<std::size_t> worst_index(width, 0);
  for (std::size_t i = 0; i < samples; ++i)
    for (std::size_t w = 0; w < width; ++w) {
      double m = margins[i * width + w];
      auto& a = acc[w];
      ++a.evaluated;
      if (m < -kViolationTol) ++a.violations;
      if (m < a.worst) {
        a.worst = m;
        worst_index[w] = i;
      }
    }
  // regenerate the worst inputs; sample i is a pure function of its index
  for (std::size_t w = 0; w < width; ++w)
    if (acc[w].evaluated > 0) acc[w].worst_input = fn(worst_index[w]).input;
  return acc;
}

ScanCell make_cell(ScanKind kind, int d, std::optional<double> t, std::optional<int> k, std::uint64_t seed,
                   const CellAccumulator& random_part, const CellAccumulator* exact_part = nullptr) {
  ScanCell cell;
  cell.kind = kind;
  cell.d = d;
  cell.t = t;
  cell.k = k;
  cell.seed = seed;
  cell.samples = random_part.evaluated;
  cell.violations = random_part.violations;
  double worst = random_part.worst;
  cell.worst_input = random_part.worst_input;
  if (exact_part) {
    cell.vertices = exact_part->evaluated;
    cell.violations += exact_part->violations;
    if (exact_part->worst < worst) {
      worst = exact_part->worst;
      cell.worst_input = exact_part->worst_input;
    }
  }
  if (cell.samples + cell.vertices > 0) cell.worst_margin = worst;
  return cell;
}

std::uint64_t kind_label(ScanKind kind) { return static_cast<std::uint64_t>(kind) + 101; }

std::vector<ScanCell> scan_cells(ScanKind kind, int d, std::size_t t_index, double t, const ScanConfig& cfg) {
  const int n = d - 2;
  const std::size_t samples = static_cast<std::size_t>(std::max(cfg.samples, 0L));
  auto stream = [&](std::size_t i) { return Stream(derive_key(cfg.seed, {kind_label(kind), static_cast<std::uint64_t>(d), t_index, i})); };
  const std::vector<int> ks = k_values_for(kind, d);
  std::vector<ScanCell> cells;

  switch (kind) {
    case ScanKind::Main: {
      auto acc = run_samples(samples, ks.size(), cfg.threads, [&](std::size_t i) {
        Stream rng = stream(i);
        NuVector nu = sample_polytope(n, d, t, rng);
        return SampleOutcome{nu.nu, master_margins(nu.nu, d, t)};
      });
      std::vector<CellAccumulator> exact(ks.size());
      if (n <= kMaxEnumeratedN) {
        const double ratio = 2.0 * t * d / (1.0 - t);
        for (const auto& v : polytope_vertices(n, ratio)) {
          auto m = master_margins(v, d, t);
          for (std::size_t w = 0; w < ks.size(); ++w) exact[w].add(m[w], v);
        }
      }
      for (std::size_t w = 0; w < ks.size(); ++w) cells.push_back(make_cell(kind, d, t, ks[w], cfg.seed, acc[w], &exact[w]));
      break;
    }
    case ScanKind::FirstTerm: {
      // weaker constraints: nu_l <= 1, sum nu >= n - 2, independent of t
      auto acc = run_samples(samples, ks.size(), cfg.threads, [&](std::size_t i) {
        Stream rng = stream(i);
        NuVector nu = sample_polytope_ratio(n, -2.0, rng);
        std::vector<double> m;
        for (int k : ks) m.push_back(first_term_value(nu.nu, k));
        return SampleOutcome{nu.nu, m};
      });
      std::vector<CellAccumulator> exact(ks.size());
      if (n <= kMaxEnumeratedN)
        for (const auto& v : polytope_vertices(n, -2.0))
          for (std::size_t w = 0; w < ks.size(); ++w) exact[w].add(first_term_value(v, ks[w]), v);
      for (std::size_t w = 0; w < ks.size(); ++w)
        cells.push_back(make_cell(kind, d, std::nullopt, ks[w], cfg.seed, acc[w], &exact[w]));
      break;
    }
    case ScanKind::SecondTerm: {
      auto acc = run_samples(samples, ks.size(), cfg.threads, [&](std::size_t i) {
        Stream rng = stream(i);
        NuVector nu = sample_polytope(n, d, t, rng);
        std::vector<double> m;
        for (int k : ks) m.push_back(second_term_value(nu.nu, k));
        return SampleOutcome{nu.nu, m};
      });
      for (std::size_t w = 0; w < ks.size(); ++w) cells.push_back(make_cell(kind, d, t, ks[w], cfg.seed, acc[w]));
      break;
    }
    case ScanKind::K0: {
      const double ratio = 2.0 * t * d / (1.0 - t);
      if (1.0 + ratio >= 0.0) {
        // no coordinate can be negative: the k = 0 case is covered by the
        // nonnegative argument and there is nothing to sample
        cells.push_back(make_cell(kind, d, t, 0, cfg.seed, CellAccumulator{}));
        break;
      }
      auto acc = run_samples(samples, 1, cfg.threads, [&](std::size_t i) {
        Stream rng = stream(i);
        NuVector nu = sample_polytope(n, d, t, rng, Stratum::OneNegative);
        return SampleOutcome{nu.nu, {k0_defect(nu.nu, d, t)}};
      });
      cells.push_back(make_cell(kind, d, t, 0, cfg.seed, acc[0]));
      break;
    }
    case ScanKind::Extreme: {
      CellAccumulator acc;
      if (auto defect = extreme_point_defect(d, t)) {
        const double nu1 = 2.0 * (1.0 + t * (d - 1)) / (1.0 - t) - 1.0;
        acc.add(*defect, {nu1, 1.0});
      }
      cells.push_back(make_cell(kind, d, t, std::nullopt, cfg.seed, acc));
      break;
    }
    case ScanKind::FinalPoly: {
      CellAccumulator acc;
      acc.add(final_polynomial(d, t), {static_cast<double>(d), t});
      cells.push_back(make_cell(kind, d, t, std::nullopt, cfg.seed, acc));
      break;
    }
    case ScanKind::Sympol: {
      const Channel ch(d, t);
      auto acc = run_samples(samples, ks.size(), cfg.threads, [&](std::size_t i) {
        Stream rng = stream(i);
        SchmidtVector lam = sample_lambda(d, rng);
        std::vector<double> m;
        for (int k : ks) m.push_back(-sympol_defect(ch, lam, k));
        return SampleOutcome{lam.values(), m};
      });
      for (std::size_t w = 0; w < ks.size(); ++w) cells.push_back(make_cell(kind, d, t, ks[w], cfg.seed, acc[w]));
      break;
    }
    case ScanKind::Schur: {
      const Channel ch(d, t);
      auto acc = run_samples(samples, ks.size(), cfg.threads, [&](std::size_t i) {
        Stream rng = stream(i);
        SchmidtVector lam = sample_lambda(d, rng);
        auto [a, b] = distinct_pair(d, rng);
        NuVector nu = lambda_to_nu(ch, lam);
        std::vector<double> m;
        for (int k : ks) m.push_back(-schur_defect(nu, k, a, b, ch));
        std::vector<double> input = lam.values();
        input.push_back(a);
        input.push_back(b);
        return SampleOutcome{input, m};
      });
      for (std::size_t w = 0; w < ks.size(); ++w) cells.push_back(make_cell(kind, d, t, ks[w], cfg.seed, acc[w]));
      break;
    }
    case ScanKind::S2Schur: {
      const Channel ch(d, t);
      auto acc = run_samples(samples, 1, cfg.threads, [&](std::size_t i) {
        Stream rng = stream(i);
        SchmidtVector lam = sample_lambda(d, rng);
        auto [a, b] = distinct_pair(d, rng);
        if (lam[a] < lam[b]) std::swap(a, b);
        const double eps = rng.uniform(0.0, 0.5);
        SchmidtVector averaged = t_transform(lam, a, b, eps);
        // averaged is majorized by lam, so S2 may only grow
        double margin = entropy_split(ch, averaged).s2 - entropy_split(ch, lam).s2;
        std::vector<double> input = lam.values();
        input.insert(input.end(), averaged.values().begin(), averaged.values().end());
        return SampleOutcome{input, {margin}};
      });
      cells.push_back(make_cell(kind, d, t, std::nullopt, cfg.seed, acc[0]));
      break;
    }
  }
  return cells;
}

}  // namespace

double master_coefficient(int d, double t) { return 2.0 * (1.0 + t * (d - 1)) / (t * d); }

double main_inequality_lhs(std::span<const double> nu, int k, int d, double t) {
  const int n = d - 2;
  if (n < 1 || static_cast<int>(nu.size()) != n)
    throw Error(Errc::BadLength, "expected " + std::to_string(std::max(n, 0)) + " variables (n = d - 2 >= 1), got " + std::to_string(nu.size()));
  if (k < 0 || k > n - 1) throw Error(Errc::BadK, "k = " + std::to_string(k) + " outside [0, " + std::to_string(n - 1) + "]");
  check_t_negative(d, t);
  return master_margins(nu, d, t)[static_cast<std::size_t>(k)];
}

double first_term_value(std::span<const double> nu, int k) {
  const int n = static_cast<int>(nu.size());
  if (k < 0 || k > n) throw Error(Errc::BadK, "k = " + std::to_string(k) + " outside [0, " + std::to_string(n) + "]");
  double value = 0.0;
  for (int l = 0; l < n; ++l) value += (1.0 - nu[static_cast<std::size_t>(l)]) * elem_sym_omit(nu, n - k - 1, {l});
  return value;
}

NuVector sample_polytope_ratio(int n, double ratio, Stream& rng, Stratum stratum) {
  if (n < 1) throw Error(Errc::BadLength, "polytope sampling needs n >= 1");
  const double lo = 1.0 + ratio;
  const double bound = n + ratio;
  NuVector out;
  out.ratio = ratio;
  out.nu.assign(static_cast<std::size_t>(n), 1.0);

  if (stratum == Stratum::Any) stratum = (lo < 0.0 && rng.uniform() >= 0.5) ? Stratum::OneNegative : Stratum::NonNegative;
  if (stratum == Stratum::OneNegative && lo >= 0.0) throw Error(Errc::BadSignPattern, "no coordinate can be negative for this ratio");

  auto& v = out.nu;
  if (stratum == Stratum::NonNegative) {
    const double box_lo = std::max(lo, 0.0);
    for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
      double sum = 0.0;
      for (auto& x : v) {
        x = rng.uniform(box_lo, 1.0);
        sum += x;
      }
      if (sum >= bound) return out;
    }
    // jittered vertex: start from (1, ..., 1) and spend part of the slack
    const double slack = std::min(n - bound, n * (1.0 - box_lo));
    for (auto& x : v) x = 1.0 - rng.uniform() * slack / n;
    return out;
  }

  const std::size_t neg = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(n)));
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    double sum = 0.0;
    bool near_zero = false;
    for (std::size_t l = 0; l < v.size(); ++l) {
      v[l] = l == neg ? rng.uniform(lo, 0.0) : rng.uniform();
      near_zero = near_zero || std::abs(v[l]) <= kNearZero;
      sum += v[l];
    }
    if (!near_zero && sum >= bound) return out;
  }
  double neg_value = rng.uniform(lo, 0.0);
  if (std::abs(neg_value) <= kNearZero) neg_value = 0.5 * lo;
  const double slack = (n - 1) + neg_value - bound;
  for (std::size_t l = 0; l < v.size(); ++l) v[l] = l == neg ? neg_value : 1.0 - rng.uniform() * slack / n;
  return out;
}

NuVector sample_polytope(int n, int d, double t, Stream& rng, Stratum stratum) {
  check_t_negative(d, t);
  return sample_polytope_ratio(n, 2.0 * t * d / (1.0 - t), rng, stratum);
}

std::vector<std::vector<double>> polytope_vertices(int n, double ratio) {
  return box_sum_vertices(n, 1.0 + ratio, 1.0, n + ratio);
}

double second_term_value(std::span<const double> nu, int k) {
  const int n = static_cast<int>(nu.size());
  if (k < 1 || k > n) throw Error(Errc::BadK, "k = " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
  return elem_sym(nu, n - k);
}

double k0_defect(std::span<const double> nu, int d, double t) {
  check_t_negative(d, t);
  int negatives = 0;
  double lhs = 0.0;
  for (double x : nu) {
    if (std::abs(x) <= kNearZero) throw Error(Errc::NearZeroNu, "a variable is within 1e-12 of zero");
    if (x < 0.0) ++negatives;
    lhs += (1.0 - x) / x;
  }
  if (negatives != 1) throw Error(Errc::BadSignPattern, "expected exactly one negative variable, found " + std::to_string(negatives));
  return master_coefficient(d, t) - lhs;
}

std::optional<double> extreme_point_defect(int d, double t) {
  check_t_negative(d, t);
  const double nu1 = 2.0 * (1.0 + t * (d - 1)) / (1.0 - t) - 1.0;
  if (!(nu1 < 0.0)) return std::nullopt;
  return edge_defect(d, t, nu1);
}

double edge_defect(int d, double t, double nu1) {
  const double nu2 = 2.0 * (1.0 + t * (d - 1)) / (1.0 - t) - nu1;
  return master_coefficient(d, t) - (1.0 / nu1 + 1.0 / nu2 - 2.0);
}

double final_polynomial(int d, double t) {
  const double td = t * d;
  return 3.0 * td * td + 3.0 * (1.0 - t) * td + (1.0 - t) * (1.0 - t);
}

double slice_extreme_max(int n, double ratio, double nu1) {
  if (n <= 1) return 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : box_sum_vertices(n - 1, 0.0, 1.0, n + ratio - nu1)) {
    double g = 0.0;
    for (double x : v) g += x > 0.0 ? (1.0 - x) / x : std::numeric_limits<double>::infinity();
    best = std::max(best, g);
  }
  return best;
}

std::string_view to_string(ScanKind kind) noexcept {
  switch (kind) {
    case ScanKind::Main: return "main";
    case ScanKind::K0: return "k0";
    case ScanKind::SecondTerm: return "second-term";
    case ScanKind::FirstTerm: return "first-term";
    case ScanKind::Extreme: return "extreme";
    case ScanKind::FinalPoly: return "final-poly";
    case ScanKind::Sympol: return "sympol";
    case ScanKind::Schur: return "schur";
    case ScanKind::S2Schur: return "s2-schur";
  }
  return "unknown";
}

std::optional<ScanKind> parse_scan_kind(std::string_view name) noexcept {
  for (ScanKind k : {ScanKind::Main, ScanKind::K0, ScanKind::SecondTerm, ScanKind::FirstTerm, ScanKind::Extreme,
                     ScanKind::FinalPoly, ScanKind::Sympol, ScanKind::Schur, ScanKind::S2Schur}) {
    if (to_string(k) == name) return k;
  }
  // underscore spellings are accepted too
  if (name == "second_term") return ScanKind::SecondTerm;
  if (name == "first_term") return ScanKind::FirstTerm;
  if (name == "final_poly") return ScanKind::FinalPoly;
  if (name == "s2_schur") return ScanKind::S2Schur;
  return std::nullopt;
}

std::vector<ScanKind> all_verify_kinds() {
  return {ScanKind::Main,      ScanKind::K0,     ScanKind::SecondTerm, ScanKind::FirstTerm, ScanKind::Extreme,
          ScanKind::FinalPoly, ScanKind::Sympol, ScanKind::Schur};
}

std::vector<double> default_t_grid(ScanKind kind, int d) {
  const int steps = (kind == ScanKind::Extreme || kind == ScanKind::FinalPoly) ? 101 : 9;
  const double a = Channel::lower_bound(d);
  const double b = kNearZeroT;
  std::vector<double> grid(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) grid[static_cast<std::size_t>(i)] = a + (b - a) * i / (steps - 1);
  grid.back() = b;
  return grid;
}

std::vector<ScanReport> run_scan(const ScanConfig& cfg) {
  if (cfg.d_min > cfg.d_max) throw Error(Errc::ConfigError, "empty d range");
  if (cfg.samples < 0) throw Error(Errc::ConfigError, "negative sample count");
  const int min_d = requires_n_positive(cfg.kind) ? 3 : 2;
  if (cfg.d_min < min_d)
    throw Error(Errc::ConfigError, std::string(to_string(cfg.kind)) + " scan needs d >= " + std::to_string(min_d) +
                                       (min_d == 3 ? " (n = d - 2 >= 1)" : ""));

  std::vector<ScanReport> reports;
  for (int d = cfg.d_min; d <= cfg.d_max; ++d) {
    ScanReport report;
    report.kind = cfg.kind;
    report.d = d;
    report.seed = cfg.seed;

    std::vector<double> grid;
    if (cfg.t_grid.empty()) {
      grid = default_t_grid(cfg.kind, d);
    } else {
      const double lo = Channel::lower_bound(d);
      for (double t : cfg.t_grid) {
        if (requires_negative_t(cfg.kind) && (!(t < 0.0) || t < lo - 1e-12 * std::abs(lo))) continue;
        grid.push_back(t);
      }
      if (grid.empty()) throw Error(Errc::ConfigError, "no t value of the grid is admissible for d = " + std::to_string(d));
    }
    // the first-term bound does not involve t
    if (cfg.kind == ScanKind::FirstTerm) grid.resize(1);

    report.k_values = k_values_for(cfg.kind, d);
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t ti = 0; ti < grid.size(); ++ti) {
      if (cfg.kind != ScanKind::FirstTerm) report.t_values.push_back(grid[ti]);
      for (auto& cell : scan_cells(cfg.kind, d, ti, grid[ti], cfg)) {
        report.samples += cell.samples + cell.vertices;
        report.violations += cell.violations;
        if (cell.worst_margin) worst = std::min(worst, *cell.worst_margin);
        report.cells.push_back(std::move(cell));
      }
    }
    if (std::isfinite(worst)) report.worst_margin = worst;
    reports.push_back(std::move(report));
  }
  return reports;
}

}  // namespace tdchan
