#include "tdchan/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "tdchan/error.hpp"
#include "tdchan/optimize.hpp"
#include "tdchan/parallel.hpp"

namespace tdchan {

namespace {

// stream labels for derive_key
constexpr std::uint64_t kSimplexRestart = 1;
constexpr std::uint64_t kRandomBipartite = 2;
constexpr std::uint64_t kPureRestart = 3;

std::vector<double> simplex_point(std::span<const double> x) {
  std::vector<double> full(x.begin(), x.end());
  double rest = 1.0;
  for (double v : x) rest -= v;
  full.push_back(rest);
  return project_to_simplex(full);
}

CVector unit_vector_from(std::span<const double> x) {
  const std::size_t d = x.size() / 2;
  CVector v(static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) v(static_cast<Eigen::Index>(i)) = Complex(x[i], x[d + i]);
  return v;
}

}  // namespace

double in_base(double nats, LogBase base) noexcept {
  return base == LogBase::Two ? nats / std::numbers::ln2 : nats;
}

double shannon_entropy(std::span<const double> p, double negative_tol) {
  double h = 0.0;
  for (double x : p) {
    if (x < -negative_tol) {
      std::ostringstream os;
      os << "eigenvalue " << x << " below -" << negative_tol;
      throw Error(Errc::NotPSD, os.str());
    }
    if (x > kEntropyClamp) h -= x * std::log(x);
  }
  return h;
}

double von_neumann_entropy(const DensityMatrix& rho, double negative_tol) {
  auto ev = rho.eigenvalues();
  return shannon_entropy(ev, negative_tol);
}

EntropyReport entropy_split(const Channel& ch, const SchmidtVector& lam) {
  Spectrum s = full_spectrum(ch, lam);
  EntropyReport r;
  r.s1 = shannon_entropy(s.offdiag_values());
  r.s2 = shannon_entropy(s.secular);
  r.s_total = r.s1 + r.s2;
  r.c = s.offdiag_sum;
  return r;
}

double simplex_output_entropy(const Channel& ch, const SchmidtVector& lam) { return entropy_split(ch, lam).s_total; }

double closed_form_min_entropy(const Channel& ch) {
  const double d = ch.d();
  const double t = ch.t();
  std::vector<double> p(static_cast<std::size_t>(ch.d()), (1.0 - t) / d);
  p[0] = t + (1.0 - t) / d;
  return shannon_entropy(p);
}

MinEntropyResult min_output_entropy(const Channel& ch, const OptimizerConfig& cfg) {
  const int d = ch.d();
  auto objective = [&](std::span<const double> x) {
    CVector v = unit_vector_from(x);
    double norm = v.norm();
    if (!(norm > 1e-150)) return std::numeric_limits<double>::infinity();
    return von_neumann_entropy(apply(ch, DensityMatrix::pure(v)));
  };

  const int restarts = std::max(cfg.restarts, 1);
  std::vector<NelderMeadResult> runs(static_cast<std::size_t>(restarts));
  parallel_for(runs.size(), cfg.threads, [&](std::size_t r) {
    Stream rng(derive_key(cfg.seed, {kPureRestart, r}));
    std::vector<double> x0(static_cast<std::size_t>(2 * d), 0.0);
    const bool complex_start = (r % 2) == 1;
    for (int i = 0; i < d; ++i) {
      x0[static_cast<std::size_t>(i)] = rng.normal();
      if (complex_start) x0[static_cast<std::size_t>(d + i)] = rng.normal();
    }
    NelderMeadOptions opts;
    opts.tol = cfg.tol;
    opts.max_evals = 200 * 2 * d;
    runs[r] = nelder_mead(objective, std::move(x0), opts);
  });

  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r)
    if (runs[r].value < runs[best].value - cfg.tol) best = r;

  MinEntropyResult out;
  out.h = runs[best].value;
  out.closed_form = closed_form_min_entropy(ch);
  CVector v = unit_vector_from(runs[best].x);
  out.argmin = v / v.norm();
  return out;
}

SimplexMinimum minimize_simplex_entropy(const Channel& ch, const OptimizerConfig& cfg) {
  const int d = ch.d();
  auto objective = [&](std::span<const double> x) {
    return simplex_output_entropy(ch, SchmidtVector::make(simplex_point(x), 1e-9));
  };

  // seeds: vertices, barycenter, Dirichlet draws
  const std::size_t n_seeds = static_cast<std::size_t>(d + 1 + std::max(cfg.restarts, 0));
  std::vector<SimplexMinimum> runs(n_seeds);
  parallel_for(n_seeds, cfg.threads, [&](std::size_t r) {
    std::vector<double> start;
    if (r < static_cast<std::size_t>(d)) {
      start = SchmidtVector::vertex(d, static_cast<int>(r)).values();
    } else if (r == static_cast<std::size_t>(d)) {
      start = SchmidtVector::uniform(d).values();
    } else {
      Stream rng(derive_key(cfg.seed, {kSimplexRestart, r}));
      start = SchmidtVector::random(d, rng).values();
    }
    std::vector<double> x0(start.begin(), start.end() - 1);
    const double seed_value = objective(x0);
    NelderMeadOptions opts;
    opts.tol = cfg.tol;
    opts.max_evals = 400 * d;
    NelderMeadResult nm = nelder_mead(objective, x0, opts);
    // keep the seed unless the descent genuinely improved on it
    if (nm.value < seed_value - cfg.tol)
      runs[r] = {nm.value, simplex_point(nm.x)};
    else
      runs[r] = {seed_value, simplex_point(x0)};
  });

  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r)
    if (runs[r].value < runs[best].value - cfg.tol) best = r;
  return runs[best];
}

AdditivityResult additivity_gap(const Channel& ch, const OptimizerConfig& cfg) {
  const int d = ch.d();
  AdditivityResult out;
  out.h = min_output_entropy(ch, cfg).h;

  SimplexMinimum sm = minimize_simplex_entropy(ch, cfg);
  out.min_simplex = sm.value;
  out.simplex_argmin = std::move(sm.argmin);

  const std::size_t n_random = static_cast<std::size_t>(std::max(cfg.n_random, 0));
  std::vector<double> values(n_random, std::numeric_limits<double>::infinity());
  parallel_for(n_random, cfg.threads, [&](std::size_t i) {
    Stream rng(derive_key(cfg.seed, {kRandomBipartite, i}));
    CVector psi = random_pure_state(d * d, rng);
    CMatrix out_state = apply_product(ch, psi * psi.adjoint());
    values[i] = von_neumann_entropy(DensityMatrix::assume_valid(0.5 * (out_state + out_state.adjoint())));
  });
  out.min_random = values.empty() ? std::numeric_limits<double>::infinity()
                                  : *std::min_element(values.begin(), values.end());

  out.gap = std::min(out.min_simplex, out.min_random) - 2.0 * out.h;
  return out;
}

double distance_to_nearest_vertex(std::span<const double> lam) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < lam.size(); ++a) {
    double dist = 0.0;
    for (std::size_t b = 0; b < lam.size(); ++b) dist += std::abs(lam[b] - (a == b ? 1.0 : 0.0));
    best = std::min(best, dist);
  }
  return best;
}

}  // namespace tdchan
