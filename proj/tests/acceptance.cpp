// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fail.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/ooura_fourier_integrals.hpp>

#include "ecp/casimir.hpp"
#include "ecp/cli/config.hpp"
#include "ecp/cli/run.hpp"
#include "ecp/io/table.hpp"
#include "ecp/oracle.hpp"
#include "ecp/parallel.hpp"
#include "ecp/perturbation.hpp"
#include "ecp/thermal.hpp"

namespace {

using ecp::SymmetricSystem;

struct Outcome {
  bool pass;
  std::string detail;
};

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

SymmetricSystem fig2(double J, int N = 400) { return SymmetricSystem::from_detuning(2.0, J, -1.0, 0.01, N); }
SymmetricSystem fig5(int N) { return SymmetricSystem::from_detuning(2.0, 0.3, -1.0, 0.1, N); }

Outcome closed_vs_quadrature() {
  double worst = 0.0;
  for (double J : {0.3, 0.4})
    for (int R = 1; R <= 20; ++R) worst = std::max(worst, rel(ecp::cp_energy(fig2(J), R), ecp::cp_energy_quadrature(fig2(J), R)));
  return {worst < 1e-9, fmt("max rel err %.2e over J in {0.3, 0.4}, R = 1..20", worst)};
}

Outcome closed_vs_ksum() {
  double worst = 0.0;
  for (double J : {0.3, 0.4})
    for (int R = 1; R <= 20; ++R) {
      const auto sys = fig2(J, 2000).with_separation(R);
      const auto k = ecp::symmetric_spectrum_ksum(sys);
      const auto [plus, minus] = ecp::symmetric_spectrum_closed(sys);
      worst = std::max({worst, rel(k.Eplus, plus), rel(k.Eminus, minus)});
    }
  return {worst < 1e-8, fmt("max rel err %.2e at N = 2000", worst)};
}

Outcome ed_oracle() {
  const auto sys = fig2(0.3, 400);
  const auto ed = ecp::exact_diagonalize(ecp::build_matrix(sys.chain(), sys.impurities()));
  const double err = rel(ed.splitting(), 8.3333333333333333e-5);
  const bool ok = err < 0.01 && ed.ground_impurity_overlap > 0.999;
  return {ok, fmt("splitting rel err %.2e, overlap %.6f", err, ed.ground_impurity_overlap)};
}

Outcome decay_law() {
  const auto sys = SymmetricSystem::from_detuning(2.0, 0.3, -1.0, 0.01, 400);  // a = -0.6
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int n = 10;
  for (int R = 1; R <= n; ++R) {
    const double y = std::log(std::abs(ecp::ecp_force(sys, R)));
    sx += R;
    sy += y;
    sxx += double(R) * R;
    sxy += R * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double err = std::abs(-slope - std::log(3.0));
  return {err < 1e-8, fmt("fitted Gamma %.15f, |Gamma - ln 3| = %.2e", -slope, err)};
}

Outcome monotonicity() {
  bool ok = true;
  for (int R : {1, 2, 5}) {
    double prev = 0.0;
    for (int i = 1; i <= 99; ++i) {
      const double f = std::abs(ecp::ecp_force(fig2(0.005 * i), R));
      ok = ok && f > prev;
      prev = f;
    }
    prev = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 56; ++i) {
      const double delta = -1.25 - 0.05 * i;
      const double f = std::abs(ecp::ecp_force(SymmetricSystem::from_detuning(2.0, 0.6, delta, 0.01, 400), R));
      ok = ok && f < prev;
      prev = f;
    }
  }
  double prev_gamma = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double gamma = ecp::decay_rate(-0.99 + 0.98 * i / 99.0);
    ok = ok && gamma > prev_gamma;
    prev_gamma = gamma;
  }
  return {ok, "|f| up in J, down in |delta| at R in {1, 2, 5}; Gamma up in a on 100 points"};
}

Outcome continuum() {
  const auto near = fig2(0.45);
  const auto far = fig2(0.3);
  const double gap_near = rel(ecp::cp_energy_continuum(near, 1).b, ecp::decay_rate(near.a()));
  const double gap_far = rel(ecp::cp_energy_continuum(far, 1).b, ecp::decay_rate(far.a()));

  // Independent check of the closed form: integrate the quadratic-dispersion
  // integrand over the whole real line.
  boost::math::quadrature::ooura_fourier_cos<double> cosine;
  const double J = 0.45, lambda = 0.01, b = ecp::cp_energy_continuum(near, 1).b;
  double worst = 0.0;
  for (int R = 1; R <= 6; ++R) {
    const auto [integral, err] = cosine.integrate([&](double k) { return 1.0 / (k * k + b * b); }, double(R));
    (void)err;
    const double energy = -lambda * lambda / (2 * M_PI * J) * 2.0 * integral;
    worst = std::max(worst, rel(energy, ecp::cp_energy_continuum(near, R).energy));
  }
  const bool ok = gap_near < 0.02 && gap_far > 0.04 && worst < 1e-8;
  std::ostringstream d;
  d << fmt("|b - Gamma|/Gamma = %.4f at J = 0.45, %.4f at J = 0.3", gap_near, gap_far)
    << fmt("; closed form vs real-line integral %.1e", worst);
  return {ok, d.str()};
}

Outcome thermal_limits() {
  double worst = 0.0;
  int worst_R = 0;
  for (int N : {100, 200, 400})
    for (int R = 1; R <= 10; ++R) {
      const double e = rel(ecp::thermal_force(fig5(N), 1e-6, R), ecp::ecp_force(fig5(N), R));
      if (e > worst) {
        worst = e;
        worst_R = R;
      }
    }
  bool ordered = true;
  for (int N : {100, 200, 400})
    for (int R = 1; R <= 8; ++R) {
      const double f0 = std::abs(ecp::thermal_force(fig5(N), 0.0, R));
      const double f1 = std::abs(ecp::thermal_force(fig5(N), 0.1, R));
      const double f2 = std::abs(ecp::thermal_force(fig5(N), 1.0, R));
      ordered = ordered && f0 >= f1 && f1 >= f2;
    }
  std::ostringstream d;
  d << fmt("T = 1e-6 max rel err %.2e", worst) << " at R = " << worst_R
    << " (pair splitting at R = " << worst_R << ": "
    << fmt("%.2e", -2.0 * ecp::cp_energy(fig5(200), worst_R)) << ")"
    << "; ordering |f(0)| >= |f(0.1)| >= |f(1)| " << (ordered ? "holds" : "violated");
  return {worst < 1e-6 && ordered, d.str()};
}

Outcome degenerate_cases() {
  const auto flat = fig2(0.0);
  bool ok = std::isinf(ecp::decay_rate(flat.a())) && ecp::decay_profile(flat).infinite_decay();
  for (int R = 1; R <= 10; ++R) ok = ok && ecp::cp_energy(flat, R) == 0.0 && ecp::ecp_force(flat, R) == 0.0;

  const auto free = SymmetricSystem::from_detuning(2.0, 0.3, -1.0, 0.0, 100, 3);
  const auto ed = ecp::exact_diagonalize(ecp::build_matrix(free.chain(), free.impurities()));
  std::vector<double> expected{free.eps0(), free.eps0()};
  for (double k : ecp::brillouin_modes(free.chain())) expected.push_back(ecp::dispersion(free.chain(), k));
  std::sort(expected.begin(), expected.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) worst = std::max(worst, std::abs(ed.eigenvalues[i] - expected[i]));
  ok = ok && worst < 1e-13;
  return {ok, fmt("J = 0: zero energy/force, infinite Gamma; lambda = 0 ED vs decoupled max diff %.1e", worst)};
}

Outcome determinism() {
  auto render = [](const std::vector<std::pair<std::string, std::string>>& flags) {
    const auto cfg = ecp::cli::resolve_config({}, flags);
    std::ostringstream out;
    ecp::cli::write_table(out, cfg, ecp::cli::run(cfg));
    return out.str();
  };
  bool ok = true;
  for (const char* preset : {"fig2", "fig3", "fig4", "fig5"}) ok = ok && render({{"preset", preset}}) == render({{"preset", preset}});

  const auto csv = render({{"preset", "fig2"}});
  std::istringstream in(csv);
  const auto series = ecp::io::read_force_series(in);
  ok = ok && series.size() == 2;
  for (const auto& s : series) ok = ok && s.curve == ecp::force_curve(fig2(s.J), 1, 10);

  // Parallel evaluation order must not leak into results.
  auto fn = [](std::size_t i) { return ecp::thermal_force(fig5(100), 0.1, int(i) + 1); };
  ok = ok && ecp::parallel_map(10, fn, 1) == ecp::parallel_map(10, fn, 4);
  return {ok, "presets byte-identical across runs; fig2 CSV re-parse equals in-memory curves"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"closed form vs quadrature", closed_vs_quadrature},
      {"closed form vs k-sum", closed_vs_ksum},
      {"exact diagonalization oracle", ed_oracle},
      {"exponential decay law", decay_law},
      {"monotonicity", monotonicity},
      {"continuum approximation", continuum},
      {"thermal limits", thermal_limits},
      {"degenerate cases", degenerate_cases},
      {"determinism and round trip", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o{false, ""};
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
