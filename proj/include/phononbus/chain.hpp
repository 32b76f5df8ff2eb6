#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "phononbus/constants.hpp"
#include "phononbus/errors.hpp"

namespace phononbus {

// N ions of mass `mass` and charge `charge` in a harmonic axial well of
// frequency omega_x.  Dimensionless positions are measured in units of the
// Coulomb length ell = (k_C q^2 / (M omega_x^2))^{1/3} where k_C is the
// Coulomb prefactor (1/(4 pi eps0) in SI, 1 in natural units).
struct IonChain {
  int count = 1;
  double mass = 1.0;
  double charge = 1.0;
  double omega_x = 1.0;
  double hbar = 1.0;
  double coulomb = 1.0;

  static IonChain natural(int n) {
    IonChain c;
    c.count = n;
    c.validate();
    return c;
  }

  static IonChain si(int n, double mass_kg, double omega_x_rad_s,
                     double charge_coulomb = si::elementary_charge) {
    IonChain c;
    c.count = n;
    c.mass = mass_kg;
    c.charge = charge_coulomb;
    c.omega_x = omega_x_rad_s;
    c.hbar = si::hbar;
    c.coulomb = 1.0 / (4.0 * pi * si::epsilon0);
    c.validate();
    return c;
  }

  void validate() const {
    if (count < 1)
      throw InvalidArgument("IonChain: ion count must be >= 1, got " +
                            std::to_string(count));
    if (!(mass > 0.0) || !(charge > 0.0) || !(omega_x > 0.0) ||
        !(hbar > 0.0) || !(coulomb > 0.0))
      throw InvalidArgument("IonChain: all physical parameters must be positive");
  }

  double length_scale() const {
    return std::cbrt(coulomb * charge * charge / (mass * omega_x * omega_x));
  }

  // Ground-state extent sqrt(hbar / (2 M omega)) of a mode at frequency omega.
  double zero_point_length(double omega) const {
    return std::sqrt(hbar / (2.0 * mass * omega));
  }
};

// Axial normal mode: frequency, mass-normalized displacement pattern, and
// (once attached) per-ion Lamb-Dicke parameters for a chosen wavevector.
struct ModeSpec {
  int p = 0;  // 1-based; p = 1 is the center-of-mass mode
  double omega = 0.0;
  Eigen::VectorXd b;
  Eigen::VectorXd eta;  // empty until attach_lamb_dicke fills it
};

namespace detail {

// Force balance for dimensionless positions: each ion must sit where the
// trap pull cancels the net Coulomb push from its neighbors.
inline Eigen::VectorXd force_residual(const Eigen::VectorXd& u) {
  const int n = static_cast<int>(u.size());
  Eigen::VectorXd f(n);
  for (int m = 0; m < n; ++m) {
    double coul = 0.0;
    for (int k = 0; k < n; ++k) {
      if (k == m) continue;
      const double d = u(m) - u(k);
      coul += (d > 0 ? 1.0 : -1.0) / (d * d);
    }
    f(m) = u(m) - coul;
  }
  return f;
}

inline bool strictly_increasing(const Eigen::VectorXd& u) {
  for (int i = 1; i < u.size(); ++i)
    if (!(u(i) > u(i - 1))) return false;
  return true;
}

}  // namespace detail

// Hessian of the dimensionless potential at positions u.  This is both the
// Newton Jacobian of the force balance and the small-oscillation coupling
// matrix whose eigenpairs are the normal modes.
inline Eigen::MatrixXd mode_coupling_matrix(const Eigen::VectorXd& u) {
  const int n = static_cast<int>(u.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int m = 0; m < n; ++m) {
    double diag = 1.0;
    for (int k = 0; k < n; ++k) {
      if (k == m) continue;
      const double d = std::abs(u(m) - u(k));
      const double inv3 = 1.0 / (d * d * d);
      diag += 2.0 * inv3;
      a(m, k) = -2.0 * inv3;
    }
    a(m, m) = diag;
  }
  return a;
}

// Equilibrium positions in units of the Coulomb length, sorted ascending and
// antisymmetric about the trap center.
inline Eigen::VectorXd equilibrium_positions(int n) {
  if (n < 1)
    throw InvalidArgument("equilibrium_positions: ion count must be >= 1");
  if (n == 1) return Eigen::VectorXd::Zero(1);

  // Seed with the empirical minimum-spacing law; Newton converges from it
  // for every tested chain length.
  Eigen::VectorXd u(n);
  const double spacing = 2.018 * std::pow(double(n), -0.559);
  for (int i = 0; i < n; ++i)
    u(i) = (i - 0.5 * (n - 1)) * spacing;

  double res = detail::force_residual(u).lpNorm<Eigen::Infinity>();
  constexpr double tol = 1e-13;
  constexpr int max_iters = 200;
  for (int it = 0; it < max_iters && res > tol; ++it) {
    const Eigen::VectorXd f = detail::force_residual(u);
    const Eigen::MatrixXd jac = mode_coupling_matrix(u);
    const Eigen::VectorXd step = jac.ldlt().solve(f);

    // Backtrack until the step keeps the ordering and shrinks the residual.
    double s = 1.0;
    Eigen::VectorXd next;
    double next_res = res;
    while (s >= 1e-6) {
      next = u - s * step;
      if (detail::strictly_increasing(next)) {
        next_res = detail::force_residual(next).lpNorm<Eigen::Infinity>();
        if (next_res < res) break;
      }
      s *= 0.5;
    }
    if (s < 1e-6) break;  // rounding floor; the final check decides
    u = next;
    res = next_res;
  }

  // The potential is even in the coordinates, so the solution must be
  // antisymmetric; averaging removes the solver's rounding asymmetry.
  Eigen::VectorXd sym(n);
  for (int i = 0; i < n; ++i) sym(i) = 0.5 * (u(i) - u(n - 1 - i));
  u = sym;

  res = detail::force_residual(u).lpNorm<Eigen::Infinity>();
  if (res > 1e-12)
    throw NumericalContract("equilibrium_positions: residual " +
                            std::to_string(res) +
                            " did not reach 1e-12 for " + std::to_string(n) +
                            " ions");
  return u;
}

// Normal modes of a chain, sorted by frequency.  Mode 1 is the center of
// mass at exactly omega_x; its eigenvalue is pinned to 1 once the solver
// lands within round-off of it.
inline std::vector<ModeSpec> normal_modes(const IonChain& chain) {
  chain.validate();
  const Eigen::VectorXd u = equilibrium_positions(chain.count);
  const Eigen::MatrixXd a = mode_coupling_matrix(u);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success)
    throw NumericalContract("normal_modes: eigensolver failed");

  Eigen::VectorXd lam = es.eigenvalues();  // ascending
  Eigen::MatrixXd vec = es.eigenvectors();

  if (lam(0) <= 0.0)
    throw NumericalContract(
        "normal_modes: non-positive eigenvalue " + std::to_string(lam(0)) +
        "; the equilibrium configuration is not a potential minimum");
  if (std::abs(lam(0) - 1.0) > 1e-8)
    throw NumericalContract(
        "normal_modes: lowest eigenvalue " + std::to_string(lam(0)) +
        " is not the unit center-of-mass value");
  lam(0) = 1.0;

  std::vector<ModeSpec> modes(static_cast<std::size_t>(chain.count));
  for (int p = 0; p < chain.count; ++p) {
    ModeSpec& m = modes[static_cast<std::size_t>(p)];
    m.p = p + 1;
    m.omega = (p == 0) ? chain.omega_x : chain.omega_x * std::sqrt(lam(p));
    m.b = vec.col(p);
    // Fix the overall sign: first component with non-negligible magnitude
    // is positive.  For the center of mass this makes every component +1/sqrtN.
    for (int i = 0; i < chain.count; ++i) {
      if (std::abs(m.b(i)) > 1e-12) {
        if (m.b(i) < 0.0) m.b = -m.b;
        break;
      }
    }
    if (p > 0 && !(m.omega > modes[static_cast<std::size_t>(p - 1)].omega))
      throw NumericalContract("normal_modes: frequencies not strictly increasing");
  }
  return modes;
}

// Per-ion Lamb-Dicke parameters eta_{p,n} = k_eff sqrt(hbar/(2 M omega_p)) b_n
// for a laser wavevector projection k_eff on the trap axis.
inline Eigen::VectorXd lamb_dicke(const IonChain& chain, const ModeSpec& m,
                                  double k_eff) {
  if (!(k_eff > 0.0))
    throw InvalidArgument("lamb_dicke: k_eff must be positive");
  return k_eff * chain.zero_point_length(m.omega) * m.b;
}

inline void attach_lamb_dicke(const IonChain& chain, std::vector<ModeSpec>& modes,
                              double k_eff) {
  for (ModeSpec& m : modes) m.eta = lamb_dicke(chain, m, k_eff);
}

struct PowerLawFit {
  double exponent = 0.0;
  double amplitude = 0.0;  // prefactor of the fitted power law
  double residual_rms = 0.0;
};

// Fits min adjacent spacing ~ amplitude * N^exponent over the given chain
// lengths by least squares in log-log coordinates.
inline PowerLawFit spacing_exponent(int n_min, int n_max) {
  if (n_min > 2 || n_max < 40)
    throw InvalidArgument(
        "spacing_exponent: range must span at least [2, 40], got [" +
        std::to_string(n_min) + ", " + std::to_string(n_max) + "]");

  std::vector<double> xs, ys;
  for (int n = n_min; n <= n_max; ++n) {
    if (n < 2) continue;  // a single ion has no spacing
    const Eigen::VectorXd u = equilibrium_positions(n);
    double min_gap = u(1) - u(0);
    for (int i = 2; i < n; ++i) min_gap = std::min(min_gap, u(i) - u(i - 1));
    xs.push_back(std::log(double(n)));
    ys.push_back(std::log(min_gap));
  }

  const double m = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  PowerLawFit fit;
  fit.exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  const double intercept = (sy - fit.exponent * sx) / m;
  fit.amplitude = std::exp(intercept);
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (intercept + fit.exponent * xs[i]);
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / m);
  return fit;
}

}  // namespace phononbus
