#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "phononbus/errors.hpp"
#include "phononbus/warnings.hpp"

namespace phononbus {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr Complex imag_unit{0.0, 1.0};

// --- Tensor factors -------------------------------------------------------

// An ion's internal manifold.  Level 0 is the excited qubit state (sigma_z
// eigenvalue +1/2), level 1 the ground state (-1/2); any further levels are
// auxiliary and carry sigma_z weight 0.
struct IonLevels {
  int levels = 2;
  bool operator==(const IonLevels&) const = default;
};

// A harmonic mode truncated at Fock state |cutoff>.  Dimension cutoff + 1.
// The truncated ladder operators satisfy a|n> = sqrt(n)|n-1> everywhere and
// adag|cutoff> = 0, so canonical identities hold only below the top level;
// truncation_leakage() measures how much population reaches the edge.
struct PhononMode {
  int cutoff = 1;
  bool operator==(const PhononMode&) const = default;
};

using Factor = std::variant<IonLevels, PhononMode>;

inline Factor ion(int levels = 2) {
  if (levels < 2 || levels > 4)
    throw InvalidArgument("ion(): levels must be in [2, 4], got " +
                          std::to_string(levels));
  return IonLevels{levels};
}

inline Factor mode(int cutoff) {
  if (cutoff < 1)
    throw InvalidArgument("mode(): cutoff must be >= 1, got " +
                          std::to_string(cutoff));
  return PhononMode{cutoff};
}

inline int factor_dim(const Factor& f) {
  if (const auto* m = std::get_if<PhononMode>(&f)) return m->cutoff + 1;
  return std::get<IonLevels>(f).levels;
}

inline bool is_mode(const Factor& f) {
  return std::holds_alternative<PhononMode>(f);
}

// --- Composite space ------------------------------------------------------

// Ordered tensor product of factors.  Basis index is mixed radix with factor
// 0 as the most significant digit:
//   index = ((d0 * dim1 + d1) * dim2 + d2) * ...
struct SpaceDescriptor {
  std::vector<Factor> factors;

  SpaceDescriptor() = default;
  SpaceDescriptor(std::initializer_list<Factor> fs) : factors(fs) {}
  explicit SpaceDescriptor(std::vector<Factor> fs) : factors(std::move(fs)) {}

  int num_factors() const { return static_cast<int>(factors.size()); }

  Index dim() const {
    Index d = 1;
    for (const auto& f : factors) d *= factor_dim(f);
    return d;
  }

  int dim_of(int k) const {
    check_factor_index(k);
    return factor_dim(factors[static_cast<std::size_t>(k)]);
  }

  std::vector<int> mode_factor_indices() const {
    std::vector<int> out;
    for (int k = 0; k < num_factors(); ++k)
      if (is_mode(factors[static_cast<std::size_t>(k)])) out.push_back(k);
    return out;
  }

  std::vector<int> ion_factor_indices() const {
    std::vector<int> out;
    for (int k = 0; k < num_factors(); ++k)
      if (!is_mode(factors[static_cast<std::size_t>(k)])) out.push_back(k);
    return out;
  }

  Index index_of(const std::vector<int>& digits) const {
    if (static_cast<int>(digits.size()) != num_factors())
      throw InvalidArgument("index_of(): expected " +
                            std::to_string(num_factors()) + " digits, got " +
                            std::to_string(digits.size()));
    Index idx = 0;
    for (int k = 0; k < num_factors(); ++k) {
      const int d = dim_of(k);
      const int digit = digits[static_cast<std::size_t>(k)];
      if (digit < 0 || digit >= d)
        throw InvalidArgument("index_of(): digit " + std::to_string(digit) +
                              " out of range for factor " + std::to_string(k) +
                              " of dimension " + std::to_string(d));
      idx = idx * d + digit;
    }
    return idx;
  }

  std::vector<int> unrank(Index index) const {
    if (index < 0 || index >= dim())
      throw InvalidArgument("unrank(): index out of range");
    std::vector<int> digits(static_cast<std::size_t>(num_factors()), 0);
    for (int k = num_factors() - 1; k >= 0; --k) {
      const int d = dim_of(k);
      digits[static_cast<std::size_t>(k)] = static_cast<int>(index % d);
      index /= d;
    }
    return digits;
  }

  bool operator==(const SpaceDescriptor&) const = default;

 private:
  void check_factor_index(int k) const {
    if (k < 0 || k >= num_factors())
      throw InvalidArgument("factor index " + std::to_string(k) +
                            " out of range for space with " +
                            std::to_string(num_factors()) + " factors");
  }
};

// --- States and operators -------------------------------------------------

struct StateVector {
  SpaceDescriptor space;
  Vector amp;

  StateVector() = default;
  StateVector(SpaceDescriptor s, Vector a) : space(std::move(s)), amp(std::move(a)) {
    if (amp.size() != space.dim())
      throw InvalidArgument("StateVector: amplitude length " +
                            std::to_string(amp.size()) +
                            " does not match space dimension " +
                            std::to_string(space.dim()));
  }

  double norm() const { return amp.norm(); }
};

struct Operator {
  SpaceDescriptor space;
  Matrix mat;

  Operator() = default;
  Operator(SpaceDescriptor s, Matrix m) : space(std::move(s)), mat(std::move(m)) {
    if (mat.rows() != space.dim() || mat.cols() != space.dim())
      throw InvalidArgument("Operator: matrix is " + std::to_string(mat.rows()) +
                            "x" + std::to_string(mat.cols()) +
                            " but space dimension is " +
                            std::to_string(space.dim()));
  }
};

inline StateVector basis_state(const SpaceDescriptor& space,
                               const std::vector<int>& digits) {
  Vector amp = Vector::Zero(space.dim());
  amp(space.index_of(digits)) = 1.0;
  return StateVector(space, std::move(amp));
}

inline StateVector normalized(StateVector psi) {
  const double n = psi.amp.norm();
  if (n == 0.0) throw InvalidArgument("normalized(): zero state");
  psi.amp /= n;
  return psi;
}

inline StateVector apply(const Operator& op, const StateVector& psi) {
  if (!(op.space == psi.space))
    throw InvalidArgument("apply(): operator and state live on different spaces");
  return StateVector(psi.space, op.mat * psi.amp);
}

inline Complex inner(const StateVector& a, const StateVector& b) {
  if (!(a.space == b.space))
    throw InvalidArgument("inner(): states live on different spaces");
  return a.amp.dot(b.amp);  // Eigen dot conjugates the left argument
}

inline double fidelity(const StateVector& a, const StateVector& b) {
  return std::norm(inner(a, b));
}

inline Complex expectation(const Operator& op, const StateVector& psi) {
  if (!(op.space == psi.space))
    throw InvalidArgument("expectation(): operator and state live on different spaces");
  return psi.amp.dot(op.mat * psi.amp);
}

// --- Matrix utilities -----------------------------------------------------

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline bool is_hermitian(const Matrix& m, double tol = 1e-12) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline bool is_unitary(const Matrix& m, double tol = 1e-10) {
  if (m.rows() != m.cols()) return false;
  Matrix gram = m.adjoint() * m;
  gram -= Matrix::Identity(m.rows(), m.cols());
  return gram.cwiseAbs().maxCoeff() <= tol;
}

// exp(i K) for Hermitian K, by eigendecomposition.  Exact up to the
// eigensolver, so it is safe for arbitrarily large ||K||.
inline Matrix expi_hermitian(const Matrix& k) {
  if (!is_hermitian(k, 1e-10))
    throw InvalidArgument("expi_hermitian(): matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(k);
  if (es.info() != Eigen::Success)
    throw NumericalContract("expi_hermitian(): eigensolver failed");
  const Eigen::VectorXd lam = es.eigenvalues();
  Vector phases(lam.size());
  for (Index i = 0; i < lam.size(); ++i)
    phases(i) = std::exp(imag_unit * lam(i));
  return es.eigenvectors() * phases.asDiagonal() *
         es.eigenvectors().adjoint();
}

// --- Factor-local operators -----------------------------------------------

// Annihilator on a single truncated mode: a|n> = sqrt(n)|n-1>.
inline Matrix ladder_down(int cutoff) {
  const Index d = cutoff + 1;
  Matrix a = Matrix::Zero(d, d);
  for (Index n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

inline Matrix ladder_up(int cutoff) { return ladder_down(cutoff).adjoint(); }

inline Matrix number_op(int cutoff) {
  const Index d = cutoff + 1;
  Matrix n = Matrix::Zero(d, d);
  for (Index k = 0; k < d; ++k) n(k, k) = static_cast<double>(k);
  return n;
}

// Spin-1/2 operators on an ion factor.  Level 0 is the excited state, so
// sp = |0><1| raises |g> to |e> and sz has +1/2 on level 0, -1/2 on level 1.
// Auxiliary levels (2, 3) are left untouched by all five operators.
struct SingleSpin {
  Matrix sp, sm, sx, sy, sz;
};

inline SingleSpin spin_ops(int levels) {
  if (levels < 2 || levels > 4)
    throw InvalidArgument("spin_ops(): levels must be in [2, 4]");
  const Index d = levels;
  SingleSpin s;
  s.sp = Matrix::Zero(d, d);
  s.sp(0, 1) = 1.0;
  s.sm = s.sp.adjoint();
  s.sx = 0.5 * (s.sp + s.sm);
  s.sy = (s.sp - s.sm) / (2.0 * imag_unit);
  s.sz = Matrix::Zero(d, d);
  s.sz(0, 0) = 0.5;
  s.sz(1, 1) = -0.5;
  return s;
}

// --- Embedding ------------------------------------------------------------

// Lift an operator acting on the listed factors (which must be given in
// ascending order) to the full space, identity on the rest.  `sub` must be
// the operator on the tensor product of those factors in that same order.
inline Matrix embed_on(const SpaceDescriptor& space,
                       const std::vector<int>& which, const Matrix& sub) {
  if (which.empty())
    throw InvalidArgument("embed_on(): empty factor list");
  for (std::size_t i = 0; i < which.size(); ++i) {
    if (which[i] < 0 || which[i] >= space.num_factors())
      throw InvalidArgument("embed_on(): factor index out of range");
    if (i > 0 && which[i] <= which[i - 1])
      throw InvalidArgument("embed_on(): factor list must be strictly ascending");
  }

  Index sub_dim = 1;
  for (int k : which) sub_dim *= space.dim_of(k);
  if (sub.rows() != sub_dim || sub.cols() != sub_dim)
    throw InvalidArgument("embed_on(): operator dimension " +
                          std::to_string(sub.rows()) +
                          " does not match selected factors (expected " +
                          std::to_string(sub_dim) + ")");

  std::vector<int> rest;
  for (int k = 0; k < space.num_factors(); ++k)
    if (std::find(which.begin(), which.end(), k) == which.end())
      rest.push_back(k);
  Index rest_dim = 1;
  for (int k : rest) rest_dim *= space.dim_of(k);

  // Unrank a flat index over a factor subset (subset order, first factor
  // most significant) into per-factor digits.
  auto split = [&space](const std::vector<int>& subset, Index flat) {
    std::vector<int> digits(subset.size(), 0);
    for (int i = static_cast<int>(subset.size()) - 1; i >= 0; --i) {
      const int d = space.dim_of(subset[static_cast<std::size_t>(i)]);
      digits[static_cast<std::size_t>(i)] = static_cast<int>(flat % d);
      flat /= d;
    }
    return digits;
  };

  Matrix out = Matrix::Zero(space.dim(), space.dim());
  std::vector<int> full_row(static_cast<std::size_t>(space.num_factors()), 0);
  std::vector<int> full_col(static_cast<std::size_t>(space.num_factors()), 0);
  for (Index r = 0; r < rest_dim; ++r) {
    const std::vector<int> rest_digits = split(rest, r);
    for (std::size_t i = 0; i < rest.size(); ++i) {
      full_row[static_cast<std::size_t>(rest[i])] = rest_digits[i];
      full_col[static_cast<std::size_t>(rest[i])] = rest_digits[i];
    }
    for (Index s_row = 0; s_row < sub_dim; ++s_row) {
      const std::vector<int> row_digits = split(which, s_row);
      for (std::size_t i = 0; i < which.size(); ++i)
        full_row[static_cast<std::size_t>(which[i])] = row_digits[i];
      const Index gr = space.index_of(full_row);
      for (Index s_col = 0; s_col < sub_dim; ++s_col) {
        const Complex v = sub(s_row, s_col);
        if (v == Complex{0.0, 0.0}) continue;
        const std::vector<int> col_digits = split(which, s_col);
        for (std::size_t i = 0; i < which.size(); ++i)
          full_col[static_cast<std::size_t>(which[i])] = col_digits[i];
        out(gr, space.index_of(full_col)) = v;
      }
    }
  }
  return out;
}

inline Matrix embed(const SpaceDescriptor& space, int k, const Matrix& sub) {
  return embed_on(space, {k}, sub);
}

// Full-space ladder operators for the k-th factor, which must be a mode.
inline Matrix mode_annihilator(const SpaceDescriptor& space, int k) {
  if (!is_mode(space.factors.at(static_cast<std::size_t>(k))))
    throw InvalidArgument("mode_annihilator(): factor " + std::to_string(k) +
                          " is not a mode");
  const int cutoff = space.dim_of(k) - 1;
  return embed(space, k, ladder_down(cutoff));
}

inline Matrix mode_number(const SpaceDescriptor& space, int k) {
  if (!is_mode(space.factors.at(static_cast<std::size_t>(k))))
    throw InvalidArgument("mode_number(): factor " + std::to_string(k) +
                          " is not a mode");
  const int cutoff = space.dim_of(k) - 1;
  return embed(space, k, number_op(cutoff));
}

// --- Collective spin ------------------------------------------------------

struct CollectiveSpin {
  Matrix jp, jm, jx, jy, jz;
};

// Sums the single-ion spin operators over every ion factor in the space.
inline CollectiveSpin collective_spin(const SpaceDescriptor& space) {
  const std::vector<int> ions = space.ion_factor_indices();
  if (ions.empty())
    throw InvalidArgument("collective_spin(): space has no ion factors");
  const Index d = space.dim();
  CollectiveSpin j;
  j.jp = Matrix::Zero(d, d);
  j.jz = Matrix::Zero(d, d);
  for (int k : ions) {
    const SingleSpin s = spin_ops(space.dim_of(k));
    j.jp += embed(space, k, s.sp);
    j.jz += embed(space, k, s.sz);
  }
  j.jm = j.jp.adjoint();
  j.jx = 0.5 * (j.jp + j.jm);
  j.jy = (j.jp - j.jm) / (2.0 * imag_unit);
  return j;
}

// --- Coherent states and displacements ------------------------------------

// exp(alpha adag - conj(alpha) a) on a single truncated mode.  Unitary on
// the truncated space by construction; faithful to the infinite-dimensional
// displacement only while the displaced state stays below the cutoff.
inline Matrix displacement(int cutoff, Complex alpha,
                           Warnings* warnings = nullptr) {
  if (std::norm(alpha) > 0.25 * cutoff)
    warn(warnings,
         "displacement: |alpha|^2 = " + std::to_string(std::norm(alpha)) +
             " is large for cutoff " + std::to_string(cutoff) +
             "; expect truncation artifacts");
  const Matrix a = ladder_down(cutoff);
  const Matrix generator = alpha * a.adjoint() - std::conj(alpha) * a;
  // generator is anti-Hermitian, so -i * generator is Hermitian.
  return expi_hermitian(-imag_unit * generator);
}

// Truncated coherent-state expansion c_n = alpha^n / sqrt(n!), renormalized
// to unit norm on the truncated space.
inline Vector coherent_amplitudes(int cutoff, Complex alpha) {
  const Index d = cutoff + 1;
  Vector c(d);
  c(0) = 1.0;
  for (Index n = 1; n < d; ++n)
    c(n) = c(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  c /= c.norm();
  return c;
}

// --- Truncation accounting -------------------------------------------------

// Largest population found in the top two Fock levels of any mode factor.
// Runs above ~1e-4 mean the cutoff is too low to trust.
inline double truncation_leakage(const StateVector& psi) {
  const std::vector<int> modes = psi.space.mode_factor_indices();
  if (modes.empty()) return 0.0;
  std::vector<double> leak(modes.size(), 0.0);
  const Index dim = psi.space.dim();
  for (Index i = 0; i < dim; ++i) {
    const double p = std::norm(psi.amp(i));
    if (p == 0.0) continue;
    const std::vector<int> digits = psi.space.unrank(i);
    for (std::size_t m = 0; m < modes.size(); ++m) {
      const int k = modes[m];
      const int top = psi.space.dim_of(k) - 1;
      const int digit = digits[static_cast<std::size_t>(k)];
      if (digit >= top - 1) leak[m] += p;
    }
  }
  return *std::max_element(leak.begin(), leak.end());
}

inline void require_low_leakage(const StateVector& psi, double tol = 1e-4,
                                const std::string& context = "") {
  const double leak = truncation_leakage(psi);
  if (leak > tol)
    throw NumericalContract(
        (context.empty() ? std::string("truncation leakage ")
                         : context + ": truncation leakage ") +
        std::to_string(leak) + " exceeds tolerance " + std::to_string(tol) +
        "; raise the mode cutoff");
}

}  // namespace phononbus
