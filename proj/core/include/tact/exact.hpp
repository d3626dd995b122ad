#pragma once

// Dense Lindblad master-equation oracle for small ensembles of spin-1/2.
//
// States are 2^N x 2^N complex matrices. Site i is bit i of the basis index,
// with bit value 0 the sigma_z = +1 ("up") state. Memory for one dense state is
// 16 * 4^N bytes; the time stepper keeps about a dozen such buffers alive.

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "tact/params.hpp"

namespace tact::exact {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using SparseOperator = Eigen::SparseMatrix<Complex>;

inline constexpr int kDefaultMaxSpins = 10;

// Bytes taken by one dense 2^N x 2^N complex matrix.
std::size_t dense_state_bytes(int n_spins);

// Throws DomainError below 1 and ResourceError, naming the memory cost, above max_spins.
void check_spin_cap(int n_spins, int max_spins = kDefaultMaxSpins);

enum class Axis { x, y, z };

struct InvariantTolerances {
  double trace = 1e-9;
  double hermiticity = 1e-10;
  double min_eigenvalue = -1e-8;
};

struct InvariantReport {
  double trace_deviation = 0.0;       // |tr(rho) - 1|
  double hermiticity_residual = 0.0;  // max_ij |rho - rho^dagger|
  double min_eigenvalue = 0.0;

  bool satisfies(const InvariantTolerances& tol) const {
    return trace_deviation <= tol.trace && hermiticity_residual <= tol.hermiticity &&
           min_eigenvalue >= tol.min_eigenvalue;
  }
};

class DensityMatrix {
 public:
  DensityMatrix(int n_spins, ComplexMatrix entries);

  int n_spins() const noexcept { return n_spins_; }
  Eigen::Index dim() const noexcept { return entries_.rows(); }
  const ComplexMatrix& entries() const noexcept { return entries_; }

  double trace_deviation() const;
  double hermiticity_residual() const;
  double min_eigenvalue() const;
  InvariantReport invariants() const;

 private:
  int n_spins_;
  ComplexMatrix entries_;
};

// N-fold product of (I + P sigma_z) / 2.
DensityMatrix build_initial_state(int n_spins, double polarization, int max_spins = kDefaultMaxSpins);
DensityMatrix maximally_mixed(int n_spins, int max_spins = kDefaultMaxSpins);

// sigma_axis acting on one site.
SparseOperator pauli(int n_spins, int site, Axis axis);
// Collective S_axis = sum_i sigma_axis^i (Pauli normalization, eigenvalues -N..N).
SparseOperator collective(int n_spins, Axis axis);

struct SpinOperatorSet {
  int n_spins = 0;
  std::array<std::vector<SparseOperator>, 3> site;  // indexed by Axis
  std::array<SparseOperator, 3> total;
};
SpinOperatorSet spin_operator_set(int n_spins);

// Two-axis counter-twisting Hamiltonian summed over ordered pairs i != j. With the
// pauli normalization this is J sum (sigma_x sigma_x - sigma_y sigma_y) = J (S_x^2 - S_y^2),
// the i = j terms cancelling since sigma_x^2 = sigma_y^2 = I. The default spin_half
// normalization is a quarter of that; see CouplingNormalization.
SparseOperator tact_hamiltonian(int n_spins, double j_coupling,
                                CouplingNormalization normalization = CouplingNormalization::spin_half);

// B sum_i (sigma_x^i - sigma_y^i): the field generator, so that
// L3(rho) = i[B sum_i (sigma_y^i - sigma_x^i), rho] = -i[H_B, rho].
SparseOperator field_hamiltonian(int n_spins, double b_field);

// L2(rho) = Gamma sum_i (sigma_x rho sigma_x + sigma_y rho sigma_y + sigma_z rho sigma_z - 3 rho).
ComplexMatrix apply_depolarizer(const ComplexMatrix& rho, int n_spins, double gamma);

class Superoperator {
 public:
  enum class Kind { squeeze, depolarize, field };

  static Superoperator squeeze(int n_spins, double j_coupling,
                               CouplingNormalization normalization = CouplingNormalization::spin_half);
  static Superoperator depolarize(int n_spins, double gamma);
  static Superoperator field(int n_spins, double b_field);

  Kind kind() const noexcept { return kind_; }
  double rate() const noexcept { return rate_; }
  int n_spins() const noexcept { return n_spins_; }

  // out += L(rho)
  void apply_add(const ComplexMatrix& rho, ComplexMatrix& out) const;
  ComplexMatrix apply(const ComplexMatrix& rho) const;

  // Upper bound on the induced 1-norm of the map, used to pick a first step.
  double norm_bound() const;

 private:
  Superoperator(Kind kind, int n_spins, double rate, SparseOperator hamiltonian);

  Kind kind_;
  int n_spins_;
  double rate_;
  SparseOperator hamiltonian_;  // empty for the depolarizer
};

using Generators = std::span<const Superoperator>;

ComplexMatrix apply_sum(Generators generators, const ComplexMatrix& rho);

struct StepControl {
  // Target for the accumulated Frobenius-norm error over the whole duration.
  double tolerance = 1e-10;
  // Number of times the whole integration may be repeated at tolerance / 16
  // when the final state misses an invariant.
  int max_refinements = 4;
  // Hard floor on the step size relative to the duration.
  double min_step_fraction = 1e-9;
  InvariantTolerances invariants;
};

struct EvolveStats {
  int accepted_steps = 0;
  int rejected_steps = 0;
  int refinements = 0;
  InvariantReport final_invariants;
};

// Integrates d rho / dt = sum_k L_k(rho) with classical RK4 steps. Each step is
// checked by step doubling and halved until the local error and the trace and
// Hermiticity residuals are within tolerance. Throws IntegrationError carrying
// the worst residual when refinement is exhausted.
DensityMatrix evolve(const DensityMatrix& rho, Generators generators, double duration,
                     const StepControl& control = {}, EvolveStats* stats = nullptr);

// Cross-check path: exponentiates the dense 4^N x 4^N superoperator. N <= 4 only.
DensityMatrix evolve_expm(const DensityMatrix& rho, Generators generators, double duration);

// Dense superoperator matrix acting on column-major vec(rho).
ComplexMatrix superoperator_matrix(Generators generators, int n_spins);

// tr(rho O); throws NumericalError when the imaginary part exceeds 1e-8.
double measure(const DensityMatrix& rho, const SparseOperator& observable);
double measure(const DensityMatrix& rho, const ComplexMatrix& observable);

// Sum of |eigenvalues| of the Hermitian part of the argument.
double trace_norm(const ComplexMatrix& hermitian);

enum class SqueezingConvention { kitagawa_ueda, wineland };

struct SqueezingReport {
  Eigen::Vector3d mean_spin = Eigen::Vector3d::Zero();  // (<S_x>, <S_y>, <S_z>)
  double min_transverse_variance = 0.0;  // min Var(S_perp) over directions orthogonal to <S>
  Eigen::Vector3d min_direction = Eigen::Vector3d::Zero();
  double kitagawa_ueda = 0.0;  // min Var / N
  double wineland = 0.0;       // N min Var / |<S>|^2
};

// Throws DegenerateError when |<S>| < 1e-12.
SqueezingReport squeezing_report(const DensityMatrix& rho);
double squeezing_parameter_exact(const DensityMatrix& rho, SqueezingConvention convention);

// Mean of sigma_z^site.
double site_polarization(const DensityMatrix& rho, int site);

// || exp[T (A + B)] rho - exp[T A] exp[T B] rho ||_1 with both sides integrated
// under the same control. When `reports` is given, the final invariants of the three
// evolutions are appended to it.
double split_error(const DensityMatrix& rho, Generators first, Generators second, double duration,
                   const StepControl& control = {}, std::vector<InvariantReport>* reports = nullptr);

// split_error for A = squeezing (J), B = depolarizing (Gamma) on the product initial state.
double factorization_error(int n_spins, double j_coupling, double gamma, double t_squeeze,
                           double polarization, const StepControl& control = {},
                           CouplingNormalization normalization = CouplingNormalization::spin_half,
                           std::vector<InvariantReport>* reports = nullptr);

struct CommutatorNorm {
  double value = 0.0;
  bool degenerate = false;  // both compositions vanish
};

// ||L1 L2 rho - L2 L1 rho||_1 / (||L1 L2 rho||_1 + ||L2 L1 rho||_1) on the initial state.
CommutatorNorm commutator_action_norm(int n_spins, double j_coupling, double gamma, double polarization,
                                      CouplingNormalization normalization = CouplingNormalization::spin_half);

}  // namespace tact::exact
