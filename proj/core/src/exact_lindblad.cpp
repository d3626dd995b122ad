#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <string>

#include "tact/errors.hpp"
#include "tact/exact.hpp"

namespace tact::exact {

namespace {

constexpr Complex kMinusI(0.0, -1.0);

double column_sum_norm(const SparseOperator& op) {
  double best = 0.0;
  for (Eigen::Index c = 0; c < op.outerSize(); ++c) {
    double sum = 0.0;
    for (SparseOperator::InnerIterator it(op, c); it; ++it) sum += std::abs(it.value());
    best = std::max(best, sum);
  }
  return best;
}

int common_spin_count(Generators generators) {
  const int n = generators.front().n_spins();
  for (const auto& g : generators) {
    if (g.n_spins() != n) throw DomainError("generators act on different numbers of spins");
  }
  return n;
}

}  // namespace

ComplexMatrix apply_depolarizer(const ComplexMatrix& rho, int n_spins, double gamma) {
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  Superoperator::depolarize(n_spins, gamma).apply_add(rho, out);
  return out;
}

Superoperator::Superoperator(Kind kind, int n_spins, double rate, SparseOperator hamiltonian)
    : kind_(kind), n_spins_(n_spins), rate_(rate), hamiltonian_(std::move(hamiltonian)) {}

Superoperator Superoperator::squeeze(int n_spins, double j_coupling, CouplingNormalization normalization) {
  check_spin_cap(n_spins, 30);
  return Superoperator(Kind::squeeze, n_spins, j_coupling, tact_hamiltonian(n_spins, j_coupling, normalization));
}

Superoperator Superoperator::depolarize(int n_spins, double gamma) {
  check_spin_cap(n_spins, 30);
  return Superoperator(Kind::depolarize, n_spins, gamma, SparseOperator());
}

Superoperator Superoperator::field(int n_spins, double b_field) {
  check_spin_cap(n_spins, 30);
  return Superoperator(Kind::field, n_spins, b_field, field_hamiltonian(n_spins, b_field));
}

void Superoperator::apply_add(const ComplexMatrix& rho, ComplexMatrix& out) const {
  if (kind_ != Kind::depolarize) {
    // -i [H, rho]
    ComplexMatrix comm = hamiltonian_ * rho;
    comm -= rho * hamiltonian_;
    out += kMinusI * comm;
    return;
  }
  if (rate_ == 0.0) return;
  // Per site, with z = +-1 the sigma_z eigenvalues of the row and column bits:
  //   sigma_x rho sigma_x -> rho(r^m, c^m)
  //   sigma_y rho sigma_y -> z_r z_c rho(r^m, c^m)
  //   sigma_z rho sigma_z -> z_r z_c rho(r, c)
  // so the bracket is 2 (rho(r^m, c^m) - rho(r, c)) when the bits agree and -4 rho(r, c) otherwise.
  const Eigen::Index dim = rho.rows();
  for (Eigen::Index c = 0; c < dim; ++c) {
    for (Eigen::Index r = 0; r < dim; ++r) {
      const Eigen::Index differ = r ^ c;
      Complex acc(0.0, 0.0);
      int agree_count = 0;
      for (int site = 0; site < n_spins_; ++site) {
        const Eigen::Index m = Eigen::Index{1} << site;
        if (differ & m) continue;
        acc += rho(r ^ m, c ^ m);
        ++agree_count;
      }
      const int disagree_count = n_spins_ - agree_count;
      out(r, c) += rate_ * (2.0 * acc - (2.0 * agree_count + 4.0 * disagree_count) * rho(r, c));
    }
  }
}

ComplexMatrix Superoperator::apply(const ComplexMatrix& rho) const {
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  apply_add(rho, out);
  return out;
}

double Superoperator::norm_bound() const {
  if (kind_ == Kind::depolarize) return 4.0 * std::abs(rate_) * n_spins_;
  return 2.0 * column_sum_norm(hamiltonian_);
}

ComplexMatrix apply_sum(Generators generators, const ComplexMatrix& rho) {
  ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& g : generators) g.apply_add(rho, out);
  return out;
}

namespace {

struct Rk4Workspace {
  ComplexMatrix k1, k2, k3, k4, stage;

  // One classical RK4 step of size h from y into out.
  void step(Generators generators, const ComplexMatrix& y, double h, ComplexMatrix& out) {
    k1 = apply_sum(generators, y);
    stage = y + (0.5 * h) * k1;
    k2 = apply_sum(generators, stage);
    stage = y + (0.5 * h) * k2;
    k3 = apply_sum(generators, stage);
    stage = y + h * k3;
    k4 = apply_sum(generators, stage);
    out = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
};

struct IntegrationResult {
  ComplexMatrix state;
  int accepted = 0;
  int rejected = 0;
};

IntegrationResult integrate(const ComplexMatrix& start, Generators generators, double duration, double tolerance,
                            const StepControl& control) {
  double bound = 0.0;
  for (const auto& g : generators) bound += g.norm_bound();
  double h = bound > 0.0 ? std::min(duration, 0.5 / bound) : duration;
  const double min_step = control.min_step_fraction * duration;
  const Complex start_trace = start.trace();

  IntegrationResult result;
  result.state = start;
  ComplexMatrix full, half, twice;
  Rk4Workspace ws;
  double t = 0.0;
  double worst_residual = 0.0;
  while (t < duration) {
    if (t + h >= duration || duration - (t + h) < 1e-12 * duration) h = duration - t;
    ws.step(generators, result.state, h, full);
    ws.step(generators, result.state, 0.5 * h, half);
    ws.step(generators, half, 0.5 * h, twice);

    // Step doubling: the RK4 error of the two half steps is (twice - full) / 15.
    const double error = (twice - full).norm() / 15.0;
    const double allowed = tolerance * h / duration;
    bool accept = error <= allowed;
    if (accept) {
      full = twice + (twice - full) / 15.0;
      const double trace_drift = std::abs(full.trace() - start_trace);
      const double herm = (full - full.adjoint()).cwiseAbs().maxCoeff();
      worst_residual = std::max({worst_residual, trace_drift, herm});
      accept = trace_drift <= control.invariants.trace && herm <= control.invariants.hermiticity;
    }
    if (accept) {
      result.state.swap(full);
      t += h;
      ++result.accepted;
      const double growth = error > 0.0 ? 0.9 * std::pow(allowed / error, 0.2) : 2.0;
      h *= std::clamp(growth, 1.0, 2.0);
    } else {
      ++result.rejected;
      h *= 0.5;
      if (h < min_step) {
        throw IntegrationError("step size fell below the floor without meeting tolerance (worst residual " +
                                   std::to_string(worst_residual) + ")",
                               worst_residual);
      }
    }
  }
  return result;
}

}  // namespace

DensityMatrix evolve(const DensityMatrix& rho, Generators generators, double duration, const StepControl& control,
                     EvolveStats* stats) {
  if (!std::isfinite(duration) || duration < 0.0) throw DomainError("evolution duration must be finite and >= 0");
  if (!(control.tolerance > 0.0)) throw DomainError("integrator tolerance must be positive");
  if (duration == 0.0 || generators.empty()) {
    if (stats) *stats = EvolveStats{0, 0, 0, rho.invariants()};
    return rho;
  }
  if (common_spin_count(generators) != rho.n_spins()) {
    throw DomainError("generator and state spin counts differ");
  }

  double tolerance = control.tolerance;
  double worst = 0.0;
  EvolveStats local;
  for (int attempt = 0; attempt <= control.max_refinements; ++attempt) {
    IntegrationResult run = integrate(rho.entries(), generators, duration, tolerance, control);
    local.accepted_steps += run.accepted;
    local.rejected_steps += run.rejected;
    DensityMatrix out(rho.n_spins(), std::move(run.state));
    local.final_invariants = out.invariants();
    if (local.final_invariants.satisfies(control.invariants)) {
      local.refinements = attempt;
      if (stats) *stats = local;
      return out;
    }
    const auto& inv = local.final_invariants;
    worst = std::max({worst, inv.trace_deviation, inv.hermiticity_residual, -inv.min_eigenvalue});
    tolerance /= 16.0;
  }
  throw IntegrationError("channel invariants still violated after " + std::to_string(control.max_refinements) +
                             " refinements (worst residual " + std::to_string(worst) + ")",
                         worst);
}

ComplexMatrix superoperator_matrix(Generators generators, int n_spins) {
  check_spin_cap(n_spins, 4);
  const Eigen::Index dim = Eigen::Index{1} << n_spins;
  const Eigen::Index dim2 = dim * dim;
  ComplexMatrix out = ComplexMatrix::Zero(dim2, dim2);
  ComplexMatrix unit = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    for (Eigen::Index r = 0; r < dim; ++r) {
      unit(r, c) = 1.0;
      const ComplexMatrix image = apply_sum(generators, unit);
      out.col(c * dim + r) = Eigen::Map<const Eigen::VectorXcd>(image.data(), dim2);
      unit(r, c) = 0.0;
    }
  }
  return out;
}

DensityMatrix evolve_expm(const DensityMatrix& rho, Generators generators, double duration) {
  if (generators.empty() || duration == 0.0) return rho;
  if (common_spin_count(generators) != rho.n_spins()) {
    throw DomainError("generator and state spin counts differ");
  }
  const ComplexMatrix propagator = (duration * superoperator_matrix(generators, rho.n_spins())).exp();
  const Eigen::Index dim = rho.dim();
  const Eigen::VectorXcd vec = propagator * Eigen::Map<const Eigen::VectorXcd>(rho.entries().data(), dim * dim);
  return DensityMatrix(rho.n_spins(), Eigen::Map<const ComplexMatrix>(vec.data(), dim, dim));
}

double split_error(const DensityMatrix& rho, Generators first, Generators second, double duration,
                   const StepControl& control, std::vector<InvariantReport>* reports) {
  std::vector<Superoperator> joint(first.begin(), first.end());
  joint.insert(joint.end(), second.begin(), second.end());
  EvolveStats stats[3];
  const DensityMatrix together = evolve(rho, joint, duration, control, &stats[0]);
  const DensityMatrix half = evolve(rho, second, duration, control, &stats[1]);
  const DensityMatrix split = evolve(half, first, duration, control, &stats[2]);
  if (reports) {
    for (const auto& s : stats) reports->push_back(s.final_invariants);
  }
  return trace_norm(together.entries() - split.entries());
}

double factorization_error(int n_spins, double j_coupling, double gamma, double t_squeeze, double polarization,
                           const StepControl& control, CouplingNormalization normalization,
                           std::vector<InvariantReport>* reports) {
  const DensityMatrix rho = build_initial_state(n_spins, polarization);
  const Superoperator squeeze[] = {Superoperator::squeeze(n_spins, j_coupling, normalization)};
  const Superoperator depolarize[] = {Superoperator::depolarize(n_spins, gamma)};
  return split_error(rho, squeeze, depolarize, t_squeeze, control, reports);
}

CommutatorNorm commutator_action_norm(int n_spins, double j_coupling, double gamma, double polarization,
                                      CouplingNormalization normalization) {
  const DensityMatrix rho = build_initial_state(n_spins, polarization);
  const Superoperator l1 = Superoperator::squeeze(n_spins, j_coupling, normalization);
  const Superoperator l2 = Superoperator::depolarize(n_spins, gamma);
  const ComplexMatrix l1l2 = l1.apply(l2.apply(rho.entries()));
  const ComplexMatrix l2l1 = l2.apply(l1.apply(rho.entries()));
  const double denominator = trace_norm(l1l2) + trace_norm(l2l1);
  if (denominator == 0.0) return {0.0, true};
  return {trace_norm(l1l2 - l2l1) / denominator, false};
}

}  // namespace tact::exact
