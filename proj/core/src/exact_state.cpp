#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdio>
#include <string>

#include "tact/errors.hpp"
#include "tact/exact.hpp"

namespace tact::exact {

std::size_t dense_state_bytes(int n_spins) {
  return sizeof(Complex) * (std::size_t{1} << (2 * n_spins));
}

void check_spin_cap(int n_spins, int max_spins) {
  if (n_spins < 1) throw DomainError("n_spins must be at least 1");
  if (n_spins > max_spins) {
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "n_spins = %d exceeds the cap of %d: one dense state needs 16 * 4^N = %.3g MiB "
                  "and the integrator keeps about 12 of them",
                  n_spins, max_spins, static_cast<double>(dense_state_bytes(n_spins)) / (1 << 20));
    throw ResourceError(buf);
  }
}

DensityMatrix::DensityMatrix(int n_spins, ComplexMatrix entries)
    : n_spins_(n_spins), entries_(std::move(entries)) {
  const Eigen::Index expected = Eigen::Index{1} << n_spins;
  if (entries_.rows() != expected || entries_.cols() != expected) {
    throw DomainError("density matrix must be 2^N x 2^N");
  }
}

double DensityMatrix::trace_deviation() const { return std::abs(entries_.trace() - Complex(1.0, 0.0)); }

double DensityMatrix::hermiticity_residual() const {
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  ComplexMatrix herm = 0.5 * (entries_ + entries_.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

InvariantReport DensityMatrix::invariants() const {
  return {trace_deviation(), hermiticity_residual(), min_eigenvalue()};
}

DensityMatrix build_initial_state(int n_spins, double polarization, int max_spins) {
  check_spin_cap(n_spins, max_spins);
  if (!(polarization > 0.0 && polarization <= 1.0)) throw DomainError("polarization must lie in (0, 1]");
  const Eigen::Index dim = Eigen::Index{1} << n_spins;
  ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    double weight = 1.0;
    for (int site = 0; site < n_spins; ++site) {
      const bool down = (r >> site) & 1;
      weight *= down ? 0.5 * (1.0 - polarization) : 0.5 * (1.0 + polarization);
    }
    rho(r, r) = weight;
  }
  return DensityMatrix(n_spins, std::move(rho));
}

DensityMatrix maximally_mixed(int n_spins, int max_spins) {
  check_spin_cap(n_spins, max_spins);
  const Eigen::Index dim = Eigen::Index{1} << n_spins;
  ComplexMatrix rho = ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim);
  return DensityMatrix(n_spins, std::move(rho));
}

namespace {

using Triplet = Eigen::Triplet<Complex>;

inline double z_sign(Eigen::Index basis, int site) { return ((basis >> site) & 1) ? -1.0 : 1.0; }

}  // namespace

SparseOperator pauli(int n_spins, int site, Axis axis) {
  if (site < 0 || site >= n_spins) throw DomainError("site index out of range");
  const Eigen::Index dim = Eigen::Index{1} << n_spins;
  const Eigen::Index mask = Eigen::Index{1} << site;
  std::vector<Triplet> entries;
  entries.reserve(dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    switch (axis) {
      case Axis::x:
        entries.emplace_back(c ^ mask, c, Complex(1.0, 0.0));
        break;
      case Axis::y:
        // sigma_y |up> = i |down>, sigma_y |down> = -i |up>
        entries.emplace_back(c ^ mask, c, Complex(0.0, z_sign(c, site)));
        break;
      case Axis::z:
        entries.emplace_back(c, c, Complex(z_sign(c, site), 0.0));
        break;
    }
  }
  SparseOperator op(dim, dim);
  op.setFromTriplets(entries.begin(), entries.end());
  return op;
}

SparseOperator collective(int n_spins, Axis axis) {
  const Eigen::Index dim = Eigen::Index{1} << n_spins;
  SparseOperator total(dim, dim);
  for (int site = 0; site < n_spins; ++site) total += pauli(n_spins, site, axis);
  return total;
}

SpinOperatorSet spin_operator_set(int n_spins) {
  SpinOperatorSet set;
  set.n_spins = n_spins;
  for (Axis axis : {Axis::x, Axis::y, Axis::z}) {
    auto& sites = set.site[static_cast<int>(axis)];
    const Eigen::Index dim = Eigen::Index{1} << n_spins;
    SparseOperator total(dim, dim);
    for (int site = 0; site < n_spins; ++site) {
      sites.push_back(pauli(n_spins, site, axis));
      total += sites.back();
    }
    set.total[static_cast<int>(axis)] = std::move(total);
  }
  return set;
}

SparseOperator tact_hamiltonian(int n_spins, double j_coupling, CouplingNormalization normalization) {
  const double pair_weight = 4.0 * j_coupling * pauli_coupling_factor(normalization);
  const Eigen::Index dim = Eigen::Index{1} << n_spins;
  std::vector<Triplet> entries;
  // On a pair, sigma_x sigma_x - sigma_y sigma_y maps |ab> to 2|(not a)(not b)> when a == b
  // and annihilates it otherwise. Each unordered pair appears twice in the ordered sum.
  for (Eigen::Index c = 0; c < dim; ++c) {
    for (int i = 0; i < n_spins; ++i) {
      for (int j = i + 1; j < n_spins; ++j) {
        if (((c >> i) & 1) != ((c >> j) & 1)) continue;
        const Eigen::Index r = c ^ ((Eigen::Index{1} << i) | (Eigen::Index{1} << j));
        entries.emplace_back(r, c, Complex(pair_weight, 0.0));
      }
    }
  }
  SparseOperator h(dim, dim);
  h.setFromTriplets(entries.begin(), entries.end());
  return h;
}

SparseOperator field_hamiltonian(int n_spins, double b_field) {
  SparseOperator h = collective(n_spins, Axis::x) - collective(n_spins, Axis::y);
  h *= Complex(b_field, 0.0);
  return h;
}

double measure(const DensityMatrix& rho, const SparseOperator& observable) {
  if (observable.rows() != rho.dim() || observable.cols() != rho.dim()) {
    throw DomainError("observable dimension does not match the state");
  }
  // tr(rho O) = sum over nonzeros O(r, c) rho(c, r)
  Complex acc(0.0, 0.0);
  const ComplexMatrix& m = rho.entries();
  for (Eigen::Index c = 0; c < observable.outerSize(); ++c) {
    for (SparseOperator::InnerIterator it(observable, c); it; ++it) acc += it.value() * m(c, it.row());
  }
  if (std::abs(acc.imag()) > 1e-8) {
    throw NumericalError("expectation value has imaginary part " + std::to_string(acc.imag()));
  }
  return acc.real();
}

double measure(const DensityMatrix& rho, const ComplexMatrix& observable) {
  if (observable.rows() != rho.dim() || observable.cols() != rho.dim()) {
    throw DomainError("observable dimension does not match the state");
  }
  const Complex acc = (rho.entries().transpose().cwiseProduct(observable)).sum();
  if (std::abs(acc.imag()) > 1e-8) {
    throw NumericalError("expectation value has imaginary part " + std::to_string(acc.imag()));
  }
  return acc.real();
}

double trace_norm(const ComplexMatrix& hermitian) {
  ComplexMatrix herm = 0.5 * (hermitian + hermitian.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().sum();
}

double site_polarization(const DensityMatrix& rho, int site) {
  // diagonal only: tr(rho sigma_z^site)
  double acc = 0.0;
  for (Eigen::Index r = 0; r < rho.dim(); ++r) acc += z_sign(r, site) * rho.entries()(r, r).real();
  return acc;
}

SqueezingReport squeezing_report(const DensityMatrix& rho) {
  const int n = rho.n_spins();
  const std::array<SparseOperator, 3> s = {collective(n, Axis::x), collective(n, Axis::y),
                                           collective(n, Axis::z)};
  SqueezingReport report;
  for (int a = 0; a < 3; ++a) report.mean_spin[a] = measure(rho, s[a]);
  const double length = report.mean_spin.norm();
  if (length < 1e-12) throw DegenerateError("mean spin vanishes; squeezing direction undefined");

  // Symmetrized covariance C_ab = <{S_a, S_b}>/2 - <S_a><S_b>.
  Eigen::Matrix3d cov;
  for (int a = 0; a < 3; ++a) {
    for (int b = a; b < 3; ++b) {
      SparseOperator prod = s[a] * s[b];
      SparseOperator sym = 0.5 * (prod + SparseOperator(prod.adjoint()));
      cov(a, b) = measure(rho, sym) - report.mean_spin[a] * report.mean_spin[b];
      cov(b, a) = cov(a, b);
    }
  }

  const Eigen::Vector3d n_hat = report.mean_spin / length;
  // Any orthonormal pair spanning the plane orthogonal to n_hat.
  Eigen::Vector3d seed = std::abs(n_hat.z()) < 0.9 ? Eigen::Vector3d::UnitZ() : Eigen::Vector3d::UnitX();
  Eigen::Vector3d e1 = (seed - seed.dot(n_hat) * n_hat).normalized();
  Eigen::Vector3d e2 = n_hat.cross(e1);
  Eigen::Matrix<double, 3, 2> basis;
  basis << e1, e2;
  const Eigen::Matrix2d plane = basis.transpose() * cov * basis;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(plane);
  report.min_transverse_variance = solver.eigenvalues()(0);
  report.min_direction = basis * solver.eigenvectors().col(0);
  report.kitagawa_ueda = report.min_transverse_variance / n;
  report.wineland = n * report.min_transverse_variance / (length * length);
  return report;
}

double squeezing_parameter_exact(const DensityMatrix& rho, SqueezingConvention convention) {
  const SqueezingReport report = squeezing_report(rho);
  return convention == SqueezingConvention::kitagawa_ueda ? report.kitagawa_ueda : report.wineland;
}

}  // namespace tact::exact
