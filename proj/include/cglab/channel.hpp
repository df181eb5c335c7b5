#pragma once

// Fuzzy measurement and coarse-graining maps, composite spin expectation,
// unitary covariance check.

#include <utility>
#include <vector>

#include "cglab/qstate.hpp"

namespace cglab {

/// Coarse-graining weights p_i >= 0, sum 1.
///
/// apply_cg uses the weights exactly as given (weight i belongs to qubit i).
/// The analytic laws only depend on h = |p_2 - p_1|; canonical() returns the
/// N=2 copy ordered so that p_1 <= p_2.
class ProbVector {
public:
  explicit ProbVector(std::vector<double> p);
  /// (p1, p2) = ((1-h)/2, (1+h)/2).
  static ProbVector from_h(double h);

  const std::vector<double>& values() const { return p_; }
  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }

  /// |p_2 - p_1|; only defined for N = 2.
  double h() const;
  ProbVector canonical() const;

private:
  std::vector<double> p_;
};

/// A permutation maps qubit i to position perm[i].
using Permutation = std::vector<int>;

class PermutationMixture {
public:
  explicit PermutationMixture(std::vector<std::pair<Permutation, double>> terms);

  static PermutationMixture identity(int n);
  /// Mixture of the transpositions S_{0,i} (S_{0,0} = identity) with weights p_i.
  static PermutationMixture swaps_with_first(const ProbVector& p);

  const std::vector<std::pair<Permutation, double>>& terms() const { return terms_; }
  int num_qubits() const { return n_; }

private:
  std::vector<std::pair<Permutation, double>> terms_;
  int n_ = 0;
};

/// Basis-label map l -> P l for a qubit permutation.
std::vector<std::size_t> permutation_label_map(const Permutation& perm);
CMatrix permutation_operator(const Permutation& perm);

DensityMatrix fuzzy_measure(const DensityMatrix& rho, const PermutationMixture& mix);

/// C[psi] = sum_i p_i rho_i (single-qubit marginals).
DensityMatrix apply_cg(const PureState& psi, const ProbVector& p);
DensityMatrix apply_cg(const DensityMatrix& rho, const ProbVector& p);
/// Bloch vector of C[psi] without building any matrix beyond 2x2.
Vec3 cg_bloch(const PureState& psi, const ProbVector& p);
/// Same map written as swap mixture followed by tracing out all but qubit 0.
DensityMatrix apply_cg_swap_form(const DensityMatrix& rho, const ProbVector& p);

/// m-qubit subsets of {0..n-1}, sorted tuples in lexicographic order.
std::vector<std::vector<int>> lexicographic_subsets(int n, int m);

/// C_m[rho] = sum_k w_k tr_{complement(S_k)} rho where S_k runs over the kept
/// m-subsets in lexicographic order. m = 1 reproduces apply_cg.
DensityMatrix apply_cg_general(const DensityMatrix& rho, const std::vector<double>& weights, int m);

/// tr(rho S_alpha)/m with S_alpha = sum over qubits of sigma_alpha.
BlochVector spin_expectation(const DensityMatrix& rho);

/// Applies U to every qubit of psi.
PureState apply_local_unitary(const PureState& psi, const Eigen::Matrix2cd& u);
/// || C[U^{xN} psi] - U C[psi] U^dagger ||_F.
double check_covariance(const PureState& psi, const ProbVector& p, const Eigen::Matrix2cd& u);

}  // namespace cglab
