#pragma once

#include <vector>

#include <Eigen/Dense>

#include "bneck/alt_tensor.hpp"
#include "bneck/metric.hpp"

namespace bneck {

/// Gram-determinant extension of the metric to degree-k tensors:
/// <e_I, e_J> = det(G[I, J]).
double inner(const AltTensor& lhs, const AltTensor& rhs, const Metric& metric);

/// Energy Q(w) = <w, w>. Multiplicative on wedges of mutually orthogonal factors.
double energy(const AltTensor& w, const Metric& metric);

/// Dense matrix of the induced form on the degree-k tensors (colex basis order).
Eigen::MatrixXd exterior_gram(const Metric& metric, int degree);

/// Hodge star for the diagonal convention with the standard orientation:
/// *(e_I) = Q(e_I) sign(I, I^c) e_{I^c}. Agrees with *(e_1^...^e_k) =
/// e_{k+1}^...^e_{a+b} on every positive orthonormal frame whose first k
/// vectors are spacelike, and satisfies Q(*w) = (-1)^b Q(w).
AltTensor hodge_star(const AltTensor& w, const Metric& metric);

/// Linear extension of sigma(x, y) = (-x, y) on W = V x V* (hyperbolic convention).
AltTensor sigma_reflect(const AltTensor& w, const Metric& metric);

/// Reads a top-degree tensor as a number against the metric-normalized volume
/// form (|det| of the form equals 1 on a unit-volume basis). In the hyperbolic
/// convention the orientation makes sigma(w) ^ v read as <w, v> for graph
/// tensors w of self-adjoint maps V -> V*.
double metric_volume_reading(const AltTensor& top, const Metric& metric);

struct SignatureReport {
  int degree = 0;
  int n = 0;
  int positives = 0;
  int negatives = 0;
  int zeros = 0;
  /// Eigenvalues that are neither clearly zero nor clearly nonzero.
  int ambiguous = 0;
  /// (positives, negatives) predicted by ((A+B)/2, (A-B)/2) with A = C(2n,k),
  /// B = (-1)^k C(n, k/2) for even k and 0 for odd k.
  int formula_positives = 0;
  int formula_negatives = 0;
  bool formula_matches() const { return positives == formula_positives && negatives == formula_negatives; }
};

/// Signature of the energy form on degree-k tensors over W of signature (n, n),
/// counted from the eigenvalues of its Gram matrix in the hyperbolic basis.
SignatureReport energy_form_signature(int degree, int n);

struct SimpleFactorization {
  bool simple = false;
  /// w = factors[0] ^ ... ^ factors[k-1] when simple.
  std::vector<Eigen::VectorXd> factors;
  double residual = 0.0;
};

/// Decides whether w is a wedge of vectors; the factors span the kernel of v -> v ^ w.
SimpleFactorization factor_simple(const AltTensor& w, double tol = 1e-9);

/// True iff w is simple and its factors span a spacelike k-plane.
bool is_simple_spacelike(const AltTensor& w, const Metric& metric, double tol = 1e-9);
/// True iff w is simple and its factors span a timelike k-plane.
bool is_simple_timelike(const AltTensor& w, const Metric& metric, double tol = 1e-9);

/// Spacelike simple a-tensor whose factors are positively ordered; the
/// orientation of a spacelike a-plane is induced by projection onto span(e_1..e_a).
bool is_positive_spacelike_simple(const AltTensor& w, const Metric& metric, double tol = 1e-9);
/// Timelike simple b-tensor, oriented by projection onto span(e_{a+1}..e_{a+b}).
bool is_positive_timelike_simple(const AltTensor& w, const Metric& metric, double tol = 1e-9);

}  // namespace bneck
