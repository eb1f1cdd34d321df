#pragma once

// Two-point (Dirichlet) flows, k = 2. With H(alpha, beta, a, b) the solution
// w of G(alpha, w) = a, G(beta, w) = b, the function
//   F(tau, alpha, beta, a, b) = G(tau, H(alpha, beta, a, b))
// satisfies the re-anchoring law
//   F(tau, alpha, beta, a, b)
//     = F(tau, gamma, delta, F(gamma, alpha, beta, a, b), F(delta, alpha, beta, a, b))
// and the boundary laws F(alpha, alpha, beta, a, b) = a, F(beta, ...) = b.

#include "worldline/frontal_embedding.hpp"

namespace worldline {

/// Boundary data (alpha, beta, a, b) for a k = 2 family. The pair is ordered;
/// alpha may exceed beta.
struct ChladekProblem {
  ChladekProblem(FamilyPtr family, double alpha, double beta, VectorXd a, VectorXd b);

  FamilyPtr family;
  double alpha;
  double beta;
  VectorXd a;
  VectorXd b;

  Restriction restriction() const;
  /// Same problem with the anchors swapped: (beta, alpha, b, a).
  ChladekProblem swapped() const;
};

/// H(alpha, beta, a, b).
InversionResult chladek_parameters(const ChladekProblem& problem,
                                   const InversionSettings& settings = {});

/// F(tau, alpha, beta, a, b).
VectorXd chladek_solve(const ChladekProblem& problem, double tau,
                       const InversionSettings& settings = {});

/// |F(tau, alpha, beta, a, b)
///   - F(tau, gamma, delta, F(gamma, alpha, beta, a, b), F(delta, alpha, beta, a, b))|.
/// Inversion failures propagate as exceptions.
double chladek_consistency(const ChladekProblem& problem, double gamma, double delta, double tau,
                           const InversionSettings& settings = {});

/// max(|F(alpha, ...) - a|, |F(beta, ...) - b|).
double chladek_boundary_residual(const ChladekProblem& problem,
                                 const InversionSettings& settings = {});

}  // namespace worldline
