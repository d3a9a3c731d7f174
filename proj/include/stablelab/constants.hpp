#pragma once

#include "stablelab/problem.hpp"

namespace stablelab {

/// Smallest delta >= 0 such that
///
///   mu^alpha (lam + |omega|^alpha)^2 >= (4 K^2 / mu^alpha) |omega|^2
///
/// for every omega and every lam >= delta. Found by bisection on lam; the
/// worst omega for a trial lam is located on a log grid over [1e-8, 1e8]
/// and refined by golden-section search. Accurate to about 1e-12 relative.
double delta_threshold(double mu, double K, double alpha);

/// Smallest lambda0 >= 0 such that M2 |omega|^2 <= (lambda0 + |omega|^alpha)^2 / 2
/// for every omega. Same search as delta_threshold.
double lambda0_threshold(double M2, double alpha);

/// M1 = pi * int_R d omega / (2 lam + |omega|^alpha), by adaptive
/// quadrature to 1e-10 relative. Throws DomainError for alpha <= 1 (the
/// integral diverges).
double m1_constant(double lam, double alpha);

/// Closed forms of the three constants, used as cross-checks.
///   delta   = (alpha - 1) (c / alpha)^{alpha/(alpha-1)},  c = 2 K / mu^alpha
///   lambda0 = (alpha - 1) (c / alpha)^{alpha/(alpha-1)},  c = sqrt(2 M2)
///   M1      = 2 pi^2 (2 lam)^{1/alpha - 1} / (alpha sin(pi / alpha))
double delta_closed_form(double mu, double K, double alpha);
double lambda0_closed_form(double M2, double alpha);
double m1_closed_form(double lam, double alpha);

/// Drift absorption constant used for the lambda0 threshold of a problem:
/// M2 = (K / min(1, mu^alpha))^2.
double drift_absorption_constant(const ProblemSpec& spec);

/// max(delta(mu, K, alpha), lambda0(M2(spec), alpha) / 2).
double lambda_threshold(const ProblemSpec& spec);

}  // namespace stablelab
