#pragma once

#include "stablelab/problem.hpp"
#include "stablelab/spectral_grid.hpp"

namespace stablelab {

/// Smooth unit-mass kernel psi_eps(t, x) = eps^-2 psi(t/eps, x/eps) with
/// psi(t, x) = p(t) p(x), p the normalised 1-D bump
///
///   p(s) proportional to exp(-1 / (1 - 4 s^2)) on |s| < 1/2.
///
/// The support [-1/2, 1/2]^2 lies inside |t| + |x| < 1.
class Mollifier {
public:
    explicit Mollifier(double eps);

    double eps() const { return eps_; }

    /// psi_eps(t, x).
    double kernel(double t, double x) const;
    /// [F psi_eps](tau, omega) = p^(eps tau) p^(eps omega).
    double transform(double tau, double omega) const;

    /// Normalised 1-D bump p(s).
    static double density(double s);
    /// int_{-1/2}^{s} p.
    static double cdf(double s);
    /// p^(k) = int p(s) cos(k s) ds.
    static double density_transform(double k);

private:
    double eps_;
};

/// u * psi_eps, by multiplication in Fourier space. Throws DomainError if
/// eps is not below a quarter of each box side that carries more than one
/// grid point.
GridFn2 mollify(const GridFn2& u, const Mollifier& m);

/// (c * psi_eps)(t, x). Uses c.smoothing when available, otherwise a
/// 32 x 32 product Gauss-Legendre rule against the kernel.
double smooth_value(const Coefficient& c, double t, double x, double eps);

/// The coefficient (t, x) -> (c * psi_eps)(t, x).
Coefficient mollified(const Coefficient& c, double eps);

}  // namespace stablelab
