#pragma once

#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <span>
#include <vector>

#include "stablelab/errors.hpp"

namespace stablelab {

using cplx = std::complex<double>;

/// Uniform periodic (t, x) box.
///
/// Sample points are t_j = -len_t/2 + j*dt and x_k = -len_x/2 + k*dx, so the
/// box is centred on the origin. Frequencies use the signed index range
/// [-n/2, n/2): tau_j = 2*pi*j/len_t, omega_k = 2*pi*k/len_x. A grid with
/// n_t == 1 is a plain periodic line in x.
class Grid2 {
public:
    Grid2(std::size_t n_t, std::size_t n_x, double len_t, double len_x);

    std::size_t n_t() const { return n_t_; }
    std::size_t n_x() const { return n_x_; }
    double len_t() const { return len_t_; }
    double len_x() const { return len_x_; }
    std::size_t size() const { return n_t_ * n_x_; }

    double dt() const { return len_t_ / static_cast<double>(n_t_); }
    double dx() const { return len_x_ / static_cast<double>(n_x_); }
    double cell() const { return dt() * dx(); }

    double t_at(std::size_t j) const { return -0.5 * len_t_ + static_cast<double>(j) * dt(); }
    double x_at(std::size_t k) const { return -0.5 * len_x_ + static_cast<double>(k) * dx(); }
    double tau_at(std::size_t j) const;
    double omega_at(std::size_t k) const;
    bool nyquist_t(std::size_t j) const { return n_t_ > 1 && j == n_t_ / 2; }
    bool nyquist_x(std::size_t k) const { return n_x_ > 1 && k == n_x_ / 2; }

    std::size_t index(std::size_t j, std::size_t k) const { return j * n_x_ + k; }

    /// Same box, every dimension with more than one point halved.
    Grid2 coarsened() const;
    /// Same box, every dimension with more than one point doubled.
    Grid2 refined() const;

    bool operator==(const Grid2&) const = default;

private:
    std::size_t n_t_;
    std::size_t n_x_;
    double len_t_;
    double len_x_;
};

enum class Domain { physical, fourier };

/// Complex samples of a function on a Grid2, tagged by domain.
class GridFn2 {
public:
    GridFn2(Grid2 grid, Domain domain, std::vector<cplx> values);

    static GridFn2 zeros(const Grid2& grid, Domain domain = Domain::physical);

    /// Samples f(t, x) at every grid point.
    template <typename F>
        requires std::invocable<F, double, double>
    static GridFn2 sample(const Grid2& grid, F&& f) {
        std::vector<cplx> v(grid.size());
        for (std::size_t j = 0; j < grid.n_t(); ++j)
            for (std::size_t k = 0; k < grid.n_x(); ++k)
                v[grid.index(j, k)] = cplx(f(grid.t_at(j), grid.x_at(k)));
        return GridFn2(grid, Domain::physical, std::move(v));
    }

    static GridFn2 from_real(const Grid2& grid, std::span<const double> values);

    const Grid2& grid() const { return grid_; }
    Domain domain() const { return domain_; }
    std::span<const cplx> values() const { return values_; }
    std::span<cplx> values() { return values_; }
    std::size_t size() const { return values_.size(); }

    cplx operator()(std::size_t j, std::size_t k) const { return values_[grid_.index(j, k)]; }
    cplx& operator()(std::size_t j, std::size_t k) { return values_[grid_.index(j, k)]; }

    std::vector<double> real_part() const;
    double max_abs() const;

    GridFn2& operator+=(const GridFn2& other);
    GridFn2& operator-=(const GridFn2& other);
    GridFn2& operator*=(double s);

private:
    Grid2 grid_;
    Domain domain_;
    std::vector<cplx> values_;
};

GridFn2 operator+(GridFn2 a, const GridFn2& b);
GridFn2 operator-(GridFn2 a, const GridFn2& b);
GridFn2 operator*(double s, GridFn2 a);

/// [F u](tau, omega) = sum e^{i t tau} e^{i x omega} u(t, x) dt dx.
GridFn2 forward_transform(const GridFn2& f);

enum class Output { real, complex };

/// u(t, x) = (2 pi)^-2 sum [F u] e^{-i t tau} e^{-i x omega} dtau domega.
///
/// With Output::real the imaginary residue is checked and dropped; a residue
/// above 1e-10 of the field's magnitude raises SymmetryError.
GridFn2 inverse_transform(const GridFn2& f, Output output = Output::real);

/// Pointwise product with m(tau, omega) on the Fourier side.
///
/// At a Nyquist row or column the symbol is averaged over both aliases
/// (+/- the Nyquist frequency), so Hermitian symbols keep real fields real.
template <typename M>
    requires std::invocable<M, double, double>
GridFn2 apply_multiplier(const GridFn2& f, M&& m) {
    if (f.domain() != Domain::fourier)
        throw ContractError("apply_multiplier: expected a Fourier-domain field");
    const Grid2& g = f.grid();
    std::vector<cplx> out(f.values().begin(), f.values().end());
    for (std::size_t j = 0; j < g.n_t(); ++j) {
        const double tau = g.tau_at(j);
        const bool nt = g.nyquist_t(j);
        for (std::size_t k = 0; k < g.n_x(); ++k) {
            const double omega = g.omega_at(k);
            const bool nx = g.nyquist_x(k);
            cplx s = cplx(m(tau, omega));
            if (nt && nx)
                s = 0.25 * (s + cplx(m(-tau, omega)) + cplx(m(tau, -omega)) + cplx(m(-tau, -omega)));
            else if (nt)
                s = 0.5 * (s + cplx(m(-tau, omega)));
            else if (nx)
                s = 0.5 * (s + cplx(m(tau, -omega)));
            if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
                throw MultiplierSingularityError(tau, omega);
            out[g.index(j, k)] *= s;
        }
    }
    return GridFn2(g, Domain::fourier, std::move(out));
}

/// Physical-domain convenience: inverse(m * forward(u)), real output.
template <typename M>
    requires std::invocable<M, double, double>
GridFn2 filter(const GridFn2& u, M&& m) {
    return inverse_transform(apply_multiplier(forward_transform(u), std::forward<M>(m)));
}

/// Grid L2 norm, sqrt(sum |u|^2 dt dx). Either domain; Fourier fields are
/// measured through Plancherel, (2 pi)^-2 sum |F|^2 dtau domega.
double l2_norm(const GridFn2& u);

/// Real inner product sum u v dt dx of two physical fields.
double inner_product(const GridFn2& u, const GridFn2& v);

/// Components of ||u||_H = ||u|| + ||u_t|| + ||L u||.
struct HNormBreakdown {
    double l2 = 0.0;
    double l2_dt = 0.0;
    double l2_gen = 0.0;
    double h = 0.0;
};

/// H-norm pieces, all evaluated on the Fourier side.
HNormBreakdown norms(const GridFn2& u, double alpha);

/// Fraction of sum |u|^2 carried by points in the outer 10% of the box
/// (on either side, in either variable).
double boundary_mass_fraction(const GridFn2& u);

enum class OutOfBox { zero, periodic };
enum class Interp { bilinear, cubic };

/// Off-grid evaluation of the real part of a physical field.
double interpolate(const GridFn2& u, double t, double x, Interp interp = Interp::cubic,
                   OutOfBox mode = OutOfBox::periodic);

}  // namespace stablelab
