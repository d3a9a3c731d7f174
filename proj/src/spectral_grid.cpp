#include "stablelab/spectral_grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <mutex>
#include <numbers>
#include <sstream>

namespace stablelab {

MultiplierSingularityError::MultiplierSingularityError(double tau, double omega)
    : Error([&] {
          std::ostringstream os;
          os << "multiplier is not finite at (tau, omega) = (" << tau << ", " << omega << ")";
          return os.str();
      }()),
      tau(tau),
      omega(omega) {}

namespace {

double signed_frequency(std::size_t j, std::size_t n, double len) {
    const auto sj = j < (n + 1) / 2 ? static_cast<double>(j)
                                    : static_cast<double>(j) - static_cast<double>(n);
    return 2.0 * std::numbers::pi * sj / len;
}

// FFTW's planner is not re-entrant; execution on distinct arrays is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

void fft2(std::vector<cplx>& data, std::size_t n_t, std::size_t n_x, int sign) {
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_2d(static_cast<int>(n_t), static_cast<int>(n_x), ptr, ptr, sign,
                                FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
}

// (-1)^(j+k): the phase of the box offset (-len/2) at integer frequencies.
void checkerboard(std::vector<cplx>& data, const Grid2& g) {
    for (std::size_t j = 0; j < g.n_t(); ++j)
        for (std::size_t k = 0; k < g.n_x(); ++k)
            if ((j + k) & 1u) data[g.index(j, k)] = -data[g.index(j, k)];
}

}  // namespace

Grid2::Grid2(std::size_t n_t, std::size_t n_x, double len_t, double len_x)
    : n_t_(n_t), n_x_(n_x), len_t_(len_t), len_x_(len_x) {
    if (n_t == 0 || n_x == 0 || !std::has_single_bit(n_t) || !std::has_single_bit(n_x))
        throw ContractError("Grid2: n_t and n_x must be powers of two");
    if (!(len_t > 0.0) || !(len_x > 0.0) || !std::isfinite(len_t) || !std::isfinite(len_x))
        throw ContractError("Grid2: len_t and len_x must be positive");
}

double Grid2::tau_at(std::size_t j) const { return signed_frequency(j, n_t_, len_t_); }
double Grid2::omega_at(std::size_t k) const { return signed_frequency(k, n_x_, len_x_); }

Grid2 Grid2::coarsened() const {
    return Grid2(n_t_ > 1 ? n_t_ / 2 : 1, n_x_ > 1 ? n_x_ / 2 : 1, len_t_, len_x_);
}

Grid2 Grid2::refined() const {
    return Grid2(n_t_ > 1 ? n_t_ * 2 : 1, n_x_ > 1 ? n_x_ * 2 : 1, len_t_, len_x_);
}

GridFn2::GridFn2(Grid2 grid, Domain domain, std::vector<cplx> values)
    : grid_(grid), domain_(domain), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw ContractError("GridFn2: value count does not match the grid");
}

GridFn2 GridFn2::zeros(const Grid2& grid, Domain domain) {
    return GridFn2(grid, domain, std::vector<cplx>(grid.size()));
}

GridFn2 GridFn2::from_real(const Grid2& grid, std::span<const double> values) {
    return GridFn2(grid, Domain::physical, std::vector<cplx>(values.begin(), values.end()));
}

std::vector<double> GridFn2::real_part() const {
    std::vector<double> out(values_.size());
    std::transform(values_.begin(), values_.end(), out.begin(),
                   [](const cplx& z) { return z.real(); });
    return out;
}

double GridFn2::max_abs() const {
    double m = 0.0;
    for (const auto& z : values_) m = std::max(m, std::abs(z));
    return m;
}

GridFn2& GridFn2::operator+=(const GridFn2& other) {
    if (other.grid_ != grid_ || other.domain_ != domain_)
        throw ContractError("GridFn2: operands live on different grids or domains");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
    return *this;
}

GridFn2& GridFn2::operator-=(const GridFn2& other) {
    if (other.grid_ != grid_ || other.domain_ != domain_)
        throw ContractError("GridFn2: operands live on different grids or domains");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
    return *this;
}

GridFn2& GridFn2::operator*=(double s) {
    for (auto& z : values_) z *= s;
    return *this;
}

GridFn2 operator+(GridFn2 a, const GridFn2& b) { return a += b; }
GridFn2 operator-(GridFn2 a, const GridFn2& b) { return a -= b; }
GridFn2 operator*(double s, GridFn2 a) { return a *= s; }

GridFn2 forward_transform(const GridFn2& f) {
    if (f.domain() != Domain::physical)
        throw ContractError("forward_transform: expected a physical-domain field");
    const Grid2& g = f.grid();
    std::vector<cplx> data(f.values().begin(), f.values().end());
    fft2(data, g.n_t(), g.n_x(), FFTW_BACKWARD);  // FFTW_BACKWARD is the e^{+i..} kernel
    checkerboard(data, g);
    const double cell = g.cell();
    for (auto& z : data) z *= cell;
    return GridFn2(g, Domain::fourier, std::move(data));
}

GridFn2 inverse_transform(const GridFn2& f, Output output) {
    if (f.domain() != Domain::fourier)
        throw ContractError("inverse_transform: expected a Fourier-domain field");
    const Grid2& g = f.grid();
    std::vector<cplx> data(f.values().begin(), f.values().end());
    checkerboard(data, g);
    fft2(data, g.n_t(), g.n_x(), FFTW_FORWARD);
    const double scale = 1.0 / (g.len_t() * g.len_x());
    double max_re = 0.0;
    double max_im = 0.0;
    for (auto& z : data) {
        z *= scale;
        max_re = std::max(max_re, std::abs(z.real()));
        max_im = std::max(max_im, std::abs(z.imag()));
    }
    if (output == Output::real) {
        // Residue is measured against the spectrum's own scale, so a zero
        // field or a field dominated by roundoff passes.
        double spec_scale = 0.0;
        for (const auto& z : f.values()) spec_scale += std::abs(z);
        spec_scale *= scale;
        if (max_im > 1e-10 * std::max(max_re, spec_scale) && max_im > 1e-300) {
            std::ostringstream os;
            os << "inverse_transform: spectrum is not conjugate symmetric (imaginary residue "
               << max_im << " vs magnitude " << max_re << ")";
            throw SymmetryError(os.str());
        }
        for (auto& z : data) z = cplx(z.real(), 0.0);
    }
    return GridFn2(g, Domain::physical, std::move(data));
}

double l2_norm(const GridFn2& u) {
    double s = 0.0;
    for (const auto& z : u.values()) s += std::norm(z);
    const Grid2& g = u.grid();
    if (u.domain() == Domain::physical) return std::sqrt(s * g.cell());
    return std::sqrt(s / (g.len_t() * g.len_x()));
}

double inner_product(const GridFn2& u, const GridFn2& v) {
    if (u.grid() != v.grid() || u.domain() != Domain::physical || v.domain() != Domain::physical)
        throw ContractError("inner_product: expected physical fields on one grid");
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u.values()[i].real() * v.values()[i].real();
    return s * u.grid().cell();
}

HNormBreakdown norms(const GridFn2& u, double alpha) {
    if (u.domain() != Domain::physical)
        throw ContractError("norms: expected a physical-domain field");
    const GridFn2 fu = forward_transform(u);
    HNormBreakdown out;
    out.l2 = l2_norm(fu);
    out.l2_dt = l2_norm(apply_multiplier(fu, [](double tau, double) { return cplx(0.0, -tau); }));
    out.l2_gen = l2_norm(apply_multiplier(
        fu, [alpha](double, double omega) { return -0.5 * std::pow(std::abs(omega), alpha); }));
    out.h = out.l2 + out.l2_dt + out.l2_gen;
    return out;
}

double boundary_mass_fraction(const GridFn2& u) {
    const Grid2& g = u.grid();
    const double edge_t = 0.4 * g.len_t();
    const double edge_x = 0.4 * g.len_x();
    double total = 0.0;
    double outer = 0.0;
    for (std::size_t j = 0; j < g.n_t(); ++j) {
        const bool t_out = g.n_t() > 1 && std::abs(g.t_at(j)) >= edge_t;
        for (std::size_t k = 0; k < g.n_x(); ++k) {
            const double m = std::norm(u(j, k));
            total += m;
            if (t_out || std::abs(g.x_at(k)) >= edge_x) outer += m;
        }
    }
    return total > 0.0 ? outer / total : 0.0;
}

namespace {

// Index and fractional offset of coordinate s on a periodic axis starting at -len/2.
struct AxisPos {
    long base;
    double frac;
};

AxisPos locate(double s, double len, std::size_t n) {
    const double h = len / static_cast<double>(n);
    const double r = (s + 0.5 * len) / h;
    const double fl = std::floor(r);
    return {static_cast<long>(fl), r - fl};
}

std::size_t wrap(long i, std::size_t n) {
    const long m = static_cast<long>(n);
    long r = i % m;
    if (r < 0) r += m;
    return static_cast<std::size_t>(r);
}

// Lagrange weights on nodes -1, 0, 1, 2 at offset p in [0, 1).
void cubic_weights(double p, double w[4]) {
    w[0] = -p * (p - 1.0) * (p - 2.0) / 6.0;
    w[1] = (p + 1.0) * (p - 1.0) * (p - 2.0) / 2.0;
    w[2] = -(p + 1.0) * p * (p - 2.0) / 2.0;
    w[3] = (p + 1.0) * p * (p - 1.0) / 6.0;
}

}  // namespace

double interpolate(const GridFn2& u, double t, double x, Interp interp, OutOfBox mode) {
    if (u.domain() != Domain::physical)
        throw ContractError("interpolate: expected a physical-domain field");
    const Grid2& g = u.grid();
    if (mode == OutOfBox::zero) {
        if (x < -0.5 * g.len_x() || x >= 0.5 * g.len_x()) return 0.0;
        if (g.n_t() > 1 && (t < -0.5 * g.len_t() || t >= 0.5 * g.len_t())) return 0.0;
    }
    const AxisPos px = locate(x, g.len_x(), g.n_x());
    double wx[4];
    long ox0;
    int nx_nodes;
    if (interp == Interp::cubic) {
        cubic_weights(px.frac, wx);
        ox0 = px.base - 1;
        nx_nodes = 4;
    } else {
        wx[0] = 1.0 - px.frac;
        wx[1] = px.frac;
        ox0 = px.base;
        nx_nodes = 2;
    }
    auto row = [&](std::size_t j) {
        double s = 0.0;
        for (int a = 0; a < nx_nodes; ++a)
            s += wx[a] * u(j, wrap(ox0 + a, g.n_x())).real();
        return s;
    };
    if (g.n_t() == 1) return row(0);
    const AxisPos pt = locate(t, g.len_t(), g.n_t());
    double wt[4];
    long ot0;
    int nt_nodes;
    if (interp == Interp::cubic) {
        cubic_weights(pt.frac, wt);
        ot0 = pt.base - 1;
        nt_nodes = 4;
    } else {
        wt[0] = 1.0 - pt.frac;
        wt[1] = pt.frac;
        ot0 = pt.base;
        nt_nodes = 2;
    }
    double s = 0.0;
    for (int b = 0; b < nt_nodes; ++b) s += wt[b] * row(wrap(ot0 + b, g.n_t()));
    return s;
}

}  // namespace stablelab
