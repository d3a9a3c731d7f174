#include "stablelab/presets.hpp"

#include <cmath>

#include "stablelab/mollifier.hpp"

namespace stablelab {

namespace {

using Field = Coefficient::Field;

// c0 + c1 * trig(x); convolution in x multiplies the oscillating part by p^(eps).
Coefficient harmonic(double c0, double c1, bool use_sin) {
    auto make = [c0, use_sin](double amp) -> Field {
        if (use_sin) return [c0, amp](double, double x) { return c0 + amp * std::sin(x); };
        return [c0, amp](double, double x) { return c0 + amp * std::cos(x); };
    };
    return Coefficient(make(c1), [make, c1](double eps) { return make(c1 * Mollifier::density_transform(eps)); });
}

// +1 on [2k, 2k+1), -1 on [2k+1, 2k+2).
double square_wave(double s) { return std::fmod(std::floor(s), 2.0) == 0.0 ? 1.0 : -1.0; }

// Square wave convolved with p_eps; for eps < 1 only the nearest jump matters.
double smooth_square_wave(double s, double eps) {
    const double k = std::round(s);
    const double left = square_wave(k - 0.5);
    const double right = -left;
    return left + (right - left) * Mollifier::cdf((s - k) / eps);
}

Coefficient step(double lo, double hi) {
    const Field v = [lo, hi](double, double x) { return x < 0.0 ? lo : hi; };
    return Coefficient(v, [lo, hi](double eps) -> Field {
        return [lo, hi, eps](double, double x) { return lo + (hi - lo) * Mollifier::cdf(x / eps); };
    });
}

Coefficient checkerboard(double lo, double hi) {
    const double m = 0.5 * (lo + hi);
    const double d = 0.5 * (hi - lo);
    // Even parity gives s(t) s(x) = +1 and the value lo.
    const Field v = [m, d](double t, double x) { return m - d * square_wave(t) * square_wave(x); };
    return Coefficient(v, [m, d](double eps) -> Field {
        if (!(eps < 1.0)) throw DomainError("checkerboard smoothing needs eps < 1");
        return [m, d, eps](double t, double x) {
            return m - d * smooth_square_wave(t, eps) * smooth_square_wave(x, eps);
        };
    });
}

}  // namespace

std::string preset_name(Preset p) {
    switch (p) {
        case Preset::constant: return "const";
        case Preset::smooth_sine: return "smooth_sine";
        case Preset::step_b: return "step_b";
        case Preset::checkerboard_b: return "checkerboard_b";
    }
    return "";
}

std::optional<Preset> parse_preset(const std::string& name) {
    for (Preset p : all_presets())
        if (preset_name(p) == name) return p;
    return std::nullopt;
}

std::vector<Preset> all_presets() {
    return {Preset::constant, Preset::smooth_sine, Preset::step_b, Preset::checkerboard_b};
}

ProblemSpec make_preset(Preset p, double mu, double nu, double K, double alpha, double lam) {
    ProblemSpec spec;
    spec.mu = mu;
    spec.nu = nu;
    spec.K = K;
    spec.alpha = alpha;
    spec.lam = lam;
    const double mid = 0.5 * (mu + nu);
    switch (p) {
        case Preset::constant:
            spec.b = Coefficient::constant(mid);
            spec.a = Coefficient::constant(K);
            break;
        case Preset::smooth_sine:
            spec.b = harmonic(mid, 0.5 * (nu - mu), true);
            spec.a = harmonic(0.0, K, false);
            break;
        case Preset::step_b:
            spec.b = step(mu, nu);
            spec.a = harmonic(0.0, K, false);
            break;
        case Preset::checkerboard_b:
            spec.b = checkerboard(mu, nu);
            spec.a = harmonic(0.0, K, false);
            break;
    }
    spec.validate();
    return spec;
}

}  // namespace stablelab
