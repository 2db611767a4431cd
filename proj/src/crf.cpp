#include "relight/crf.hpp"

#include <cmath>
#include <string>

#include "relight/errors.hpp"
#include "relight/rng.hpp"

namespace relight {

Crf Crf::make_gamma(double gamma) {
    if (!(gamma > 0.0)) throw InvalidInput("gamma must be positive, got " + std::to_string(gamma));
    Crf crf;
    crf.kind = Kind::Gamma;
    crf.gamma = gamma;
    crf.validate();
    return crf;
}

Crf Crf::make_sigmoid_poly(double c1, double c2) {
    if (!(0.0 < c1 && c1 < c2 && c2 < 1.0)) {
        throw InvalidInput("sigmoid-poly controls need 0 < c1 < c2 < 1, got c1=" +
                           std::to_string(c1) + " c2=" + std::to_string(c2));
    }
    Crf crf;
    crf.kind = Kind::SigmoidPoly;
    crf.c1 = c1;
    crf.c2 = c2;
    crf.validate();
    return crf;
}

double Crf::apply(double x) const {
    x = std::min(1.0, std::max(0.0, x));
    if (kind == Kind::Gamma) return std::pow(x, 1.0 / gamma);
    const double u = 1.0 - x;
    return 3.0 * u * u * x * c1 + 3.0 * u * x * x * c2 + x * x * x;
}

double Crf::invert(double y) const {
    y = std::min(1.0, std::max(0.0, y));
    if (kind == Kind::Gamma) return std::pow(y, gamma);
    // Strictly increasing on [0,1]: bisect. 80 halvings drive the bracket
    // far below every round-trip tolerance used in this codebase.
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        (apply(mid) < y ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

void Crf::validate() const {
    if (std::abs(apply(0.0)) > 1e-12 || std::abs(apply(1.0) - 1.0) > 1e-12) {
        throw InvalidInput("camera curve must fix 0 and 1");
    }
    double prev = apply(0.0);
    for (int i = 1; i < 1024; ++i) {
        const double v = apply(i / 1023.0);
        if (!(v > prev)) throw InvalidInput("camera curve is not strictly increasing");
        prev = v;
    }
}

Crf sample_crf(std::mt19937_64& rng, double gamma_lo, double gamma_hi, bool allow_sigmoid) {
    if (!(gamma_lo > 0.0) || gamma_hi < gamma_lo) throw InvalidInput("bad gamma range");
    const bool use_sigmoid = allow_sigmoid && rng::uniform01(rng) < 0.5;
    if (use_sigmoid) {
        const double c1 = 0.15 + 0.3 * rng::uniform01(rng);  // [0.15, 0.45)
        const double c2 = 0.55 + 0.3 * rng::uniform01(rng);  // [0.55, 0.85)
        return Crf::make_sigmoid_poly(c1, c2);
    }
    return Crf::make_gamma(gamma_lo + (gamma_hi - gamma_lo) * rng::uniform01(rng));
}

}  // namespace relight
