#pragma once

#include <random>

namespace relight {

// Monotone camera response curve on [0,1] with f(0)=0, f(1)=1.
// Gamma: f(x) = x^(1/gamma) (encode). SigmoidPoly: a strictly increasing
// cubic in Bernstein form with control values 0, c1, c2, 1; choosing
// 0 < c1 < c2 < 1 makes the derivative's Bernstein coefficients positive,
// so monotonicity holds by construction (and is re-checked on a grid).
struct Crf {
    enum class Kind { Gamma, SigmoidPoly };

    Kind kind = Kind::Gamma;
    double gamma = 1.0;
    double c1 = 1.0 / 3.0;
    double c2 = 2.0 / 3.0;

    static Crf make_gamma(double gamma);
    static Crf make_sigmoid_poly(double c1, double c2);

    double apply(double x) const;   // linear -> encoded
    double invert(double y) const;  // encoded -> linear

    // Endpoint and strict-monotonicity check on a 1024-point grid.
    void validate() const;
};

// Draw a curve from the configured family mix: gamma exponent uniform in
// [gamma_lo, gamma_hi], or a random sigmoid-poly. allow_sigmoid=false
// restricts to the gamma family.
Crf sample_crf(std::mt19937_64& rng, double gamma_lo, double gamma_hi, bool allow_sigmoid = true);

}  // namespace relight
