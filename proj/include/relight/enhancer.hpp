#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "relight/geometry.hpp"

namespace relight {

// The pluggable enhancement operator: LAB tile in, same-shape LAB tile
// out, with the multiplicative pre-gain as an explicit argument.
// `invocation` numbers the call within a run (canonical tile order) so
// seeded enhancers stay deterministic under any execution parallelism.
class Enhancer {
public:
    virtual ~Enhancer() = default;
    virtual Tile enhance(const Tile& tile, float gain, std::uint64_t invocation) = 0;
    // False for enhancers holding a serial channel (external adapters);
    // the ensemble then runs tile enhancement sequentially.
    virtual bool concurrent_safe() const { return true; }
};

struct GainGammaParams {
    bool tone_curve = true;      // encode with x^(1/tone_gamma) after the gain
    double tone_gamma = 2.2;     // fixed output tone curve
    int chroma_radius = 2;       // 0 disables the chroma smoothing pass
    double chroma_sigma_l = 10.0;  // L-similarity scale of the smoothing

    void validate() const;
};

std::unique_ptr<Enhancer> make_identity_enhancer();
std::unique_ptr<Enhancer> make_gain_gamma_enhancer(const GainGammaParams& params = {});

// Wraps another enhancer and adds one zero-mean Gaussian perturbation
// field (std sigma, in encoded sRGB units) per invocation. Test fixture
// for ensemble-variance properties.
std::unique_ptr<Enhancer> make_noisy_wrapper(std::unique_ptr<Enhancer> inner, double sigma,
                                             std::uint64_t seed);

// Parse "identity", "gain-gamma", or "exec:<command>"; gain-gamma takes
// its parameters from `params`, exec spawns the command as an external
// enhancement server.
std::unique_ptr<Enhancer> make_enhancer(const std::string& spec,
                                        const GainGammaParams& params = {},
                                        int adapter_timeout_ms = 60000);

}  // namespace relight
