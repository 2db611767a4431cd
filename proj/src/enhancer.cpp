#include "relight/enhancer.hpp"

#include <cmath>
#include <string>

#include "relight/adapter.hpp"
#include "relight/detail/pixel_math.hpp"
#include "relight/kernels.hpp"
#include "relight/rng.hpp"

namespace relight {
namespace {

void require_lab_tile(const Tile& tile) {
    if (tile.color_space != ColorSpace::Lab || tile.channels != 3 || tile.size <= 0) {
        throw InvalidInput("enhancers take 3-channel LAB tiles");
    }
    if (tile.data.size() != static_cast<std::size_t>(tile.size) * tile.size * tile.channels) {
        throw ShapeMismatch("tile buffer does not match its declared shape");
    }
}

struct IdentityEnhancer final : Enhancer {
    Tile enhance(const Tile& tile, float, std::uint64_t) override {
        require_lab_tile(tile);
        return tile;
    }
};

struct GainGammaEnhancer final : Enhancer {
    GainGammaParams params;

    explicit GainGammaEnhancer(const GainGammaParams& p) : params(p) { params.validate(); }

    Tile enhance(const Tile& tile, float gain, std::uint64_t) override {
        require_lab_tile(tile);
        if (!(gain > 0.0f)) throw InvalidInput("gain must be positive");
        const std::int64_t npix = static_cast<std::int64_t>(tile.size) * tile.size;
        Tile out = tile;
        std::vector<float> rgb(tile.data.size());
        kernel::lab_to_srgb(tile.data.data(), rgb.data(), npix);
        // Gain acts on linear light; the output tone curve re-encodes.
        for (float& v : rgb) {
            const double lin = std::min(1.0, detail::srgb_eotf(v) * gain);
            v = static_cast<float>(params.tone_curve ? std::pow(lin, 1.0 / params.tone_gamma)
                                                     : detail::srgb_oetf(lin));
        }
        kernel::srgb_to_lab(rgb.data(), out.data.data(), npix);
        if (params.chroma_radius > 0) {
            kernel::chroma_smooth(out.data.data(), tile.size, params.chroma_radius,
                                  params.chroma_sigma_l);
        }
        return out;
    }
};

struct NoisyEnhancer final : Enhancer {
    std::unique_ptr<Enhancer> inner;
    double sigma;
    std::uint64_t seed;

    NoisyEnhancer(std::unique_ptr<Enhancer> in, double s, std::uint64_t sd)
        : inner(std::move(in)), sigma(s), seed(sd) {
        if (sigma < 0.0) throw InvalidInput("noise sigma must be >= 0");
    }

    Tile enhance(const Tile& tile, float gain, std::uint64_t invocation) override {
        Tile out = inner->enhance(tile, gain, invocation);
        if (sigma == 0.0) return out;
        const std::int64_t npix = static_cast<std::int64_t>(out.size) * out.size;
        // Perturb in encoded sRGB so sigma is in output units.
        std::vector<float> rgb(out.data.size());
        kernel::lab_to_srgb(out.data.data(), rgb.data(), npix);
        std::vector<float> field(out.data.size());
        kernel::gaussian_field(field.data(), out.channels, out.size, out.size,
                               rng::derive(seed, invocation));
        for (std::size_t i = 0; i < rgb.size(); ++i) {
            rgb[i] = detail::clamp01(rgb[i] + static_cast<float>(sigma * field[i]));
        }
        kernel::srgb_to_lab(rgb.data(), out.data.data(), npix);
        return out;
    }

    bool concurrent_safe() const override { return inner->concurrent_safe(); }
};

}  // namespace

void GainGammaParams::validate() const {
    if (!(tone_gamma > 0.0)) throw InvalidInput("tone gamma must be positive");
    if (chroma_radius < 0) throw InvalidInput("chroma radius must be >= 0");
    if (chroma_radius > 0 && !(chroma_sigma_l > 0.0)) {
        throw InvalidInput("chroma sigma must be positive when smoothing is enabled");
    }
}

std::unique_ptr<Enhancer> make_identity_enhancer() { return std::make_unique<IdentityEnhancer>(); }

std::unique_ptr<Enhancer> make_gain_gamma_enhancer(const GainGammaParams& params) {
    return std::make_unique<GainGammaEnhancer>(params);
}

std::unique_ptr<Enhancer> make_noisy_wrapper(std::unique_ptr<Enhancer> inner, double sigma,
                                             std::uint64_t seed) {
    return std::make_unique<NoisyEnhancer>(std::move(inner), sigma, seed);
}

std::unique_ptr<Enhancer> make_enhancer(const std::string& spec, const GainGammaParams& params,
                                        int adapter_timeout_ms) {
    if (spec == "identity") return make_identity_enhancer();
    if (spec == "gain-gamma") return make_gain_gamma_enhancer(params);
    if (spec.rfind("exec:", 0) == 0) {
        const std::string cmd = spec.substr(5);
        if (cmd.empty()) throw InvalidInput("exec: enhancer needs a command");
        return make_external_enhancer(cmd, adapter_timeout_ms);
    }
    throw InvalidInput("unknown enhancer '" + spec + "' (expect identity, gain-gamma, exec:<cmd>)");
}

}  // namespace relight
