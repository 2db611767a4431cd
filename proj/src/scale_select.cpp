#include "relight/scale_select.hpp"

#include <cmath>
#include <string>

#include "relight/adapter.hpp"
#include "relight/kernels.hpp"

namespace relight {
namespace {

void require_srgb_triple(const Image& a, const Image& b, const Image& c) {
    a.require_color_space(ColorSpace::SRGB);
    b.require_color_space(ColorSpace::SRGB);
    c.require_color_space(ColorSpace::SRGB);
    a.require_shape(b);
    a.require_shape(c);
}

Image blend_with(const Image& short_est, const Image& long_est, const ScaleMap& map) {
    short_est.require_shape(long_est);
    if (short_est.color_space != long_est.color_space) {
        throw InvalidInput("blend inputs must share a color space");
    }
    map.validate();
    map.require_extent(short_est);
    Image out = Image::make(short_est.height, short_est.width, short_est.channels,
                            short_est.color_space);
    kernel::blend_planes(short_est.data.data(), long_est.data.data(), map.p_long.data(),
                         out.data.data(), out.channels, out.pixels());
    return out;
}

}  // namespace

ScaleMap ScaleMap::make(int h, int w, float fill, bool hard_map) {
    if (h <= 0 || w <= 0) throw InvalidInput("scale map needs a positive extent");
    ScaleMap m;
    m.height = h;
    m.width = w;
    m.p_long.assign(static_cast<std::size_t>(h) * w, fill);
    m.hard = hard_map;
    m.validate();
    return m;
}

void ScaleMap::validate() const {
    if (height <= 0 || width <= 0 ||
        p_long.size() != static_cast<std::size_t>(height) * width) {
        throw InvalidInput("scale map buffer does not match its extent");
    }
    for (float p : p_long) {
        if (!(p >= 0.0f && p <= 1.0f)) throw InvalidInput("scale probabilities must be in [0, 1]");
        if (hard && p != 0.0f && p != 1.0f) {
            throw InvalidInput("map marked hard but carries fractional probabilities");
        }
    }
}

void ScaleMap::require_extent(const Image& img) const {
    if (img.height != height || img.width != width) {
        throw ShapeMismatch("scale map extent " + std::to_string(height) + "x" +
                            std::to_string(width) + " does not match image " +
                            std::to_string(img.height) + "x" + std::to_string(img.width));
    }
}

Image ScaleMap::to_image() const {
    validate();
    Image img = Image::make(height, width, 1, ColorSpace::SRGB);
    std::copy(p_long.begin(), p_long.end(), img.data.begin());
    return img;
}

ScaleMap ScaleMap::from_image(const Image& img) {
    if (img.channels != 1) throw InvalidInput("scale maps are single-channel");
    ScaleMap m;
    m.height = img.height;
    m.width = img.width;
    m.p_long.assign(img.data.begin(), img.data.end());
    m.hard = true;
    for (float p : m.p_long) {
        if (p != 0.0f && p != 1.0f) {
            m.hard = false;
            break;
        }
    }
    m.validate();
    return m;
}

ScaleMap oracle_mask(const Image& short_est, const Image& long_est, const Image& gt) {
    require_srgb_triple(short_est, long_est, gt);
    ScaleMap mask = ScaleMap::make(gt.height, gt.width, 0.0f, true);
    const std::int64_t npix = gt.pixels();
    for (std::int64_t i = 0; i < npix; ++i) {
        double err_short = 0.0, err_long = 0.0;
        for (int c = 0; c < gt.channels; ++c) {
            const std::int64_t k = static_cast<std::int64_t>(c) * npix + i;
            const double ds = static_cast<double>(short_est.data[k]) - gt.data[k];
            const double dl = static_cast<double>(long_est.data[k]) - gt.data[k];
            err_short += ds * ds;
            err_long += dl * dl;
        }
        if (err_long < err_short) mask.p_long[i] = 1.0f;  // ties stay short
    }
    return mask;
}

Image blend_hard(const Image& short_est, const Image& long_est, const ScaleMap& mask) {
    if (!mask.hard) throw InvalidInput("blend_hard needs a hard mask");
    return blend_with(short_est, long_est, mask);
}

Image blend_soft(const Image& short_est, const Image& long_est, const ScaleMap& probs) {
    return blend_with(short_est, long_est, probs);
}

ScaleMap luminance_scale_predictor(const Image& dark, int radius, double threshold) {
    dark.require_color_space(ColorSpace::SRGB);
    if (radius < 0) throw InvalidInput("box radius must be >= 0");
    const Image rgb = dark.as_rgb();
    const std::int64_t npix = rgb.pixels();
    std::vector<float> lab(rgb.data.size());
    kernel::srgb_to_lab(rgb.data.data(), lab.data(), npix);
    std::vector<float> lum(npix);
    for (std::int64_t i = 0; i < npix; ++i) lum[i] = lab[i] / 100.0f;  // L plane
    std::vector<float> tmp(npix), filtered(npix);
    kernel::box_filter(lum.data(), tmp.data(), filtered.data(), rgb.height, rgb.width, radius);
    ScaleMap map = ScaleMap::make(rgb.height, rgb.width, 0.0f, true);
    for (std::int64_t i = 0; i < npix; ++i) {
        if (filtered[i] < threshold) map.p_long[i] = 1.0f;
    }
    return map;
}

namespace {

struct ConstantPredictor final : ScalePredictor {
    float p;
    explicit ConstantPredictor(float p_) : p(p_) {
        if (!(p >= 0.0f && p <= 1.0f)) throw InvalidInput("constant probability must be in [0, 1]");
    }
    ScaleMap predict(const Image& dark) override {
        return ScaleMap::make(dark.height, dark.width, p, p == 0.0f || p == 1.0f);
    }
};

struct LuminancePredictor final : ScalePredictor {
    int radius;
    double threshold;
    LuminancePredictor(int r, double t) : radius(r), threshold(t) {
        if (radius < 0) throw InvalidInput("box radius must be >= 0");
    }
    ScaleMap predict(const Image& dark) override {
        return luminance_scale_predictor(dark, radius, threshold);
    }
};

struct ExternalPredictor final : ScalePredictor {
    Subprocess server;
    ExternalPredictor(const std::string& cmd, int timeout_ms) : server(cmd, timeout_ms) {}
    ScaleMap predict(const Image& dark) override {
        ScaleMap map;
        map.height = dark.height;
        map.width = dark.width;
        map.p_long = external_scale_probabilities(server, dark.as_rgb());
        map.hard = true;
        for (float p : map.p_long) {
            if (p != 0.0f && p != 1.0f) {
                map.hard = false;
                break;
            }
        }
        map.validate();
        return map;
    }
};

}  // namespace

std::unique_ptr<ScalePredictor> make_constant_predictor(float p) {
    return std::make_unique<ConstantPredictor>(p);
}

std::unique_ptr<ScalePredictor> make_luminance_predictor(int radius, double threshold) {
    return std::make_unique<LuminancePredictor>(radius, threshold);
}

std::unique_ptr<ScalePredictor> make_external_predictor(const std::string& command, int timeout_ms) {
    return std::make_unique<ExternalPredictor>(command, timeout_ms);
}

std::unique_ptr<ScalePredictor> make_predictor(const std::string& spec, int adapter_timeout_ms) {
    const auto parse_number = [&spec](const std::string& text) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(text, &used);
        } catch (const std::exception&) {
            used = std::string::npos;
        }
        if (used != text.size() || text.empty())
            throw InvalidInput("bad number '" + text + "' in predictor spec '" + spec + "'");
        return v;
    };
    if (spec.rfind("const:", 0) == 0) {
        const double p = parse_number(spec.substr(6));
        if (p < 0.0 || p > 1.0) throw InvalidInput("constant predictor needs p in [0, 1]");
        return make_constant_predictor(static_cast<float>(p));
    }
    if (spec.rfind("luma:", 0) == 0) {
        const std::string rest = spec.substr(5);
        const auto comma = rest.find(',');
        if (comma == std::string::npos) {
            throw InvalidInput("luma predictor spec is luma:<radius>,<threshold>");
        }
        const double radius = parse_number(rest.substr(0, comma));
        if (radius < 0.0 || radius != std::floor(radius))
            throw InvalidInput("luma predictor radius must be a non-negative integer");
        return make_luminance_predictor(static_cast<int>(radius),
                                        parse_number(rest.substr(comma + 1)));
    }
    if (spec.rfind("exec:", 0) == 0) {
        const std::string cmd = spec.substr(5);
        if (cmd.empty()) throw InvalidInput("exec: predictor needs a command");
        return make_external_predictor(cmd, adapter_timeout_ms);
    }
    throw InvalidInput("unknown predictor '" + spec +
                       "' (expect const:<p>, luma:<radius>,<threshold>, exec:<cmd>)");
}

EnsembleEstimate ensemble_estimate(const Image& dark, Enhancer& enhancer, const TileGrid& grid,
                                   WeightKind weights, float gain, int long_d,
                                   ScalePredictor* predictor, BlendMode mode, const Image* gt) {
    EnsembleEstimate out;
    out.short_est = averaged_estimate(dark, enhancer, grid, weights, gain).estimate;
    out.long_est = long_scale_estimate(dark, enhancer, long_d, gain);
    if (predictor) {
        out.map = predictor->predict(dark);
    } else if (gt) {
        out.map = oracle_mask(out.short_est, out.long_est, gt->as_rgb());
    } else {
        throw InvalidInput("scale selection needs a predictor or a ground-truth image");
    }
    if (mode == BlendMode::Hard && !out.map.hard) {
        for (float& p : out.map.p_long) p = p >= 0.5f ? 1.0f : 0.0f;
        out.map.hard = true;
    }
    out.final = mode == BlendMode::Hard ? blend_hard(out.short_est, out.long_est, out.map)
                                        : blend_soft(out.short_est, out.long_est, out.map);
    return out;
}

}  // namespace relight
