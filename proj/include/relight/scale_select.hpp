#pragma once

#include <memory>
#include <string>

#include "relight/ensemble.hpp"
#include "relight/image.hpp"

namespace relight {

// Per-pixel probability of the long-scale class (class 1); class 0 is
// the short scale. `hard` marks maps with p in {0,1} everywhere.
struct ScaleMap {
    int height = 0, width = 0;
    std::vector<float> p_long;
    bool hard = false;

    static ScaleMap make(int h, int w, float fill, bool hard);
    void validate() const;
    void require_extent(const Image& img) const;

    Image to_image() const;  // 1-channel visualization/exchange plane
    static ScaleMap from_image(const Image& img);
};

// Ground-truth-optimal hard mask: class 1 where the long estimate has
// the smaller per-pixel squared error summed over channels, ties short.
ScaleMap oracle_mask(const Image& short_est, const Image& long_est, const Image& gt);

// Per-pixel selection by a hard mask.
Image blend_hard(const Image& short_est, const Image& long_est, const ScaleMap& mask);

// Per-pixel convex combination (1-p)*short + p*long. With p in {0,1}
// this equals blend_hard bit-exactly.
Image blend_soft(const Image& short_est, const Image& long_est, const ScaleMap& probs);

// Scale-probability predictors working from the dark input alone.
class ScalePredictor {
public:
    virtual ~ScalePredictor() = default;
    virtual ScaleMap predict(const Image& dark) = 0;
};

// Dark patches want long-scale context: p_long = 1 where the box-filtered
// (side 2*radius+1) CIELAB lightness L/100 falls below threshold.
ScaleMap luminance_scale_predictor(const Image& dark, int radius, double threshold);

std::unique_ptr<ScalePredictor> make_constant_predictor(float p);
std::unique_ptr<ScalePredictor> make_luminance_predictor(int radius, double threshold);
std::unique_ptr<ScalePredictor> make_external_predictor(const std::string& command,
                                                        int timeout_ms = 60000);

// Parse "const:<p>", "luma:<radius>,<threshold>", "exec:<cmd>".
std::unique_ptr<ScalePredictor> make_predictor(const std::string& spec, int adapter_timeout_ms = 60000);

enum class BlendMode { Hard, Soft };

struct EnsembleEstimate {
    Image final;
    Image short_est;
    Image long_est;
    ScaleMap map;
};

// The full pipeline: short-scale averaged estimate, long-scale estimate,
// a scale map from the predictor (or the oracle when gt is given and
// predictor is null), then the per-mode blend. Hard mode thresholds soft
// probabilities at 0.5.
EnsembleEstimate ensemble_estimate(const Image& dark, Enhancer& enhancer, const TileGrid& grid,
                                   WeightKind weights, float gain, int long_d,
                                   ScalePredictor* predictor, BlendMode mode,
                                   const Image* gt = nullptr);

}  // namespace relight
