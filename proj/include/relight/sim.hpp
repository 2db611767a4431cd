#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "relight/crf.hpp"
#include "relight/image.hpp"

namespace relight {

// Parameter ranges for simulated dark/bright pair generation. Ranges are
// sampled per item from streams derived from (master_seed, item index),
// so generation is reproducible for any worker count.
struct SimConfig {
    double gamma_lo = 1.8, gamma_hi = 2.6;
    double darken_lo = 0.01, darken_hi = 0.25;
    double shot_lo = 0.005, shot_hi = 0.05;
    double read_lo = 0.001, read_hi = 0.02;
    int quant_bits = 8;       // one of 8, 10, 12, 16
    bool gamma_only = false;  // restrict the curve family (tests, ablations)
    std::uint64_t master_seed = 0;

    void validate() const;
};

// Everything sampled while producing one pair, for the manifest.
struct PairRecord {
    int id = 0;
    std::string dark_file, bright_file, source;
    Crf crf1, crf2;
    double darken_w = 1.0, sigma_shot = 0.0, sigma_read = 0.0;
    std::size_t clamped = 0;  // samples clamped to [0,1] anywhere in the pipeline
};

// Pointwise curve application; inputs outside [0,1] are clamped and
// counted into *clamped when given.
Image apply_crf(const Image& linear, const Crf& crf, std::size_t* clamped = nullptr);
Image invert_crf(const Image& encoded, const Crf& crf, std::size_t* clamped = nullptr);

Image darken(const Image& linear, double w);

// y = clamp01(x + sqrt(max(x,0))*sigma_shot*e1 + sigma_read*e2), e1/e2
// i.i.d. standard normal per sample.
Image add_shot_read_noise(const Image& linear, double sigma_shot, double sigma_read,
                          std::uint64_t seed, std::size_t* clamped = nullptr);

// Round to the nearest of 2^bits - 1 uniform levels on [0,1].
Image quantize(const Image& img, int bits);

struct SimulatedPair {
    Image dark;
    PairRecord record;
};

// dark = quantize(crf2(noise(darken(crf1^-1(bright), w)))), all knobs
// drawn from (cfg.master_seed, item_index).
SimulatedPair simulate_pair(const Image& bright, const SimConfig& cfg, int item_index);

// One manifest line: JSON object with id, files, curves, noise knobs.
std::string record_to_json(const PairRecord& rec);

// Writes dark_XXXX.png / bright_XXXX.png pairs plus manifest.jsonl into
// out_dir, cycling through the PNG images of corpus_dir. Items may be
// processed in parallel; outputs are identical for any worker count.
std::vector<PairRecord> generate_dataset(const std::string& corpus_dir, const std::string& out_dir,
                                         const SimConfig& cfg, int count);

}  // namespace relight
