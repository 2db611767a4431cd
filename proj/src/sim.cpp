#include "relight/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "relight/kernels.hpp"
#include "relight/log.hpp"
#include "relight/png_io.hpp"
#include "relight/rng.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace relight {
namespace {

void check_range(double lo, double hi, double min_lo, const char* name) {
    if (!(lo >= min_lo) || !(hi >= lo)) {
        throw InvalidInput(std::string("bad ") + name + " range [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "]");
    }
}

Image pointwise_crf(const Image& img, const Crf& crf, bool inverse, ColorSpace out_space,
                    std::size_t* clamped) {
    Image out = img;
    out.color_space = out_space;
    std::size_t n_clamped = 0;
    for (float& v : out.data) {
        if (v < 0.0f || v > 1.0f) ++n_clamped;
        v = static_cast<float>(inverse ? crf.invert(v) : crf.apply(v));
    }
    if (clamped) *clamped += n_clamped;
    if (n_clamped) RL_WARN("camera curve clamped %zu out-of-range samples", n_clamped);
    return out;
}

double uniform_in(std::mt19937_64& g, double lo, double hi) {
    return lo + (hi - lo) * rng::uniform01(g);
}

ordered_json crf_to_json(const Crf& crf) {
    if (crf.kind == Crf::Kind::Gamma) return {{"kind", "gamma"}, {"gamma", crf.gamma}};
    return {{"kind", "sigmoid-poly"}, {"c1", crf.c1}, {"c2", crf.c2}};
}

}  // namespace

void SimConfig::validate() const {
    check_range(gamma_lo, gamma_hi, 1e-6, "gamma");
    check_range(darken_lo, darken_hi, 1e-9, "darken");
    if (darken_hi > 1.0) throw InvalidInput("darken weights must be <= 1");
    check_range(shot_lo, shot_hi, 0.0, "shot-sigma");
    check_range(read_lo, read_hi, 0.0, "read-sigma");
    if (quant_bits != 8 && quant_bits != 10 && quant_bits != 12 && quant_bits != 16) {
        throw InvalidInput("quant_bits must be one of 8, 10, 12, 16");
    }
}

Image apply_crf(const Image& linear, const Crf& crf, std::size_t* clamped) {
    linear.require_color_space(ColorSpace::LinearRGB);
    return pointwise_crf(linear, crf, false, ColorSpace::SRGB, clamped);
}

Image invert_crf(const Image& encoded, const Crf& crf, std::size_t* clamped) {
    encoded.require_color_space(ColorSpace::SRGB);
    return pointwise_crf(encoded, crf, true, ColorSpace::LinearRGB, clamped);
}

Image darken(const Image& linear, double w) {
    linear.require_color_space(ColorSpace::LinearRGB);
    if (!(w > 0.0 && w <= 1.0)) {
        throw InvalidInput("darkening weight must be in (0, 1], got " + std::to_string(w));
    }
    Image out = linear;
    for (float& v : out.data) v = static_cast<float>(v * w);
    return out;
}

Image add_shot_read_noise(const Image& linear, double sigma_shot, double sigma_read,
                          std::uint64_t seed, std::size_t* clamped) {
    linear.require_color_space(ColorSpace::LinearRGB);
    if (sigma_shot < 0.0 || sigma_read < 0.0) throw InvalidInput("noise sigmas must be >= 0");
    Image out = linear;
    const std::size_t n = kernel::add_shot_read_noise(out.data.data(), out.channels, out.height,
                                                      out.width, sigma_shot, sigma_read, seed);
    if (clamped) *clamped += n;
    return out;
}

Image quantize(const Image& img, int bits) {
    if (bits != 8 && bits != 10 && bits != 12 && bits != 16) {
        throw InvalidInput("quantization bits must be one of 8, 10, 12, 16");
    }
    const double levels = (1 << bits) - 1;
    Image out = img;
    for (float& v : out.data) {
        const double c = std::min(1.0, std::max(0.0, static_cast<double>(v)));
        v = static_cast<float>(std::round(c * levels) / levels);
    }
    return out;
}

SimulatedPair simulate_pair(const Image& bright, const SimConfig& cfg, int item_index) {
    cfg.validate();
    bright.require_color_space(ColorSpace::SRGB);
    const std::uint64_t item_seed = rng::derive(cfg.master_seed, static_cast<std::uint64_t>(item_index));
    auto params = rng::stream(item_seed, 0);
    const std::uint64_t noise_seed = rng::derive(item_seed, 1);

    SimulatedPair out;
    auto& rec = out.record;
    rec.id = item_index;
    rec.crf1 = sample_crf(params, cfg.gamma_lo, cfg.gamma_hi, !cfg.gamma_only);
    rec.crf2 = sample_crf(params, cfg.gamma_lo, cfg.gamma_hi, !cfg.gamma_only);
    rec.darken_w = uniform_in(params, cfg.darken_lo, cfg.darken_hi);
    rec.sigma_shot = uniform_in(params, cfg.shot_lo, cfg.shot_hi);
    rec.sigma_read = uniform_in(params, cfg.read_lo, cfg.read_hi);

    const Image linear = invert_crf(bright, rec.crf1, &rec.clamped);
    const Image dark_linear = darken(linear, rec.darken_w);
    const Image noisy = add_shot_read_noise(dark_linear, rec.sigma_shot, rec.sigma_read,
                                            noise_seed, &rec.clamped);
    const Image encoded = apply_crf(noisy, rec.crf2, &rec.clamped);
    out.dark = quantize(encoded, cfg.quant_bits);
    return out;
}

std::string record_to_json(const PairRecord& rec) {
    ordered_json j;
    j["id"] = rec.id;
    j["dark"] = rec.dark_file;
    j["bright"] = rec.bright_file;
    j["source"] = rec.source;
    j["crf1"] = crf_to_json(rec.crf1);
    j["crf2"] = crf_to_json(rec.crf2);
    j["darken"] = rec.darken_w;
    j["sigma_shot"] = rec.sigma_shot;
    j["sigma_read"] = rec.sigma_read;
    j["clamped"] = rec.clamped;
    return j.dump();
}

std::vector<PairRecord> generate_dataset(const std::string& corpus_dir, const std::string& out_dir,
                                         const SimConfig& cfg, int count) {
    cfg.validate();
    if (count < 0) throw InvalidInput("pair count must be >= 0");
    std::error_code ec;
    if (!fs::is_directory(corpus_dir, ec)) throw IoError("corpus directory '" + corpus_dir + "' not found");
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory '" + out_dir + "'");

    std::vector<std::string> corpus;
    for (const auto& entry : fs::directory_iterator(corpus_dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string ext = entry.path().extension().string();
        if (ext == ".png" || ext == ".rawf32") corpus.push_back(entry.path().filename().string());
    }
    std::sort(corpus.begin(), corpus.end());

    const std::string manifest_path = (fs::path(out_dir) / "manifest.jsonl").string();
    std::vector<PairRecord> records(count);
    if (count == 0) {
        std::ofstream(manifest_path, std::ios::binary);
        return records;
    }
    if (corpus.empty()) throw IoError("corpus directory '" + corpus_dir + "' has no images");

    // Sources are cycled in manifest order; preload the ones needed.
    const int used = std::min<int>(count, static_cast<int>(corpus.size()));
    std::vector<Image> sources(used);
    for (int i = 0; i < used; ++i) {
        sources[i] = read_image((fs::path(corpus_dir) / corpus[i]).string()).as_rgb();
    }

    std::string failure;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int i = 0; i < count; ++i) {
        try {
            const int src = i % used;
            SimulatedPair pair = simulate_pair(sources[src], cfg, i);
            char dark_name[32], bright_name[32];
            std::snprintf(dark_name, sizeof dark_name, "dark_%04d.png", i);
            std::snprintf(bright_name, sizeof bright_name, "bright_%04d.png", i);
            pair.record.dark_file = dark_name;
            pair.record.bright_file = bright_name;
            pair.record.source = corpus[src];
            const int depth = cfg.quant_bits == 8 ? 8 : 16;
            write_png((fs::path(out_dir) / dark_name).string(), pair.dark, depth);
            write_png((fs::path(out_dir) / bright_name).string(), sources[src], depth);
            records[i] = std::move(pair.record);
        } catch (const std::exception& e) {
#ifdef _OPENMP
#pragma omp critical
#endif
            if (failure.empty()) failure = e.what();
        }
    }
    if (!failure.empty()) throw IoError("dataset generation failed: " + failure);

    std::ofstream manifest(manifest_path, std::ios::binary);
    if (!manifest) throw IoError("cannot write manifest '" + manifest_path + "'");
    for (const PairRecord& rec : records) manifest << record_to_json(rec) << "\n";
    if (!manifest) throw IoError("short write to manifest '" + manifest_path + "'");
    RL_INFO("wrote %d pairs to %s", count, out_dir.c_str());
    return records;
}

}  // namespace relight
