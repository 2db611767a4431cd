// relight: tile-ensemble low-light restoration pipeline.
//
// Subcommands: simulate, enhance, sequence, oracle, blend, metrics,
// diagnose. All options can also come from a TOML config file
// (--config); command-line flags win over config keys, unknown keys are
// rejected. Exit codes: 0 ok, 1 internal error, 2 bad configuration,
// 3 I/O failure, 4 adapter failure, 5 shape mismatch.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "relight/detail/pixel_math.hpp"
#include "relight/ensemble.hpp"
#include "relight/enhancer.hpp"
#include "relight/errors.hpp"
#include "relight/image.hpp"
#include "relight/log.hpp"
#include "relight/metrics.hpp"
#include "relight/png_io.hpp"
#include "relight/rng.hpp"
#include "relight/scale_select.hpp"
#include "relight/sim.hpp"
#include "relight/tile_grid.hpp"

namespace fs = std::filesystem;
using namespace relight;

namespace {

// Options shared by the pipeline commands (enhance, sequence, diagnose).
struct PipelineOpts {
    int tile_px = 256;
    double overlap = 0.8;
    std::string weight = "taper";
    std::string enhancer = "identity";
    std::string gain = "1";
    std::string predictor = "const:0";
    std::string mode = "hard";
    std::uint64_t seed = 0;
    int workers = 0;
    bool no_jitter = false;
    int long_size = 0;  // 0: use tile_px
    bool dump_intermediate = false;
    int adapter_timeout_ms = 60000;
    GainGammaParams gg;
};

void add_pipeline_flags(CLI::App* cmd, PipelineOpts& o) {
    cmd->add_option("--tile-size", o.tile_px, "Native tile side in pixels")
        ->capture_default_str();
    cmd->add_option("--overlap", o.overlap, "Tile overlap fraction in [0,1)")
        ->capture_default_str();
    cmd->add_option("--weight", o.weight, "Tile weighting: uniform or taper")
        ->check(CLI::IsMember({"uniform", "taper"}))
        ->capture_default_str();
    cmd->add_option("--enhancer", o.enhancer,
                    "Enhancement operator: identity, gain-gamma, or exec:<command>")
        ->capture_default_str();
    cmd->add_option("--gain", o.gain, "Pre-gain: a number, or 'auto' (mean linear luminance 0.35)")
        ->capture_default_str();
    cmd->add_option("--seed", o.seed, "Seed for tile jitter and seeded enhancers")
        ->capture_default_str();
    cmd->add_option("--workers", o.workers, "Worker threads; 0 uses the runtime default")
        ->capture_default_str();
    cmd->add_flag("--no-jitter", o.no_jitter, "Disable tile-grid jitter");
    cmd->add_option("--long-size", o.long_size,
                    "Side of the long-scale resample; 0 matches --tile-size")
        ->capture_default_str();
    cmd->add_option("--adapter-timeout-ms", o.adapter_timeout_ms,
                    "Per-frame timeout for exec: adapters")
        ->capture_default_str();
    cmd->add_option("--tone-gamma", o.gg.tone_gamma, "gain-gamma output tone curve exponent")
        ->capture_default_str();
    cmd->add_flag_callback(
        "--no-tone-curve", [&o] { o.gg.tone_curve = false; },
        "gain-gamma: re-encode with plain sRGB instead of the tone curve");
    cmd->add_option("--chroma-radius", o.gg.chroma_radius,
                    "gain-gamma chroma smoothing radius; 0 disables")
        ->capture_default_str();
    cmd->add_option("--chroma-sigma-l", o.gg.chroma_sigma_l,
                    "gain-gamma chroma smoothing lightness scale")
        ->capture_default_str();
}

void add_predictor_flags(CLI::App* cmd, PipelineOpts& o) {
    cmd->add_option("--predictor", o.predictor,
                    "Scale-map source: const:<p>, luma:<radius>,<threshold>, exec:<cmd>, oracle")
        ->capture_default_str();
    cmd->add_option("--mode", o.mode, "Blend mode: hard or soft")
        ->check(CLI::IsMember({"hard", "soft"}))
        ->capture_default_str();
    cmd->add_flag("--dump-intermediate", o.dump_intermediate,
                  "Also write short/long estimates and the scale map next to the output");
}

void apply_workers(int workers) {
    if (workers < 0) throw InvalidInput("--workers must be >= 0");
#ifdef _OPENMP
    if (workers > 0) omp_set_num_threads(workers);
#else
    if (workers > 1) RL_WARN("built without OpenMP; --workers %d runs serially", workers);
#endif
}

WeightKind parse_weight(const std::string& s) {
    return s == "uniform" ? WeightKind::Uniform : WeightKind::Taper;
}

BlendMode parse_mode(const std::string& s) {
    return s == "soft" ? BlendMode::Soft : BlendMode::Hard;
}

float resolve_gain(const std::string& spec, const Image& input) {
    if (spec == "auto") {
        // Pick the gain that lifts the mean linear BT.601 luminance of the
        // input to 0.35. Heuristic; useful when exposure is unknown.
        const Image rgb = input.as_rgb();
        const std::int64_t n = rgb.pixels();
        double sum = 0.0;
        for (std::int64_t i = 0; i < n; ++i) {
            const double r = detail::srgb_eotf(rgb.data[i]);
            const double g = detail::srgb_eotf(rgb.data[n + i]);
            const double b = detail::srgb_eotf(rgb.data[2 * n + i]);
            sum += detail::bt601_luma(r, g, b);
        }
        const double mean = sum / static_cast<double>(n);
        const double gain = std::clamp(0.35 / std::max(mean, 1e-6), 0.01, 1e4);
        RL_INFO("auto gain: mean linear luminance %.6f -> gain %.4f", mean, gain);
        return static_cast<float>(gain);
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(spec, &used);
    } catch (const std::exception&) {
        throw InvalidInput("--gain expects a number or 'auto', got '" + spec + "'");
    }
    if (used != spec.size() || !(v > 0.0))
        throw InvalidInput("--gain expects a positive number or 'auto', got '" + spec + "'");
    return static_cast<float>(v);
}

std::string path_stem(const std::string& path) {
    const fs::path p(path);
    return (p.parent_path() / p.stem()).string();
}

ScaleMap harden(ScaleMap map) {
    if (!map.hard) {
        for (float& p : map.p_long) p = p >= 0.5f ? 1.0f : 0.0f;
        map.hard = true;
    }
    return map;
}

// Sorted image files (.png/.rawf32) of a directory, by filename.
std::vector<fs::path> list_images(const std::string& dir) {
    if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir);
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string ext = entry.path().extension().string();
        if (ext == ".png" || ext == ".rawf32") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
    return files;
}

// One full restoration of `dark`, dumps included. Returns the estimate.
EnsembleEstimate run_pipeline(const Image& dark, const std::string& out_path,
                              const PipelineOpts& o, Enhancer& enhancer,
                              ScalePredictor* predictor, const Image* gt,
                              std::uint64_t jitter_seed) {
    const Image rgb = dark.as_rgb();
    const TileGrid grid = make_tile_grid(rgb.height, rgb.width, o.tile_px, o.overlap, jitter_seed,
                                         !o.no_jitter);
    const float gain = resolve_gain(o.gain, rgb);
    const int long_d = o.long_size > 0 ? o.long_size : o.tile_px;
    EnsembleEstimate est = ensemble_estimate(rgb, enhancer, grid, parse_weight(o.weight), gain,
                                             long_d, predictor, parse_mode(o.mode), gt);
    if (const fs::path parent = fs::path(out_path).parent_path(); !parent.empty())
        fs::create_directories(parent);
    write_image(out_path, est.final);
    if (o.dump_intermediate) {
        const std::string stem = path_stem(out_path);
        write_rawf32(stem + ".short.rawf32", est.short_est);
        write_rawf32(stem + ".long.rawf32", est.long_est);
        write_rawf32(stem + ".scale.rawf32", est.map.to_image());
        write_png(stem + ".scale.png", est.map.to_image());
        write_rawf32(stem + ".final.rawf32", est.final);
    }
    return est;
}

int cmd_simulate(const std::string& corpus_dir, const std::string& out_dir, const SimConfig& cfg,
                 int count, int workers) {
    apply_workers(workers);
    cfg.validate();
    const auto records = generate_dataset(corpus_dir, out_dir, cfg, count);
    std::printf("%s\n", (fs::path(out_dir) / "manifest.jsonl").string().c_str());
    RL_INFO("simulated %zu pairs", records.size());
    return kExitOk;
}

int cmd_enhance(const std::string& input, const std::string& output, const PipelineOpts& o,
                const std::string& gt_path) {
    apply_workers(o.workers);
    const Image dark = read_image(input);
    std::unique_ptr<Enhancer> enhancer = make_enhancer(o.enhancer, o.gg, o.adapter_timeout_ms);
    Image gt;
    std::unique_ptr<ScalePredictor> predictor;
    if (o.predictor == "oracle") {
        if (gt_path.empty()) throw InvalidInput("--predictor oracle needs --gt");
        gt = read_image(gt_path);
    } else {
        predictor = make_predictor(o.predictor, o.adapter_timeout_ms);
    }
    run_pipeline(dark, output, o, *enhancer, predictor.get(),
                 o.predictor == "oracle" ? &gt : nullptr, o.seed);
    return kExitOk;
}

int cmd_sequence(const std::string& frames_dir, const std::string& out_dir, const PipelineOpts& o,
                 const std::string& gt_dir, int first_n) {
    apply_workers(o.workers);
    std::vector<fs::path> frames = list_images(frames_dir);
    if (frames.empty()) throw IoError("no frames in " + frames_dir);
    if (first_n >= 0 && static_cast<std::size_t>(first_n) < frames.size())
        frames.resize(static_cast<std::size_t>(first_n));
    fs::create_directories(out_dir);
    std::unique_ptr<Enhancer> enhancer = make_enhancer(o.enhancer, o.gg, o.adapter_timeout_ms);
    const bool oracle = o.predictor == "oracle";
    if (oracle && gt_dir.empty()) throw InvalidInput("--predictor oracle needs --gt-dir");
    std::unique_ptr<ScalePredictor> predictor;
    if (!oracle) predictor = make_predictor(o.predictor, o.adapter_timeout_ms);

    EvalReport report;
    report.variant = "enhancer=" + o.enhancer + " weight=" + o.weight + " mode=" + o.mode;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        const Image dark = read_image(frames[i].string());
        const std::string out_path = (fs::path(out_dir) / frames[i].filename()).string();
        Image gt;
        if (!gt_dir.empty()) {
            const fs::path gt_path = fs::path(gt_dir) / frames[i].filename();
            if (!fs::exists(gt_path)) throw IoError("missing ground truth " + gt_path.string());
            gt = read_image(gt_path.string());
        }
        const Image* gt_ptr = gt.samples() > 0 ? &gt : nullptr;
        if (oracle && !gt_ptr) throw InvalidInput("--predictor oracle needs --gt-dir");
        run_pipeline(dark, out_path, o, *enhancer, predictor.get(), oracle ? gt_ptr : nullptr,
                     rng::derive(o.seed, i));
        if (gt_ptr) {
            // Score the written file, same protocol as the metrics command.
            const Image written = read_image(out_path).as_rgb();
            EvalRow row;
            row.id = frames[i].stem().string();
            row.psnr_db = psnr(written, gt_ptr->as_rgb());
            row.ssim = ssim(written, gt_ptr->as_rgb());
            report.rows.push_back(row);
        }
    }
    if (!report.rows.empty()) {
        double psum = 0.0, ssum = 0.0;
        for (const EvalRow& row : report.rows) {
            psum += row.psnr_db;
            ssum += row.ssim;
        }
        report.mean_psnr_db = psum / static_cast<double>(report.rows.size());
        report.mean_ssim = ssum / static_cast<double>(report.rows.size());
        write_report_csv(report, (fs::path(out_dir) / "report.csv").string());
        write_report_json(report, (fs::path(out_dir) / "report.json").string());
        std::printf("%s", format_report_table(report).c_str());
    }
    RL_INFO("processed %zu frames", frames.size());
    return kExitOk;
}

int cmd_oracle(const std::string& short_path, const std::string& long_path,
               const std::string& gt_path, const std::string& out_mask,
               const std::string& out_image) {
    const Image short_est = read_image(short_path).as_rgb();
    const Image long_est = read_image(long_path).as_rgb();
    const Image gt = read_image(gt_path).as_rgb();
    const ScaleMap mask = oracle_mask(short_est, long_est, gt);
    write_image(out_mask, mask.to_image());
    write_image(out_image, blend_hard(short_est, long_est, mask));
    return kExitOk;
}

int cmd_blend(const std::string& short_path, const std::string& long_path,
              const std::string& map_path, const std::string& out_path, const std::string& mode) {
    const Image short_est = read_image(short_path).as_rgb();
    const Image long_est = read_image(long_path).as_rgb();
    ScaleMap map = ScaleMap::from_image(read_image(map_path));
    Image out;
    if (parse_mode(mode) == BlendMode::Hard) {
        out = blend_hard(short_est, long_est, harden(std::move(map)));
    } else {
        out = blend_soft(short_est, long_est, map);
    }
    write_image(out_path, out);
    return kExitOk;
}

int cmd_metrics(const std::string& pred_dir, const std::string& gt_dir, const std::string& variant,
                const std::string& csv_path, const std::string& json_path) {
    const EvalReport report = evaluate_dataset(pred_dir, gt_dir, variant);
    if (!csv_path.empty()) write_report_csv(report, csv_path);
    if (!json_path.empty()) write_report_json(report, json_path);
    std::printf("%s", format_report_table(report).c_str());
    return kExitOk;
}

int cmd_diagnose(const std::string& input, const std::string& out_heatmap, const PipelineOpts& o,
                 const std::vector<int>& a, const std::vector<int>& b) {
    apply_workers(o.workers);
    const Image img = read_image(input).as_rgb();
    std::unique_ptr<Enhancer> enhancer = make_enhancer(o.enhancer, o.gg, o.adapter_timeout_ms);
    const Window win_a = Window::native_block(a[0], a[1], o.tile_px, img.width, img.height);
    const Window win_b = Window::native_block(b[0], b[1], o.tile_px, img.width, img.height);
    const float gain = resolve_gain(o.gain, img);
    const Disagreement d = crop_disagreement(img, *enhancer, win_a, win_b, gain);
    if (!out_heatmap.empty()) write_image(out_heatmap, d.heatmap);
    std::printf("overlap_origin %d %d\n", d.x0, d.y0);
    std::printf("overlap_extent %d %d\n", d.heatmap.width, d.heatmap.height);
    std::printf("mean_abs_disagreement %.9g\n", d.mean);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tile-ensemble restoration for low-light images"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML config file; command-line flags override its keys");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.get_config_formatter_base()->comment('#');

    // simulate
    auto* sim = app.add_subcommand("simulate", "Generate simulated dark/bright pairs");
    std::string corpus_dir, sim_out;
    SimConfig sim_cfg;
    int sim_count = 10, sim_workers = 0;
    sim->add_option("corpus", corpus_dir, "Directory of bright source images")->required();
    sim->add_option("out", sim_out, "Output dataset directory")->required();
    sim->add_option("--count", sim_count, "Number of pairs")->capture_default_str();
    sim->add_option("--seed", sim_cfg.master_seed, "Master seed")->capture_default_str();
    sim->add_option("--workers", sim_workers, "Worker threads; 0 uses the runtime default")
        ->capture_default_str();
    sim->add_option("--quant-bits", sim_cfg.quant_bits, "Output quantization depth: 8, 10, 12, 16")
        ->capture_default_str();
    sim->add_flag("--gamma-only", sim_cfg.gamma_only, "Restrict curve sampling to the gamma family");
    sim->add_option("--gamma-lo", sim_cfg.gamma_lo, "Curve gamma range, low")->capture_default_str();
    sim->add_option("--gamma-hi", sim_cfg.gamma_hi, "Curve gamma range, high")->capture_default_str();
    sim->add_option("--darken-lo", sim_cfg.darken_lo, "Darkening factor range, low")
        ->capture_default_str();
    sim->add_option("--darken-hi", sim_cfg.darken_hi, "Darkening factor range, high")
        ->capture_default_str();
    sim->add_option("--shot-lo", sim_cfg.shot_lo, "Shot-noise sigma range, low")
        ->capture_default_str();
    sim->add_option("--shot-hi", sim_cfg.shot_hi, "Shot-noise sigma range, high")
        ->capture_default_str();
    sim->add_option("--read-lo", sim_cfg.read_lo, "Read-noise sigma range, low")
        ->capture_default_str();
    sim->add_option("--read-hi", sim_cfg.read_hi, "Read-noise sigma range, high")
        ->capture_default_str();

    // enhance
    auto* enh = app.add_subcommand("enhance", "Restore one image");
    std::string enh_in, enh_out, enh_gt;
    PipelineOpts enh_opts;
    enh->add_option("input", enh_in, "Input image (.png or .rawf32)")->required();
    enh->add_option("output", enh_out, "Output image path")->required();
    add_pipeline_flags(enh, enh_opts);
    add_predictor_flags(enh, enh_opts);
    enh->add_option("--gt", enh_gt, "Ground truth image for --predictor oracle");

    // sequence
    auto* seq = app.add_subcommand("sequence", "Restore a directory of frames");
    std::string seq_in, seq_out, seq_gt;
    int seq_first_n = -1;
    PipelineOpts seq_opts;
    seq->add_option("frames", seq_in, "Directory of input frames")->required();
    seq->add_option("out", seq_out, "Output directory")->required();
    add_pipeline_flags(seq, seq_opts);
    add_predictor_flags(seq, seq_opts);
    seq->add_option("--gt-dir", seq_gt, "Ground-truth directory; enables the metrics report");
    seq->add_option("--first-n", seq_first_n, "Process only the first N frames (-1: all)")
        ->capture_default_str();

    // oracle
    auto* orc = app.add_subcommand("oracle", "Best-possible hard scale map from ground truth");
    std::string orc_short, orc_long, orc_gt, orc_mask, orc_image;
    orc->add_option("short", orc_short, "Short-scale estimate")->required();
    orc->add_option("long", orc_long, "Long-scale estimate")->required();
    orc->add_option("gt", orc_gt, "Ground truth image")->required();
    orc->add_option("out-mask", orc_mask, "Output scale-map path")->required();
    orc->add_option("out-image", orc_image, "Output blended image path")->required();

    // blend
    auto* bld = app.add_subcommand("blend", "Blend short/long estimates with a scale map");
    std::string bld_short, bld_long, bld_map, bld_out, bld_mode = "hard";
    bld->add_option("short", bld_short, "Short-scale estimate")->required();
    bld->add_option("long", bld_long, "Long-scale estimate")->required();
    bld->add_option("map", bld_map, "Scale map (.png or .rawf32)")->required();
    bld->add_option("out", bld_out, "Output image path")->required();
    bld->add_option("--mode", bld_mode, "Blend mode: hard or soft")
        ->check(CLI::IsMember({"hard", "soft"}))
        ->capture_default_str();

    // metrics
    auto* met = app.add_subcommand("metrics", "Score a prediction directory against ground truth");
    std::string met_pred, met_gt, met_variant, met_csv, met_json;
    met->add_option("pred", met_pred, "Prediction directory")->required();
    met->add_option("gt", met_gt, "Ground-truth directory")->required();
    met->add_option("--variant", met_variant, "Label echoed into the report");
    met->add_option("--csv", met_csv, "Write the CSV report here");
    met->add_option("--json", met_json, "Write the JSON report here");

    // diagnose
    auto* dia = app.add_subcommand("diagnose", "Disagreement of two overlapping enhanced crops");
    std::string dia_in, dia_out;
    PipelineOpts dia_opts;
    std::vector<int> dia_a, dia_b;
    dia->add_option("input", dia_in, "Input image")->required();
    dia->add_option("--a", dia_a, "First crop origin: x y")->expected(2)->required();
    dia->add_option("--b", dia_b, "Second crop origin: x y")->expected(2)->required();
    dia->add_option("--heatmap", dia_out, "Write the disagreement heatmap here");
    add_pipeline_flags(dia, dia_opts);

    // Let --config appear after the subcommand name too.
    for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitBadConfig;
    }

    try {
        if (app.got_subcommand(sim))
            return cmd_simulate(corpus_dir, sim_out, sim_cfg, sim_count, sim_workers);
        if (app.got_subcommand(enh)) return cmd_enhance(enh_in, enh_out, enh_opts, enh_gt);
        if (app.got_subcommand(seq))
            return cmd_sequence(seq_in, seq_out, seq_opts, seq_gt, seq_first_n);
        if (app.got_subcommand(orc))
            return cmd_oracle(orc_short, orc_long, orc_gt, orc_mask, orc_image);
        if (app.got_subcommand(bld)) return cmd_blend(bld_short, bld_long, bld_map, bld_out, bld_mode);
        if (app.got_subcommand(met))
            return cmd_metrics(met_pred, met_gt, met_variant, met_csv, met_json);
        if (app.got_subcommand(dia)) return cmd_diagnose(dia_in, dia_out, dia_opts, dia_a, dia_b);
    } catch (const AdapterError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitAdapter;
    } catch (const ShapeMismatch& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitShapeMismatch;
    } catch (const InvalidInput& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitBadConfig;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitFailure;
    }
    return kExitFailure;
}
