#include "relight/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>

#include "json.hpp"
#include "relight/kernels.hpp"
#include "relight/png_io.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace relight {

double psnr(const Image& a, const Image& b, double peak) {
    a.require_shape(b);
    if (!(peak > 0.0)) throw InvalidInput("peak must be positive");
    const double mse = kernel::mse(a.data.data(), b.data.data(),
                                   static_cast<std::int64_t>(a.data.size()));
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(peak * peak / mse);
}

namespace {

std::vector<float> luma_plane(const Image& img) {
    const Image rgb = img.as_rgb();
    std::vector<float> luma(rgb.pixels());
    kernel::bt601_luma(rgb.data.data(), luma.data(), rgb.pixels());
    return luma;
}

}  // namespace

double ssim(const Image& a, const Image& b) {
    a.require_shape(b);
    if (a.height < 11 || a.width < 11) {
        throw InvalidInput("SSIM needs images at least 11x11, got " + std::to_string(a.height) +
                           "x" + std::to_string(a.width));
    }
    const std::vector<float> la = luma_plane(a);
    const std::vector<float> lb = luma_plane(b);
    return kernel::ssim_mean(la.data(), lb.data(), a.height, a.width);
}

std::string format_metric(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

EvalReport evaluate_dataset(const std::string& pred_dir, const std::string& gt_dir,
                            const std::string& variant) {
    auto list_stems = [](const std::string& dir) {
        std::error_code ec;
        if (!fs::is_directory(dir, ec)) throw IoError("directory '" + dir + "' not found");
        std::map<std::string, std::string> stems;  // stem -> full path, sorted
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (!entry.is_regular_file()) continue;
            const std::string ext = entry.path().extension().string();
            if (ext != ".png" && ext != ".rawf32") continue;
            std::string stem = entry.path().filename().string();
            stem.resize(stem.size() - ext.size());
            stems[stem] = entry.path().string();
        }
        return stems;
    };

    const auto preds = list_stems(pred_dir);
    const auto gts = list_stems(gt_dir);
    if (preds.empty()) throw IoError("no images found in '" + pred_dir + "'");
    if (preds.size() != gts.size()) {
        throw IoError("prediction and ground-truth counts differ: " + std::to_string(preds.size()) +
                      " vs " + std::to_string(gts.size()));
    }

    EvalReport report;
    report.variant = variant;
    double sum_psnr = 0.0, sum_ssim = 0.0;
    for (const auto& [stem, pred_path] : preds) {
        const auto gt = gts.find(stem);
        if (gt == gts.end()) throw IoError("no ground-truth counterpart for '" + stem + "'");
        const Image pred = read_image(pred_path).as_rgb();
        const Image truth = read_image(gt->second).as_rgb();
        EvalRow row;
        row.id = stem;
        row.psnr_db = psnr(pred, truth);
        row.ssim = ssim(pred, truth);
        sum_psnr += row.psnr_db;
        sum_ssim += row.ssim;
        report.rows.push_back(std::move(row));
    }
    report.mean_psnr_db = sum_psnr / report.rows.size();
    report.mean_ssim = sum_ssim / report.rows.size();
    return report;
}

void write_report_csv(const EvalReport& report, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot write '" + path + "'");
    os << "id,psnr_db,ssim\n";
    for (const EvalRow& row : report.rows) {
        os << row.id << "," << format_metric(row.psnr_db) << "," << format_metric(row.ssim) << "\n";
    }
    if (!os) throw IoError("short write to '" + path + "'");
}

void write_report_json(const EvalReport& report, const std::string& path) {
    ordered_json j;
    j["variant"] = report.variant;
    j["count"] = report.rows.size();
    j["mean_psnr_db"] = format_metric(report.mean_psnr_db);
    j["mean_ssim"] = format_metric(report.mean_ssim);
    ordered_json rows = ordered_json::array();
    for (const EvalRow& row : report.rows) {
        rows.push_back({{"id", row.id},
                        {"psnr_db", format_metric(row.psnr_db)},
                        {"ssim", format_metric(row.ssim)}});
    }
    j["rows"] = std::move(rows);
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot write '" + path + "'");
    os << j.dump(2) << "\n";
    if (!os) throw IoError("short write to '" + path + "'");
}

std::string format_report_table(const EvalReport& report) {
    std::size_t idw = 2;
    for (const EvalRow& row : report.rows) idw = std::max(idw, row.id.size());
    std::string out;
    char line[256];
    std::snprintf(line, sizeof line, "%-*s  %12s  %10s\n", static_cast<int>(idw), "id", "psnr_db",
                  "ssim");
    out += line;
    for (const EvalRow& row : report.rows) {
        std::snprintf(line, sizeof line, "%-*s  %12s  %10s\n", static_cast<int>(idw),
                      row.id.c_str(), format_metric(row.psnr_db).c_str(),
                      format_metric(row.ssim).c_str());
        out += line;
    }
    std::snprintf(line, sizeof line, "%-*s  %12s  %10s\n", static_cast<int>(idw), "mean",
                  format_metric(report.mean_psnr_db).c_str(),
                  format_metric(report.mean_ssim).c_str());
    out += line;
    return out;
}

}  // namespace relight
