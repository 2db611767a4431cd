#pragma once

#include <string>
#include <vector>

#include "relight/image.hpp"

namespace relight {

// 10*log10(peak^2 / MSE) over all pixels and channels; +infinity for
// identical images (serialized as "inf").
double psnr(const Image& a, const Image& b, double peak = 1.0);

// Mean local SSIM on BT.601 luma: 11x11 Gaussian window, sigma 1.5,
// K1=0.01, K2=0.03, dynamic range 1, aggregated over the valid region.
double ssim(const Image& a, const Image& b);

struct EvalRow {
    std::string id;  // shared filename stem
    double psnr_db = 0.0;
    double ssim = 0.0;
};

struct EvalReport {
    std::vector<EvalRow> rows;  // lexicographic by id
    double mean_psnr_db = 0.0;
    double mean_ssim = 0.0;
    std::string variant;  // config echo for report headers
};

// Pairs the image files of two directories by filename stem and scores
// every pair. Counts must match and every prediction needs a
// ground-truth counterpart.
EvalReport evaluate_dataset(const std::string& pred_dir, const std::string& gt_dir,
                            const std::string& variant = "");

void write_report_csv(const EvalReport& report, const std::string& path);
void write_report_json(const EvalReport& report, const std::string& path);
std::string format_report_table(const EvalReport& report);

// "inf" for +infinity, fixed six decimals otherwise; the serialization
// used by both report writers.
std::string format_metric(double v);

}  // namespace relight
