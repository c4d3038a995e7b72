#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gr2r/tensor.hpp"

namespace gr2r {

// Grayscale portable-float-map image file: "Pf" header, width, height, a
// scale line whose sign encodes endianness (negative = little-endian), then
// 32-bit floats in bottom-to-top row order. Writes are little-endian and
// byte-deterministic; reads accept either endianness. Color "PF" is rejected.
ImageTensor read_image(const std::string& path);
void write_image(const std::string& path, const ImageTensor& x);

struct PsnrValue {
    double db = 0.0;
    bool infinite = false;  // exact recovery
};

// 10*log10(peak^2 * n / ||x_hat - x_ref||^2).
PsnrValue psnr(const ImageTensor& x_hat, const ImageTensor& x_ref, double peak = 1.0);

// ---- Run configuration ----------------------------------------------------

struct SyntheticSpec {
    std::size_t height = 32;
    std::size_t width = 32;
    std::string kind = "blocks";  // "blocks" or "gradient"
};

struct DatasetSpec {
    bool synthetic = true;
    SyntheticSpec synthetic_spec;
    std::string file_glob;
};

struct TrainSpec {
    double step_size = 0.1;
    int epochs = 50;
    int batch_size = 32;
    std::string gradient_mode = "analytic";
};

struct RunConfig {
    std::string family = "gaussian";
    std::vector<double> params;  // sigma | gain | looks, by family
    double alpha = 0.5;
    int mc_rounds = 1;  // J: test-time splits averaged at inference
    std::string loss = "gr2r-mse";
    std::string estimator = "affine";
    TrainSpec train;
    std::uint64_t seed = 0;
    DatasetSpec dataset;
};

// Strict JSON round trip: unknown keys are rejected, keys are emitted in
// sorted order, floats carry 17 significant digits.
RunConfig parse_run_config(const std::string& json_text);
std::string serialize_run_config(const RunConfig& cfg);

// ---- Metrics --------------------------------------------------------------

struct MetricsRecord {
    std::string run_id;
    std::string loss_name;
    double alpha = 0.0;
    PsnrValue psnr_db;
    std::vector<double> loss_curve;
    std::uint64_t seed = 0;
    double wall_ms = 0.0;
};

// One JSON object per line; psnr_db serialized as "inf" on exact recovery.
std::string metrics_to_json_line(const MetricsRecord& rec);
MetricsRecord metrics_from_json_line(const std::string& line);

struct SweepRow {
    double alpha;
    std::string loss_name;
    PsnrValue psnr_db;
    std::uint64_t seed;
};

// CSV with header alpha,loss_name,psnr_db,seed.
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

// Deterministic 17-significant-digit float formatting shared by all writers.
std::string format_double(double v);

// ---- Synthetic data -------------------------------------------------------

// Piecewise-constant blocks or a smooth two-way gradient, valued in
// [0.1, 0.9] so every noise family's mean domain is satisfied.
ImageTensor make_synthetic_image(const SyntheticSpec& spec, std::uint64_t seed);

}  // namespace gr2r
