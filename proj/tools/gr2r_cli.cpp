// Command-line harness: corrupt / split / verify / train / evaluate /
// sweep-alpha / moments / inpaint over the noise-splitting library.
//
// Exit codes: 0 success, 2 configuration error, 3 verification failure,
// 4 numeric divergence.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gr2r/additive_matching.hpp"
#include "gr2r/estimators.hpp"
#include "gr2r/inverse_ops.hpp"
#include "gr2r/io_formats.hpp"
#include "gr2r/losses.hpp"
#include "gr2r/nef_models.hpp"
#include "gr2r/oracles.hpp"
#include "gr2r/rng.hpp"
#include "gr2r/splitters.hpp"
#include "verify_suite.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitVerify = 3;
constexpr int kExitDiverged = 4;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int verbosity() {
    const char* env = std::getenv("NEF_SPLIT_LOG");
    if (!env) return 0;
    try {
        return std::stoi(env);
    } catch (...) {
        return 1;
    }
}

void log_line(int level, const std::string& msg) {
    if (verbosity() >= level) std::cerr << "[nef-split] " << msg << "\n";
}

struct GlobalArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir = ".";
    int jobs = 1;
};

void add_common_options(CLI::App* cmd, GlobalArgs& args, bool config_required) {
    auto* opt = cmd->add_option("--config", args.config_path, "Run configuration JSON file");
    if (config_required) opt->required();
    cmd->add_option("--seed", args.seed, "Override the configuration seed");
    cmd->add_option("--out", args.out_dir, "Output directory");
    cmd->add_option("--jobs", args.jobs, "Maximum worker count")->check(CLI::PositiveNumber);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

gr2r::RunConfig load_config(const GlobalArgs& args) {
    gr2r::RunConfig cfg;
    if (!args.config_path.empty()) {
        try {
            cfg = gr2r::parse_run_config(read_file(args.config_path));
        } catch (const std::exception& e) {
            throw ConfigError(std::string("invalid configuration: ") + e.what());
        }
    }
    if (args.seed) cfg.seed = *args.seed;
    return cfg;
}

double family_param(const gr2r::RunConfig& cfg, double fallback) {
    return cfg.params.empty() ? fallback : cfg.params[0];
}

gr2r::NoiseModel model_from_config(const gr2r::RunConfig& cfg) {
    try {
        if (cfg.family == "gaussian") return gr2r::NoiseModel::gaussian(family_param(cfg, 0.1));
        if (cfg.family == "poisson") return gr2r::NoiseModel::poisson(family_param(cfg, 1.0));
        if (cfg.family == "gamma")
            return gr2r::NoiseModel::gamma(static_cast<int>(family_param(cfg, 5.0)));
        if (cfg.family == "binomial")
            return gr2r::NoiseModel::binomial(static_cast<int>(family_param(cfg, 10.0)));
    } catch (const std::exception& e) {
        throw ConfigError(std::string("invalid family parameters: ") + e.what());
    }
    throw ConfigError("unknown noise family: " + cfg.family);
}

void validate_alpha(const gr2r::NoiseModel& model, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ConfigError("alpha must lie strictly inside (0, 1)");
    }
    if (model.family() == gr2r::Family::Binomial) {
        double la = static_cast<double>(model.looks()) * alpha;
        if (std::abs(la - std::llround(la)) > 1e-9) {
            throw ConfigError("binomial splitting requires looks*alpha to be an integer");
        }
    }
}

gr2r::Estimator estimator_from_config(const gr2r::RunConfig& cfg) {
    if (cfg.estimator == "identity") return gr2r::Estimator::identity();
    if (cfg.estimator == "constant") return gr2r::Estimator::constant(0.5);
    if (cfg.estimator == "affine") return gr2r::Estimator::affine(1.0, 0.0);
    if (cfg.estimator == "polynomial")
        return gr2r::Estimator::polynomial({0.0, 1.0, 0.0});
    if (cfg.estimator == "convolution") {
        std::vector<double> kernel(9, 0.0);
        kernel[4] = 1.0;
        return gr2r::Estimator::convolution(kernel, 3);
    }
    throw ConfigError("unknown estimator: " + cfg.estimator);
}

gr2r::TrainConfig train_config_from(const gr2r::RunConfig& cfg) {
    gr2r::TrainConfig tc;
    tc.step_size = cfg.train.step_size;
    tc.epochs = cfg.train.epochs;
    tc.batch_size = cfg.train.batch_size;
    tc.seed = cfg.seed + 1;
    if (cfg.train.gradient_mode == "analytic") {
        tc.gradient_mode = gr2r::GradientMode::Analytic;
    } else if (cfg.train.gradient_mode == "finite-difference") {
        tc.gradient_mode = gr2r::GradientMode::FiniteDifference;
    } else {
        throw ConfigError("unknown gradient mode: " + cfg.train.gradient_mode);
    }
    return tc;
}

gr2r::ImageTensor clean_image(const gr2r::RunConfig& cfg, std::uint64_t index) {
    if (!cfg.dataset.synthetic) {
        throw ConfigError("only synthetic datasets are supported; set dataset.synthetic = true");
    }
    return gr2r::make_synthetic_image(cfg.dataset.synthetic_spec, cfg.seed * 1000003ULL + index);
}

std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory: " + dir);
}

gr2r::PixelLoss pixel_loss_for(const gr2r::RunConfig& cfg, const gr2r::NoiseModel& model) {
    if (cfg.loss == "sup-mse" || cfg.loss == "n2n" || cfg.loss == "gr2r-mse") {
        return gr2r::mse_pixel_loss();
    }
    if (cfg.loss == "gr2r-nll") {
        switch (model.family()) {
            case gr2r::Family::Gaussian:
                return gr2r::mse_pixel_loss();
            case gr2r::Family::Poisson:
                return gr2r::poisson_nll_pixel_loss();
            case gr2r::Family::Gamma:
                return gr2r::gamma_nll_pixel_loss();
            case gr2r::Family::Binomial:
                return gr2r::binomial_nll_pixel_loss();
        }
    }
    throw ConfigError("unknown loss: " + cfg.loss);
}

std::vector<gr2r::TrainSample> build_training_set(const gr2r::RunConfig& cfg,
                                                  const gr2r::NoiseModel& model,
                                                  std::size_t n_images) {
    gr2r::RandomStream rng = gr2r::RandomStream(cfg.seed).substream("train.noise");
    std::vector<gr2r::TrainSample> samples;
    samples.reserve(n_images);
    for (std::size_t i = 0; i < n_images; ++i) {
        gr2r::RandomStream image_rng = rng.substream(i);
        gr2r::ImageTensor x = clean_image(cfg, i);
        gr2r::ImageTensor y = gr2r::sample_noisy(model, x, image_rng);
        gr2r::TrainSample s;
        if (cfg.loss == "sup-mse") {
            s.input = y;
            s.target = x;
        } else if (cfg.loss == "n2n") {
            s.input = y;
            s.target = gr2r::sample_noisy(model, x, image_rng);
        } else {
            gr2r::SplitPair pair = gr2r::split(model, y, cfg.alpha, image_rng);
            s.input = pair.y1;
            s.target = pair.y2;
        }
        samples.push_back(std::move(s));
    }
    return samples;
}

gr2r::Estimator prepare_estimator(const gr2r::RunConfig& cfg, const gr2r::NoiseModel& model) {
    gr2r::Estimator f = estimator_from_config(cfg);
    if (cfg.loss == "gr2r-nll") {
        switch (model.family()) {
            case gr2r::Family::Gaussian:
                break;
            case gr2r::Family::Poisson:
            case gr2r::Family::Gamma:
                f.with_range_map(gr2r::RangeMap::Positive);
                break;
            case gr2r::Family::Binomial:
                f.with_range_map(gr2r::RangeMap::UnitInterval);
                break;
        }
    }
    return f;
}

struct EvalSummary {
    std::vector<gr2r::MetricsRecord> per_image;
    double mean_psnr_db = 0.0;
};

EvalSummary evaluate_estimator(const gr2r::RunConfig& cfg, const gr2r::NoiseModel& model,
                               const gr2r::Estimator& f, std::size_t n_images) {
    gr2r::RandomStream rng = gr2r::RandomStream(cfg.seed).substream("eval.noise");
    EvalSummary summary;
    double total_db = 0.0;
    for (std::size_t i = 0; i < n_images; ++i) {
        gr2r::RandomStream image_rng = rng.substream(i);
        gr2r::ImageTensor x = clean_image(cfg, 100000 + i);  // held out from training images
        gr2r::ImageTensor y = gr2r::sample_noisy(model, x, image_rng);
        gr2r::ImageTensor x_hat = gr2r::mc_inference(
            [&](const gr2r::ImageTensor& y1) { return f.apply(y1); }, model, y, cfg.alpha,
            cfg.mc_rounds, image_rng);
        gr2r::MetricsRecord rec;
        rec.run_id = "evaluate/" + std::to_string(i);
        rec.loss_name = cfg.loss;
        rec.alpha = cfg.alpha;
        rec.psnr_db = gr2r::psnr(x_hat, x);
        rec.seed = cfg.seed;
        summary.per_image.push_back(rec);
        total_db += rec.psnr_db.infinite ? 1e9 : rec.psnr_db.db;
    }
    summary.mean_psnr_db = total_db / static_cast<double>(n_images);
    return summary;
}

std::string metrics_lines(const std::vector<gr2r::MetricsRecord>& records) {
    std::string out;
    for (const gr2r::MetricsRecord& rec : records) out += gr2r::metrics_to_json_line(rec) + "\n";
    return out;
}

// ---- commands ---------------------------------------------------------------

int cmd_corrupt(const GlobalArgs& args, const std::string& in_path) {
    gr2r::RunConfig cfg = load_config(args);
    gr2r::NoiseModel model = model_from_config(cfg);
    ensure_out_dir(args.out_dir);
    gr2r::ImageTensor x;
    if (!in_path.empty()) {
        x = gr2r::read_image(in_path);
    } else {
        x = clean_image(cfg, 0);
        gr2r::write_image(join_path(args.out_dir, "clean.pfm"), x);
    }
    model.check_mean_domain(x);
    gr2r::RandomStream rng = gr2r::RandomStream(cfg.seed).substream("corrupt");
    gr2r::ImageTensor y = gr2r::sample_noisy(model, x, rng);
    gr2r::write_image(join_path(args.out_dir, "noisy.pfm"), y);
    gr2r::MetricsRecord rec;
    rec.run_id = "corrupt";
    rec.loss_name = "";
    rec.alpha = cfg.alpha;
    rec.psnr_db = gr2r::psnr(y, x);
    rec.seed = cfg.seed;
    write_file(join_path(args.out_dir, "metrics.jsonl"), metrics_lines({rec}));
    log_line(1, "corrupt: wrote noisy.pfm (input psnr " +
                    (rec.psnr_db.infinite ? std::string("inf")
                                          : gr2r::format_double(rec.psnr_db.db)) +
                    " dB)");
    return kExitOk;
}

int cmd_split(const GlobalArgs& args, const std::string& in_path) {
    gr2r::RunConfig cfg = load_config(args);
    gr2r::NoiseModel model = model_from_config(cfg);
    validate_alpha(model, cfg.alpha);
    ensure_out_dir(args.out_dir);
    gr2r::RandomStream rng = gr2r::RandomStream(cfg.seed).substream("split");
    gr2r::ImageTensor y;
    if (!in_path.empty()) {
        y = gr2r::read_image(in_path);
        model.check_observation(y);
    } else {
        gr2r::ImageTensor x = clean_image(cfg, 0);
        gr2r::write_image(join_path(args.out_dir, "clean.pfm"), x);
        y = gr2r::sample_noisy(model, x, rng);
        gr2r::write_image(join_path(args.out_dir, "noisy.pfm"), y);
    }
    gr2r::SplitPair pair = gr2r::split(model, y, cfg.alpha, rng);
    gr2r::write_image(join_path(args.out_dir, "y1.pfm"), pair.y1);
    gr2r::write_image(join_path(args.out_dir, "y2.pfm"), pair.y2);
    if (verbosity() >= 1) {
        double worst = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            double back = (1.0 - cfg.alpha) * pair.y1[i] + cfg.alpha * pair.y2[i];
            worst = std::max(worst, std::abs(back - y[i]));
        }
        log_line(1, "split: recombination residual " + gr2r::format_double(worst));
    }
    return kExitOk;
}

int cmd_verify(const GlobalArgs& args) {
    gr2r::RunConfig cfg = load_config(args);
    if (!args.config_path.empty()) {
        gr2r::NoiseModel model = model_from_config(cfg);
        validate_alpha(model, cfg.alpha);
    }
    ensure_out_dir(args.out_dir);
    log_line(1, "verify: running the invariant suite with seed " + std::to_string(cfg.seed));
    gr2r::VerifyReport report = gr2r::run_verify_suite(cfg.seed);
    std::string rendered = gr2r::render_verify_report(report);
    write_file(join_path(args.out_dir, "verify_report.json"), rendered);
    std::cout << rendered;
    return report.all_pass ? kExitOk : kExitVerify;
}

int cmd_train(const GlobalArgs& args) {
    gr2r::RunConfig cfg = load_config(args);
    gr2r::NoiseModel model = model_from_config(cfg);
    validate_alpha(model, cfg.alpha);
    gr2r::Estimator f = prepare_estimator(cfg, model);
    gr2r::PixelLoss loss = pixel_loss_for(cfg, model);
    gr2r::TrainConfig tc = train_config_from(cfg);
    ensure_out_dir(args.out_dir);

    std::vector<gr2r::TrainSample> data = build_training_set(cfg, model, 16);
    log_line(1, "train: " + std::to_string(data.size()) + " samples, loss " + cfg.loss);
    auto t0 = std::chrono::steady_clock::now();
    gr2r::Estimator trained = gr2r::train(f, loss, data, tc);
    auto t1 = std::chrono::steady_clock::now();

    write_file(join_path(args.out_dir, "estimator.json"), trained.serialize_json());
    EvalSummary summary = evaluate_estimator(cfg, model, trained, 4);
    gr2r::MetricsRecord rec;
    rec.run_id = "train";
    rec.loss_name = cfg.loss;
    rec.alpha = cfg.alpha;
    rec.psnr_db.db = summary.mean_psnr_db;
    rec.seed = cfg.seed;
    rec.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    // Wall time is not byte-deterministic; zero it in the persisted record.
    rec.wall_ms = 0.0;
    write_file(join_path(args.out_dir, "metrics.jsonl"), metrics_lines({rec}));
    return kExitOk;
}

int cmd_evaluate(const GlobalArgs& args, const std::string& estimator_path) {
    gr2r::RunConfig cfg = load_config(args);
    gr2r::NoiseModel model = model_from_config(cfg);
    validate_alpha(model, cfg.alpha);
    if (estimator_path.empty()) throw ConfigError("--estimator is required");
    gr2r::Estimator f = gr2r::Estimator::deserialize_json(read_file(estimator_path));
    ensure_out_dir(args.out_dir);
    EvalSummary summary = evaluate_estimator(cfg, model, f, 8);
    write_file(join_path(args.out_dir, "metrics.jsonl"), metrics_lines(summary.per_image));
    std::cout << "mean_psnr_db " << gr2r::format_double(summary.mean_psnr_db) << "\n";
    return kExitOk;
}

int cmd_sweep_alpha(const GlobalArgs& args, const std::vector<double>& alphas) {
    gr2r::RunConfig cfg = load_config(args);
    gr2r::NoiseModel model = model_from_config(cfg);
    if (alphas.empty()) throw ConfigError("--alphas requires at least one value");
    for (double a : alphas) {
        if (!(a > 0.0 && a < 1.0)) throw ConfigError("sweep alphas must lie inside (0, 1)");
    }
    ensure_out_dir(args.out_dir);
    std::vector<gr2r::SweepRow> rows;
    for (double alpha : alphas) {
        gr2r::RunConfig run = cfg;
        run.alpha = alpha;
        gr2r::SweepRow row;
        row.alpha = alpha;
        row.loss_name = run.loss;
        row.seed = run.seed;
        try {
            validate_alpha(model, alpha);
            gr2r::Estimator f = prepare_estimator(run, model);
            gr2r::Estimator trained = gr2r::train(f, pixel_loss_for(run, model),
                                                  build_training_set(run, model, 16),
                                                  train_config_from(run));
            EvalSummary summary = evaluate_estimator(run, model, trained, 4);
            row.psnr_db.db = summary.mean_psnr_db;
        } catch (const std::exception& e) {
            // Per-alpha failures are recorded and the sweep continues.
            row.loss_name = run.loss + " (failed: " + e.what() + ")";
            row.psnr_db.db = 0.0;
            log_line(1, "sweep-alpha: alpha " + gr2r::format_double(alpha) +
                            " failed: " + e.what());
        }
        rows.push_back(row);
    }
    std::string csv = gr2r::sweep_to_csv(rows);
    write_file(join_path(args.out_dir, "sweep.csv"), csv);
    std::cout << csv;
    return kExitOk;
}

int cmd_moments(const GlobalArgs& args, double tau, std::size_t n_samples) {
    gr2r::RunConfig cfg = load_config(args);
    const double sigma = family_param(cfg, 0.1);
    ensure_out_dir(args.out_dir);
    gr2r::RandomStream base(cfg.seed);
    gr2r::RandomStream eps_rng = base.substream("moments.noise");
    gr2r::ImageTensor eps = gr2r::log_rayleigh_sample(sigma, n_samples, eps_rng);
    gr2r::MomentSpec spec = gr2r::target_moments(eps, 3, tau);
    gr2r::RandomStream gd_rng = base.substream("moments.descent");
    gr2r::GdConfig gd;
    gr2r::ImageTensor z = gr2r::maxent_sample(spec, n_samples, gd, gd_rng);
    std::vector<double> residuals = gr2r::moment_residuals(z, spec);

    std::ostringstream out;
    out << "{\n  \"residuals\": [";
    for (std::size_t i = 0; i < residuals.size(); ++i) {
        out << (i ? ", " : "") << gr2r::format_double(residuals[i]);
    }
    out << "],\n  \"targets\": [";
    for (std::size_t i = 0; i < spec.moments.size(); ++i) {
        out << (i ? ", " : "") << gr2r::format_double(spec.moments[i]);
    }
    out << "],\n  \"tau\": " << gr2r::format_double(tau) << "\n}\n";
    write_file(join_path(args.out_dir, "moments.json"), out.str());
    std::cout << out.str();
    return kExitOk;
}

int cmd_inpaint(const GlobalArgs& args, double mask_p) {
    gr2r::RunConfig cfg = load_config(args);
    gr2r::NoiseModel model = model_from_config(cfg);
    validate_alpha(model, cfg.alpha);
    if (!(mask_p > 0.0 && mask_p <= 1.0)) throw ConfigError("mask probability must be in (0, 1]");
    ensure_out_dir(args.out_dir);

    const std::vector<std::size_t> shape = {cfg.dataset.synthetic_spec.height,
                                            cfg.dataset.synthetic_spec.width};
    gr2r::ForwardOperator op = gr2r::make_bernoulli_mask(shape, mask_p, cfg.seed + 17);
    if (op.kind() == gr2r::OperatorKind::BinaryMask) {
        write_file(join_path(args.out_dir, "mask.json"), op.mask_to_json());
    }

    gr2r::TransformGroup group;
    group.elements.push_back({gr2r::TransformKind::Identity, 0, 0, 0});
    group.elements.push_back({gr2r::TransformKind::Shift, 1, 0, 0});
    group.elements.push_back({gr2r::TransformKind::Shift, 0, 1, 0});
    group.elements.push_back({gr2r::TransformKind::FlipHorizontal, 0, 0, 0});

    // Measurement-domain training pairs: split the observed entries of y and
    // keep masked-out entries at zero by convention.
    gr2r::RandomStream rng = gr2r::RandomStream(cfg.seed).substream("inpaint.noise");
    std::vector<gr2r::TrainSample> data;
    const std::size_t n_images = 8;
    for (std::size_t i = 0; i < n_images; ++i) {
        gr2r::RandomStream image_rng = rng.substream(i);
        gr2r::ImageTensor x = clean_image(cfg, i);
        gr2r::ImageTensor y = op.apply(gr2r::sample_noisy(model, x, image_rng));
        gr2r::SplitPair pair = gr2r::split(model, y, cfg.alpha, image_rng);
        gr2r::TrainSample s;
        s.input = op.apply(pair.y1);
        s.target = op.apply(pair.y2);
        data.push_back(std::move(s));
    }
    const double alpha = cfg.alpha;
    gr2r::RandomStream ei_rng = gr2r::RandomStream(cfg.seed).substream("inpaint.ei");
    auto loss = [&](const gr2r::Estimator& f, const gr2r::TrainSample& s) {
        gr2r::SplitPair pair;
        pair.y1 = s.input;
        pair.y2 = s.target;
        pair.alpha = alpha;
        double value = gr2r::gr2r_operator_mse(op, f, pair).value;
        gr2r::ImageTensor x_hat = f.apply(s.input);
        value += gr2r::ei_loss(op, f, x_hat, group, ei_rng, /*samples=*/0).value;
        return value;
    };
    gr2r::TrainConfig tc = train_config_from(cfg);
    tc.gradient_mode = gr2r::GradientMode::FiniteDifference;
    gr2r::Estimator trained = gr2r::train_custom(estimator_from_config(cfg), loss, data, tc);
    write_file(join_path(args.out_dir, "estimator.json"), trained.serialize_json());

    // Evaluate reconstruction PSNR on held-out images.
    std::vector<gr2r::MetricsRecord> records;
    for (std::size_t i = 0; i < 4; ++i) {
        gr2r::RandomStream image_rng = rng.substream(100000 + i);
        gr2r::ImageTensor x = clean_image(cfg, 100000 + i);
        gr2r::ImageTensor y = op.apply(gr2r::sample_noisy(model, x, image_rng));
        gr2r::ImageTensor x_hat = trained.apply(y);
        gr2r::MetricsRecord rec;
        rec.run_id = "inpaint/" + std::to_string(i);
        rec.loss_name = "gr2r-operator-mse+ei";
        rec.alpha = cfg.alpha;
        rec.psnr_db = gr2r::psnr(x_hat, x);
        rec.seed = cfg.seed;
        records.push_back(rec);
    }
    write_file(join_path(args.out_dir, "metrics.jsonl"), metrics_lines(records));
    std::cout << metrics_lines(records);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Noise-splitting toolkit: self-supervised denoising experiments"};
    app.require_subcommand(1);

    GlobalArgs corrupt_args, split_args, verify_args, train_args, eval_args, sweep_args,
        moments_args, inpaint_args;
    std::string corrupt_in, split_in, estimator_path;
    std::vector<double> sweep_alphas;
    double moments_tau = 1.0, mask_p = 0.9;
    std::size_t moments_n = 100000;

    CLI::App* corrupt = app.add_subcommand("corrupt", "Sample a noisy image from a clean one");
    add_common_options(corrupt, corrupt_args, true);
    corrupt->add_option("--in", corrupt_in, "Clean input image (.pfm); synthetic if omitted");

    CLI::App* split_cmd = app.add_subcommand("split", "Split a noisy image into a pair");
    add_common_options(split_cmd, split_args, true);
    split_cmd->add_option("--in", split_in, "Noisy input image (.pfm); synthesized if omitted");

    CLI::App* verify = app.add_subcommand("verify", "Run the library invariant suite");
    add_common_options(verify, verify_args, false);

    CLI::App* train = app.add_subcommand("train", "Train the configured estimator");
    add_common_options(train, train_args, true);

    CLI::App* evaluate = app.add_subcommand("evaluate", "Evaluate a saved estimator");
    add_common_options(evaluate, eval_args, true);
    evaluate->add_option("--estimator", estimator_path, "Estimator JSON file")->required();

    CLI::App* sweep = app.add_subcommand("sweep-alpha", "Train and score across alphas");
    add_common_options(sweep, sweep_args, true);
    sweep->add_option("--alphas", sweep_alphas, "Recorruption levels to sweep")->required();

    CLI::App* moments = app.add_subcommand("moments", "Moment-match synthetic noise");
    add_common_options(moments, moments_args, false);
    moments->add_option("--tau", moments_tau, "Additive split scale");
    moments->add_option("--samples", moments_n, "Sample count");

    CLI::App* inpaint = app.add_subcommand("inpaint", "Train and score a masked recovery task");
    add_common_options(inpaint, inpaint_args, true);
    inpaint->add_option("--mask-p", mask_p, "Bernoulli mask keep probability");

    CLI11_PARSE(app, argc, argv);

    try {
        if (corrupt->parsed()) return cmd_corrupt(corrupt_args, corrupt_in);
        if (split_cmd->parsed()) return cmd_split(split_args, split_in);
        if (verify->parsed()) return cmd_verify(verify_args);
        if (train->parsed()) return cmd_train(train_args);
        if (evaluate->parsed()) return cmd_evaluate(eval_args, estimator_path);
        if (sweep->parsed()) return cmd_sweep_alpha(sweep_args, sweep_alphas);
        if (moments->parsed()) return cmd_moments(moments_args, moments_tau, moments_n);
        if (inpaint->parsed()) return cmd_inpaint(inpaint_args, mask_p);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::runtime_error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitDiverged;
    }
    return kExitOk;
}
