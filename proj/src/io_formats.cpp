#include "gr2r/io_formats.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "gr2r/rng.hpp"

namespace gr2r {

namespace {

using nlohmann::ordered_json;

[[noreturn]] void malformed(const std::string& what) {
    throw std::runtime_error("malformed image file: " + what);
}

float swap_endian(float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    bits = ((bits & 0xff000000u) >> 24) | ((bits & 0x00ff0000u) >> 8) |
           ((bits & 0x0000ff00u) << 8) | ((bits & 0x000000ffu) << 24);
    std::memcpy(&v, &bits, sizeof(bits));
    return v;
}

constexpr bool kHostLittle = std::endian::native == std::endian::little;

// Parse with strictness and sorted re-emission shared by config and metrics.
ordered_json parse_strict(const std::string& text) {
    ordered_json j = ordered_json::parse(text, nullptr, true);
    if (!j.is_object()) throw std::runtime_error("expected a JSON object");
    return j;
}

void reject_unknown_keys(const ordered_json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& item : j.items()) {
        if (!allowed.count(item.key())) {
            throw std::runtime_error("unknown key \"" + item.key() + "\" in " + where);
        }
    }
}

void emit(std::ostringstream& out, const ordered_json& j);

void emit_object(std::ostringstream& out, const ordered_json& j) {
    // Sorted key order for byte-determinism.
    std::map<std::string, const ordered_json*> sorted;
    for (const auto& item : j.items()) sorted[item.key()] = &item.value();
    out << '{';
    bool first = true;
    for (const auto& [key, value] : sorted) {
        if (!first) out << ',';
        first = false;
        out << ordered_json(key).dump() << ':';
        emit(out, *value);
    }
    out << '}';
}

void emit(std::ostringstream& out, const ordered_json& j) {
    if (j.is_object()) {
        emit_object(out, j);
    } else if (j.is_array()) {
        out << '[';
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) out << ',';
            emit(out, j[i]);
        }
        out << ']';
    } else if (j.is_number_float()) {
        out << format_double(j.get<double>());
    } else {
        out << j.dump();
    }
}

std::string emit_sorted(const ordered_json& j) {
    std::ostringstream out;
    emit(out, j);
    return out.str();
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

ImageTensor read_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open image file: " + path);
    std::string magic;
    in >> magic;
    if (magic == "PF") malformed("color images are not supported");
    if (magic != "Pf") malformed("bad magic \"" + magic + "\"");
    long long width = 0, height = 0;
    double scale = 0.0;
    if (!(in >> width >> height >> scale)) malformed("bad header");
    if (width <= 0 || height <= 0) malformed("non-positive dimensions");
    if (width > 1 << 20 || height > 1 << 20 ||
        static_cast<unsigned long long>(width) * static_cast<unsigned long long>(height) >
            (1ull << 28)) {
        malformed("dimension overflow");
    }
    if (scale == 0.0) malformed("zero scale");
    in.get();  // single whitespace byte after the scale line
    const std::size_t h = static_cast<std::size_t>(height);
    const std::size_t w = static_cast<std::size_t>(width);
    std::vector<float> raw(h * w);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size() * 4));
    if (static_cast<std::size_t>(in.gcount()) != raw.size() * 4) malformed("truncated payload");
    const bool file_little = scale < 0.0;
    ImageTensor out = ImageTensor::zeros({h, w});
    for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
            float v = raw[(h - 1 - r) * w + c];  // bottom-to-top row order
            if (file_little != kHostLittle) v = swap_endian(v);
            out[r * w + c] = static_cast<double>(v);
        }
    }
    return out;
}

void write_image(const std::string& path, const ImageTensor& x) {
    if (x.shape.size() != 2) throw std::invalid_argument("images must be two-dimensional");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write image file: " + path);
    const std::size_t h = x.height();
    const std::size_t w = x.width();
    out << "Pf\n" << w << " " << h << "\n-1.0\n";
    for (std::size_t r = h; r-- > 0;) {
        for (std::size_t c = 0; c < w; ++c) {
            float v = static_cast<float>(x[r * w + c]);
            if (!kHostLittle) v = swap_endian(v);
            out.write(reinterpret_cast<const char*>(&v), 4);
        }
    }
    if (!out) throw std::runtime_error("short write to image file: " + path);
}

PsnrValue psnr(const ImageTensor& x_hat, const ImageTensor& x_ref, double peak) {
    require_same_shape(x_hat, x_ref);
    if (!(peak > 0.0)) throw std::invalid_argument("peak must be positive");
    double err = squared_distance(x_hat, x_ref);
    if (err == 0.0) return {0.0, true};
    double n = static_cast<double>(x_hat.size());
    return {10.0 * std::log10(peak * peak * n / err), false};
}

RunConfig parse_run_config(const std::string& json_text) {
    ordered_json j = parse_strict(json_text);
    reject_unknown_keys(
        j, {"model", "alpha", "J", "loss", "estimator", "train", "seed", "dataset"}, "config");
    RunConfig cfg;
    if (j.contains("model")) {
        const auto& m = j.at("model");
        reject_unknown_keys(m, {"family", "params"}, "model");
        cfg.family = m.at("family").get<std::string>();
        cfg.params = m.at("params").get<std::vector<double>>();
    }
    if (j.contains("alpha")) cfg.alpha = j.at("alpha").get<double>();
    if (j.contains("J")) cfg.mc_rounds = j.at("J").get<int>();
    if (j.contains("loss")) cfg.loss = j.at("loss").get<std::string>();
    if (j.contains("estimator")) cfg.estimator = j.at("estimator").get<std::string>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("train")) {
        const auto& t = j.at("train");
        reject_unknown_keys(t, {"step_size", "epochs", "batch_size", "gradient_mode"}, "train");
        if (t.contains("step_size")) cfg.train.step_size = t.at("step_size").get<double>();
        if (t.contains("epochs")) cfg.train.epochs = t.at("epochs").get<int>();
        if (t.contains("batch_size")) cfg.train.batch_size = t.at("batch_size").get<int>();
        if (t.contains("gradient_mode")) {
            cfg.train.gradient_mode = t.at("gradient_mode").get<std::string>();
        }
    }
    if (j.contains("dataset")) {
        const auto& d = j.at("dataset");
        reject_unknown_keys(d, {"synthetic", "file_glob"}, "dataset");
        if (d.contains("file_glob")) {
            cfg.dataset.synthetic = false;
            cfg.dataset.file_glob = d.at("file_glob").get<std::string>();
        }
        if (d.contains("synthetic")) {
            const auto& s = d.at("synthetic");
            reject_unknown_keys(s, {"height", "width", "kind"}, "dataset.synthetic");
            cfg.dataset.synthetic = true;
            if (s.contains("height")) cfg.dataset.synthetic_spec.height = s.at("height").get<std::size_t>();
            if (s.contains("width")) cfg.dataset.synthetic_spec.width = s.at("width").get<std::size_t>();
            if (s.contains("kind")) cfg.dataset.synthetic_spec.kind = s.at("kind").get<std::string>();
        }
    }
    return cfg;
}

std::string serialize_run_config(const RunConfig& cfg) {
    ordered_json j;
    j["model"] = {{"family", cfg.family}, {"params", cfg.params}};
    j["alpha"] = cfg.alpha;
    j["J"] = cfg.mc_rounds;
    j["loss"] = cfg.loss;
    j["estimator"] = cfg.estimator;
    j["train"] = {{"step_size", cfg.train.step_size},
                  {"epochs", cfg.train.epochs},
                  {"batch_size", cfg.train.batch_size},
                  {"gradient_mode", cfg.train.gradient_mode}};
    j["seed"] = cfg.seed;
    if (cfg.dataset.synthetic) {
        j["dataset"] = {{"synthetic",
                         {{"height", cfg.dataset.synthetic_spec.height},
                          {"width", cfg.dataset.synthetic_spec.width},
                          {"kind", cfg.dataset.synthetic_spec.kind}}}};
    } else {
        j["dataset"] = {{"file_glob", cfg.dataset.file_glob}};
    }
    return emit_sorted(j);
}

std::string metrics_to_json_line(const MetricsRecord& rec) {
    ordered_json j;
    j["run_id"] = rec.run_id;
    j["loss_name"] = rec.loss_name;
    j["alpha"] = rec.alpha;
    if (rec.psnr_db.infinite) {
        j["psnr_db"] = "inf";
    } else {
        j["psnr_db"] = rec.psnr_db.db;
    }
    j["loss_curve"] = rec.loss_curve;
    j["seed"] = rec.seed;
    j["wall_ms"] = rec.wall_ms;
    return emit_sorted(j);
}

MetricsRecord metrics_from_json_line(const std::string& line) {
    ordered_json j = parse_strict(line);
    reject_unknown_keys(
        j, {"run_id", "loss_name", "alpha", "psnr_db", "loss_curve", "seed", "wall_ms"},
        "metrics record");
    MetricsRecord rec;
    rec.run_id = j.at("run_id").get<std::string>();
    rec.loss_name = j.at("loss_name").get<std::string>();
    rec.alpha = j.at("alpha").get<double>();
    if (j.at("psnr_db").is_string()) {
        if (j.at("psnr_db").get<std::string>() != "inf") {
            throw std::runtime_error("psnr_db must be a number or \"inf\"");
        }
        rec.psnr_db.infinite = true;
    } else {
        rec.psnr_db.db = j.at("psnr_db").get<double>();
    }
    rec.loss_curve = j.at("loss_curve").get<std::vector<double>>();
    rec.seed = j.at("seed").get<std::uint64_t>();
    rec.wall_ms = j.at("wall_ms").get<double>();
    return rec;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "alpha,loss_name,psnr_db,seed\n";
    for (const SweepRow& r : rows) {
        out << format_double(r.alpha) << ',' << r.loss_name << ','
            << (r.psnr_db.infinite ? std::string("inf") : format_double(r.psnr_db.db)) << ','
            << r.seed << '\n';
    }
    return out.str();
}

ImageTensor make_synthetic_image(const SyntheticSpec& spec, std::uint64_t seed) {
    if (spec.height == 0 || spec.width == 0) {
        throw std::invalid_argument("synthetic image dimensions must be positive");
    }
    ImageTensor x = ImageTensor::zeros({spec.height, spec.width});
    if (spec.kind == "gradient") {
        for (std::size_t r = 0; r < spec.height; ++r) {
            for (std::size_t c = 0; c < spec.width; ++c) {
                double u = spec.height > 1 ? static_cast<double>(r) / (spec.height - 1) : 0.5;
                double v = spec.width > 1 ? static_cast<double>(c) / (spec.width - 1) : 0.5;
                x[r * spec.width + c] = 0.1 + 0.8 * 0.5 * (u + v);
            }
        }
        return x;
    }
    if (spec.kind != "blocks") {
        throw std::invalid_argument("unknown synthetic image kind: " + spec.kind);
    }
    RandomStream rng(seed);
    const std::size_t block = 8;
    const std::size_t br = (spec.height + block - 1) / block;
    const std::size_t bc = (spec.width + block - 1) / block;
    std::vector<double> levels(br * bc);
    for (double& v : levels) v = 0.1 + 0.8 * rng.uniform();
    for (std::size_t r = 0; r < spec.height; ++r) {
        for (std::size_t c = 0; c < spec.width; ++c) {
            x[r * spec.width + c] = levels[(r / block) * bc + (c / block)];
        }
    }
    return x;
}

}  // namespace gr2r
