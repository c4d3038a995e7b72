#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "gr2r/io_formats.hpp"
#include "gr2r/rng.hpp"

using namespace gr2r;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("/tmp/gr2r_test_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("image files round trip at 32-bit precision") {
    TempFile tmp("roundtrip.pfm");
    ImageTensor x = ImageTensor::zeros({5, 7});
    RandomStream rng(3);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = rng.normal();
    write_image(tmp.path, x);
    ImageTensor back = read_image(tmp.path);
    REQUIRE(back.shape == x.shape);
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(back[i] == static_cast<double>(static_cast<float>(x[i])));
    }
}

TEST_CASE("golden byte stream for a one-pixel image") {
    TempFile tmp("golden.pfm");
    ImageTensor x = ImageTensor::zeros({1, 1});
    x[0] = 0.5;
    write_image(tmp.path, x);
    std::string bytes = slurp(tmp.path);
    // 12-byte header, then 0.5f little-endian.
    const char expected[] = {'P', 'f', '\n', '1', ' ', '1', '\n', '-', '1', '.', '0', '\n',
                             '\x00', '\x00', '\x00', '\x3f'};
    REQUIRE(bytes.size() == sizeof(expected));
    CHECK(bytes == std::string(expected, sizeof(expected)));

    // Re-writing is byte-identical.
    TempFile tmp2("golden2.pfm");
    write_image(tmp2.path, x);
    CHECK(slurp(tmp2.path) == bytes);
}

TEST_CASE("big-endian payloads are byte-swapped on read") {
    TempFile tmp("bigendian.pfm");
    std::ofstream out(tmp.path, std::ios::binary);
    out << "Pf\n1 1\n1.0\n";  // positive scale = big-endian
    const char payload[] = {'\x3f', '\x00', '\x00', '\x00'};  // 0.5f big-endian
    out.write(payload, 4);
    out.close();
    ImageTensor x = read_image(tmp.path);
    CHECK(x[0] == 0.5);
}

TEST_CASE("malformed image files are rejected") {
    TempFile tmp("bad.pfm");
    {
        std::ofstream out(tmp.path, std::ios::binary);
        out << "PF\n1 1\n-1.0\n";  // color header
        out.write("\0\0\0\0\0\0\0\0\0\0\0\0", 12);
    }
    CHECK_THROWS(read_image(tmp.path));
    {
        std::ofstream out(tmp.path, std::ios::binary);
        out << "Pf\n2 2\n-1.0\n";
        out.write("\0\0\0\0", 4);  // truncated payload
    }
    CHECK_THROWS(read_image(tmp.path));
    CHECK_THROWS(read_image("/tmp/gr2r_no_such_file.pfm"));
    CHECK_THROWS(write_image("/tmp/gr2r/bad/dir.pfm", ImageTensor::zeros({2, 2})));
    CHECK_THROWS(write_image("/tmp/gr2r_flat.pfm", ImageTensor::zeros({4})));
}

TEST_CASE("psnr closed forms") {
    ImageTensor x = ImageTensor::full({10, 10}, 0.4);
    PsnrValue exact = psnr(x, x);
    CHECK(exact.infinite);

    ImageTensor off = x;
    for (std::size_t i = 0; i < off.size(); ++i) off[i] += 0.1;
    PsnrValue p = psnr(off, x, 1.0);
    CHECK(!p.infinite);
    CHECK(p.db == doctest::Approx(20.0).epsilon(1e-10));

    // 2x2 hand computation: errors (0.1, 0.2, 0, 0), mse = 0.05/4.
    ImageTensor a = ImageTensor::flat({0.1, 0.2, 0.0, 0.0});
    ImageTensor b = ImageTensor::zeros({4});
    CHECK(psnr(a, b).db == doctest::Approx(10.0 * std::log10(4.0 / 0.05)).epsilon(1e-12));

    CHECK_THROWS(psnr(a, ImageTensor::zeros({3})));
}

TEST_CASE("run config round trips and rejects unknown keys") {
    RunConfig cfg;
    cfg.family = "poisson";
    cfg.params = {0.5};
    cfg.alpha = 0.15;
    cfg.mc_rounds = 5;
    cfg.loss = "gr2r-nll";
    cfg.estimator = "affine";
    cfg.seed = 99;
    std::string text = serialize_run_config(cfg);
    RunConfig back = parse_run_config(text);
    CHECK(serialize_run_config(back) == text);
    CHECK(back.family == "poisson");
    CHECK(back.alpha == 0.15);
    CHECK(back.mc_rounds == 5);
    CHECK(back.seed == 99);

    CHECK_THROWS(parse_run_config("{\"alpa\": 0.5}"));
    CHECK_THROWS(parse_run_config("{\"train\": {\"momentum\": 0.9}}"));
    CHECK_THROWS(parse_run_config("[1,2]"));
}

TEST_CASE("metrics lines round trip including exact-recovery psnr") {
    MetricsRecord rec;
    rec.run_id = "run-1";
    rec.loss_name = "gr2r-mse";
    rec.alpha = 0.2;
    rec.psnr_db = {31.5, false};
    rec.loss_curve = {1.0, 0.5, 0.25};
    rec.seed = 7;
    rec.wall_ms = 12.5;
    MetricsRecord back = metrics_from_json_line(metrics_to_json_line(rec));
    CHECK(back.run_id == rec.run_id);
    CHECK(back.psnr_db.db == rec.psnr_db.db);
    CHECK(back.loss_curve == rec.loss_curve);

    rec.psnr_db = {0.0, true};
    std::string line = metrics_to_json_line(rec);
    CHECK(line.find("\"inf\"") != std::string::npos);
    CHECK(metrics_from_json_line(line).psnr_db.infinite);
}

TEST_CASE("sweep csv has the fixed column order") {
    std::vector<SweepRow> rows = {{0.1, "gr2r-mse", {30.0, false}, 1},
                                  {0.2, "gr2r-mse", {0.0, true}, 1}};
    std::string csv = sweep_to_csv(rows);
    CHECK(csv.find("alpha,loss_name,psnr_db,seed\n") == 0);
    CHECK(csv.find("0.2") != std::string::npos);
    CHECK(csv.find(",inf,") != std::string::npos);
}

TEST_CASE("synthetic images are deterministic and interior-valued") {
    SyntheticSpec spec;
    ImageTensor a = make_synthetic_image(spec, 5);
    ImageTensor b = make_synthetic_image(spec, 5);
    CHECK(a.data == b.data);
    CHECK(a.shape == std::vector<std::size_t>{32, 32});
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i] >= 0.1);
        CHECK(a[i] <= 0.9);
    }
    spec.kind = "gradient";
    ImageTensor g = make_synthetic_image(spec, 0);
    CHECK(g[0] == doctest::Approx(0.1));
    CHECK(g[g.size() - 1] == doctest::Approx(0.9));
    spec.kind = "noise";
    CHECK_THROWS(make_synthetic_image(spec, 0));
}
