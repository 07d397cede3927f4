#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "charsum/experiments.hpp"

using namespace charsum;

namespace {

std::string write_tmp(const std::string& name, const std::string& content) {
    auto path = (std::filesystem::temp_directory_path() / name).string();
    std::ofstream f(path, std::ios::binary);
    f << content;
    return path;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("config file round trip") {
    auto path = write_tmp("charsum_cfg_rt.ini", R"(
# comment
; also a comment
[run]
seed = 99
out_dir = somewhere
format = json
threads = 3

[theorem1]
qlo = 11000
deltas = 0.1, 0.25
alpha_min = 0.7

[theorem2]
thresh = 0.8

[theorem3]
density_jmax = 3

[theorem4]
pairs = 1:1, 2:2
tol = 1e-8

[polya_check]
c_window = 25

[rmf_oracle]
kind = steinhaus
basis = sine
samples = 500

[bias_search]
qhi = 20000
)");
    ScenarioConfig cfg;
    apply_config_file(cfg, path);
    CHECK(cfg.seed == 99);
    CHECK(cfg.out_dir == "somewhere");
    CHECK(cfg.format == OutputFormat::json);
    CHECK(cfg.threads == 3);
    CHECK(cfg.t1.qlo == 11000);
    CHECK(cfg.t1.qhi == 1000000);  // untouched default
    CHECK(cfg.t1.deltas == std::vector<double>{0.1, 0.25});
    CHECK(cfg.t1.alpha_min == 0.7);
    CHECK(cfg.t2.thresh == 0.8);
    CHECK(cfg.t3.density_jmax == 3);
    REQUIRE(cfg.t4.pairs.size() == 2);
    CHECK(cfg.t4.pairs[0] == std::pair<unsigned, unsigned>{1, 1});
    CHECK(cfg.t4.pairs[1] == std::pair<unsigned, unsigned>{2, 2});
    CHECK(cfg.t4.tol == 1e-8);
    CHECK(cfg.polya.c_window == 25);
    CHECK(cfg.rmf.kind == RmfKind::steinhaus);
    CHECK(cfg.rmf.basis == Basis::sine);
    CHECK(cfg.rmf.samples == 500);
    CHECK(cfg.bias.qhi == 20000);
}

TEST_CASE("config file rejects typos and junk") {
    ScenarioConfig cfg;
    auto bad = [&](const std::string& body) {
        auto p = write_tmp("charsum_cfg_bad.ini", body);
        ScenarioConfig c;
        CHECK_THROWS_AS(apply_config_file(c, p), std::invalid_argument);
    };
    bad("[theorem1]\nbogus = 1\n");
    bad("[nosuch]\nq = 5\n");
    bad("[theorem1]\nqlo = abc\n");
    bad("[theorem1]\nqlo = -3\n");
    bad("[theorem1]\nqlo = 12x\n");
    bad("[theorem4]\npairs = 1-1\n");
    bad("[theorem4]\npairs =\n");
    bad("[rmf_oracle]\nkind = gaussian\n");
    bad("[run]\nformat = xml\n");
    bad("key_outside = 1\n[run]\n");
    bad("[run\nseed = 1\n");
    bad("[run]\nno equals sign here\n");
    CHECK_THROWS_AS(apply_config_file(cfg, "/nonexistent/charsum.ini"),
                    std::runtime_error);
}

TEST_CASE("runner config validation") {
    ScenarioConfig cfg;
    cfg.scenario = Scenario::theorem1;
    CHECK_THROWS_AS(run_theorem4(cfg), std::invalid_argument);  // wrong scenario

    cfg.t1.qlo = 15;  // below 2x
    CHECK_THROWS_AS(run_theorem1(cfg), std::invalid_argument);
    cfg.t1.qlo = 10000;
    cfg.t1.deltas = {1.5};
    CHECK_THROWS_AS(run_theorem1(cfg), std::invalid_argument);
    cfg.t1.deltas.clear();
    CHECK_THROWS_AS(run_theorem1(cfg), std::invalid_argument);

    cfg.scenario = Scenario::theorem3;
    cfg.t3.jmax = 1;
    CHECK_THROWS_AS(run_theorem3(cfg), std::invalid_argument);
    cfg.t3.jmax = 8;
    cfg.t3.ratio = 2.5;
    CHECK_THROWS_AS(run_theorem3(cfg), std::invalid_argument);

    cfg.scenario = Scenario::theorem4;
    cfg.t4.q = 40009;  // beyond the enumeration cap
    CHECK_THROWS_AS(run_theorem4(cfg), std::invalid_argument);
    cfg.t4 = {};
    cfg.t4.pairs = {{3, 2}};  // 5^5 > 1009
    CHECK_THROWS_AS(run_theorem4(cfg), std::invalid_argument);
    cfg.t4 = {};
    cfg.t4.pairs.clear();
    CHECK_THROWS_AS(run_theorem4(cfg), std::invalid_argument);
}

TEST_CASE("polya check scenario holds its calibrated bounds") {
    ScenarioConfig cfg;
    cfg.scenario = Scenario::polya_check;
    auto rep = run_polya_check(cfg);
    REQUIRE(rep.rows.size() == 4);
    CHECK(rep.rows[0].check == "window_series_sup");
    CHECK(rep.rows[1].check == "l2_tail");
    CHECK(rep.rows[2].check == "mean_abs_g");
    CHECK(rep.rows[3].check == "fourier_replacement");
    for (const auto& r : rep.rows) {
        CHECK(r.value > 0.0);
        CHECK(r.pass);
    }
    CHECK(rep.all_pass);
    const double lq = std::log(1009.0);
    CHECK(rep.rows[0].bound == Catch::Approx(20.0 * lq));
    CHECK(rep.rows[3].bound == Catch::Approx(4.0 * lq));
}

TEST_CASE("theorem4 bridge matches the rmf oracle at defaults") {
    ScenarioConfig cfg;
    cfg.scenario = Scenario::theorem4;
    auto rep = run_theorem4(cfg);
    REQUIRE(rep.rows.size() == 5);
    CHECK(rep.passed);
    for (const auto& r : rep.rows) {
        CHECK(r.discrepancy >= 0.0);
        CHECK(r.discrepancy <= 1e-9);
    }
    // the degenerate pairs vanish identically on both sides
    CHECK(rep.rows[0].empirical == 0.0);
    CHECK(rep.rows[0].target == 0.0);
    CHECK(rep.rows[1].empirical == 0.0);
    CHECK(rep.rows[2].empirical == 0.0);
    // (2,1) is a genuine nonzero check
    CHECK(rep.rows[3].empirical > 0.1);
}

TEST_CASE("theorem3 grid second moment equals the series Parseval value") {
    ScenarioConfig cfg;
    cfg.scenario = Scenario::theorem3;
    cfg.t3.q = 1009;
    cfg.t3.density_count = 2;
    auto rep = run_theorem3(cfg);

    // hist holds the real parts of the parity-matched grid samples
    double m2 = 0.0;
    for (double v : rep.hist) m2 += v * v;
    m2 /= static_cast<double>(rep.hist.size());
    const std::uint64_t H = static_cast<std::uint64_t>(1009.0 / cfg.t3.ratio);
    const double ratio = 1009.0 / static_cast<double>(H);
    double parseval = 0.0;
    for (double a : series_coefficients(ratio)) parseval += a * a;
    parseval *= 2.0 / ratio;
    CHECK(std::abs(m2 - parseval) <= 1e-9);

    // both flavors, j = 0..jmax each
    REQUIRE(rep.moments.rows.size() == 2 * (cfg.t3.jmax + 1));
    for (const auto& r : rep.moments.rows) {
        CHECK(r.discrepancy == std::abs(r.empirical - r.target));
        if (r.j == 0) CHECK(r.empirical == Catch::Approx(1.0).margin(1e-12));
    }
    CHECK(rep.moments.passed);

    REQUIRE(rep.density.size() == 2);
    std::size_t npass = 0;
    for (const auto& d : rep.density) {
        CHECK((d.flavor == "sine" || d.flavor == "cosine"));
        CHECK(d.pass == (d.worst <= cfg.t3.density_tol));
        npass += d.pass ? 1 : 0;
    }
    CHECK(rep.density_fraction ==
          static_cast<double>(npass) / static_cast<double>(rep.density.size()));
}

TEST_CASE("theorem1 scenario on a narrow range") {
    ScenarioConfig cfg;
    cfg.scenario = Scenario::theorem1;
    cfg.t1.qlo = 10000;
    cfg.t1.qhi = 10400;
    cfg.t1.candidates = 2;
    auto rep = run_theorem1(cfg);
    REQUIRE(!rep.rows.empty());
    std::size_t certs = 0;
    bool any = false;
    for (const auto& r : rep.rows) {
        CHECK(is_prime(r.ex.q));
        CHECK(r.ex.deficit >= 0.0);
        CHECK((r.gate == GateVerdict::blocked) == (r.ex.deficit <= cfg.t1.tau));
        if (r.certificate) {
            ++certs;
            CHECK(r.ex.delta == 0.5);
            CHECK(r.ex.L == cfg.t1.x);  // H = q/(2x) makes the length exactly x
            CHECK(std::abs(r.ex.alpha) == Catch::Approx(1.0));  // fully biased
        }
        any = any || (r.ex.deficit <= cfg.t1.deficit_max &&
                      r.ex.gmean <= cfg.t1.gmean_max);
    }
    CHECK(certs == 2);
    CHECK(rep.demonstrated == any);

    // alpha = 0 synthetic row reproduces the exact variance identity
    CHECK(std::abs(rep.synthetic_deficit - rep.synthetic_expected) <= 1e-6);

    REQUIRE(rep.moments.rows.size() == 5);
    CHECK(rep.moments.rows[0].empirical == 1.0);  // j = 0
    CHECK(rep.hist.size() == rep.rows[0].ex.q);
}

TEST_CASE("theorem1 empty search range reports instead of failing") {
    ScenarioConfig cfg;
    cfg.scenario = Scenario::theorem1;
    cfg.t1.qlo = 10001;
    cfg.t1.qhi = 10006;  // prime-free sliver
    auto rep = run_theorem1(cfg);
    CHECK(rep.rows.empty());
    CHECK(!rep.demonstrated);
    CHECK(rep.notice.find("no biased prime") != std::string::npos);
}

TEST_CASE("theorem2 scenario at the default prime") {
    ScenarioConfig cfg;
    cfg.scenario = Scenario::theorem2;
    cfg.t2.candidates = 2;
    auto rep = run_theorem2(cfg);
    REQUIRE(rep.rows.size() == 16);  // 2 candidates x (certificate + 7 deltas)
    for (const auto& r : rep.rows) {
        CHECK(r.ex.q == 10007);
        CHECK(r.ex.char_index >= 1);
        CHECK(r.ex.char_index <= 10005);
    }
    REQUIRE(rep.moments.rows.size() == 5);
    CHECK(rep.moments.rows[0].empirical == 1.0);  // (0,0)
    CHECK(rep.moments.rows[0].discrepancy == 0.0);
    CHECK(std::abs(rep.synthetic_deficit - rep.synthetic_expected) <= 1e-6);
}

TEST_CASE("threads do not change reported rows") {
    ScenarioConfig a, b;
    for (auto* cfg : {&a, &b}) {
        cfg->scenario = Scenario::theorem1;
        cfg->t1.qlo = 10000;
        cfg->t1.qhi = 10400;
        cfg->t1.candidates = 2;
    }
    b.threads = 4;
    auto ra = run_theorem1(a);
    auto rb = run_theorem1(b);
    REQUIRE(ra.rows.size() == rb.rows.size());
    for (std::size_t i = 0; i < ra.rows.size(); ++i) {
        CHECK(ra.rows[i].ex.q == rb.rows[i].ex.q);
        CHECK(ra.rows[i].ex.deficit == rb.rows[i].ex.deficit);
        CHECK(ra.rows[i].ex.gmean == rb.rows[i].ex.gmean);
    }
}

TEST_CASE("rmf oracle scenario passes at the degenerate default") {
    ScenarioConfig cfg;
    cfg.scenario = Scenario::rmf_oracle;
    cfg.rmf.samples = 1000;
    auto rep = run_rmf_oracle(cfg);
    CHECK(rep.exact == 0.0);  // Rademacher cosine (0,2) discrepancy vanishes
    CHECK(rep.pass);
    CHECK(rep.N == 8);
    CHECK(rep.samples == 1000);
}

TEST_CASE("bias search scenario mirrors the library search") {
    ScenarioConfig cfg;
    cfg.scenario = Scenario::bias_search;
    cfg.bias.qlo = 3;
    cfg.bias.qhi = 60;
    cfg.bias.x = 4;
    auto rep = run_bias_search(cfg);
    auto direct = biased_real_search(3, 60, 4);
    REQUIRE(rep.rows.size() == direct.size());
    for (std::size_t i = 0; i < direct.size(); ++i) {
        CHECK(rep.rows[i].q == direct[i].q);
        CHECK(rep.rows[i].bias == direct[i].bias);
    }
}

TEST_CASE("emit writes byte-identical files on rerun") {
    ScenarioConfig cfg;
    cfg.scenario = Scenario::bias_search;
    cfg.bias.qhi = 12000;
    auto rep = run_bias_search(cfg);
    auto base = std::filesystem::temp_directory_path() / "charsum_emit";
    std::filesystem::remove_all(base);
    emit(rep, OutputFormat::csv, (base / "a").string());
    emit(rep, OutputFormat::csv, (base / "b").string());
    auto sa = slurp((base / "a" / "bias_search.csv").string());
    CHECK(sa == slurp((base / "b" / "bias_search.csv").string()));
    CHECK(sa.find("q,bias\n") == 0);

    emit(rep, OutputFormat::json, (base / "a").string());
    auto doc = nlohmann::json::parse(slurp((base / "a" / "bias_search.json").string()));
    CHECK(doc["scenario"] == "bias_search");
    CHECK(doc["rows"].size() == rep.rows.size());
}

TEST_CASE("empty reports emit header-only CSV") {
    auto base = std::filesystem::temp_directory_path() / "charsum_emit_empty";
    std::filesystem::remove_all(base);

    KernelReport kr;
    kr.scenario = Scenario::theorem1;
    emit(kr, OutputFormat::csv, base.string());
    CHECK(slurp((base / "theorem1.csv").string()) ==
          "q,char_index,H,delta,L,alpha_re,alpha_im,deficit,gmean,gate,"
          "certificate\n");
    CHECK(slurp((base / "theorem1_moments.csv").string()) ==
          "j,k,flavor,empirical,target,discrepancy,M\n");
    // empty histogram still enumerates its 80 bins
    auto hist = slurp((base / "theorem1_hist.csv").string());
    CHECK(hist.find("bin_left,bin_right,count\n") == 0);
    CHECK(std::count(hist.begin(), hist.end(), '\n') == 81);

    BiasReport br;
    emit(br, OutputFormat::csv, base.string());
    CHECK(slurp((base / "bias_search.csv").string()) == "q,bias\n");
}

TEST_CASE("histogram clamps outliers into the edge bins") {
    auto bins = detail::histogram_bins({-10.0, 0.05, 10.0, 3.99});
    REQUIRE(bins.size() == 80);
    CHECK(bins.front().count == 1);
    CHECK(bins.back().count == 2);  // 10.0 clamped next to 3.99
    std::uint64_t total = 0;
    for (const auto& b : bins) total += b.count;
    CHECK(total == 4);
    CHECK(bins.front().left == -4.0);
    CHECK(bins.back().right == 4.0);
}

TEST_CASE("run_and_emit maps verdicts to exit codes") {
    auto base = std::filesystem::temp_directory_path() / "charsum_rae";
    std::filesystem::remove_all(base);

    ScenarioConfig ok;
    ok.scenario = Scenario::polya_check;
    ok.out_dir = (base / "ok").string();
    auto r1 = run_and_emit(ok);
    CHECK(r1.exit_code == 0);
    CHECK(r1.summary.find("all bounds hold") != std::string::npos);

    ScenarioConfig fail;
    fail.scenario = Scenario::bias_search;
    fail.bias.qlo = 14;
    fail.bias.qhi = 16;
    fail.out_dir = (base / "fail").string();
    auto r2 = run_and_emit(fail);
    CHECK(r2.exit_code == 3);
}
