#include <doctest.h>

#include "muso/config.hpp"
#include "muso/report.hpp"

using namespace muso;

TEST_CASE("config parse, override and round trip") {
    const std::string text = R"({
      "domain": {"kind": "square", "side": 1.0},
      "exponents": {
        "p": {"form": "constant", "value": 2.0},
        "q": {"form": "constant", "value": 0.0},
        "decay": {"p_infinity": 2.0, "c1": 0.5}
      },
      "quadrature": {"scheme": "midpoint", "resolution": 32, "seed": 7}
    })";
    Json doc = parse_config_text(text, "inline");
    apply_override(doc, "quadrature.resolution=64");
    apply_override(doc, "exponents.p.value=2.5");
    apply_override(doc, "norm.sobolev=true");

    CHECK(doc["quadrature"]["resolution"].get<int>() == 64);
    CHECK(doc["exponents"]["p"]["value"].get<double>() == 2.5);
    CHECK(doc["norm"]["sobolev"].get<bool>() == true);

    // serialize -> parse is the identity on the document
    const std::string dumped = dump_json17(doc);
    Json again = parse_config_text(dumped, "echo");
    CHECK(again == doc);

    auto dom = build_domain(doc);
    CHECK(dom.kind == "square");
    auto rule = build_rule(doc);
    CHECK(rule.resolution == 64);
    CHECK(rule.scheme == QuadScheme::midpoint);
    auto phi = build_phi(doc, dom);
    CHECK(phi.p(Point{0.3, 0.3}) == 2.5);
    auto decay = build_decay(doc);
    REQUIRE(decay.has_value());
    CHECK(decay->p_infinity == 2.0);
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS(parse_config_text("{oops", "x"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[1,2]", "x"), ConfigError);
    Json doc = parse_config_text(R"({"domain": {"kind": "blob"}})", "x");
    CHECK_THROWS_AS(build_domain(doc), ConfigError);
    CHECK_THROWS_AS(apply_override(doc, "novalue"), ConfigError);
    Json doc2 = parse_config_text(
        R"({"domain": {"kind": "square"}, "exponents": {"p": {"form": "constant", "value": 0.5}, "q": {"form": "constant", "value": 0.0}}})",
        "x");
    CHECK_THROWS_AS(build_phi(doc2, build_domain(doc2)), ConfigError);
    Json doc3 = parse_config_text(
        R"({"domain": {"kind": "square"}, "quadrature": {"scheme": "viaduct"}})",
        "x");
    CHECK_THROWS_AS(build_rule(doc3), ConfigError);
}

TEST_CASE("all builtin exponent forms construct") {
    Json doc = parse_config_text(R"({"domain": {"kind": "square", "side": 1.0}})",
                                 "x");
    auto dom = build_domain(doc);
    for (const char* spec : {
             R"({"form": "constant", "value": 2.0})",
             R"({"form": "affine", "a": 1.5, "bx": 0.3, "by": 0.1})",
             R"({"form": "sine", "base": 2.0, "amp": 0.4, "fx": 1.0, "fy": 1.0})",
             R"({"form": "log_bump", "base": 1.5, "amp": 1.0, "constant": 1.0, "center": [0.0, 0.0]})",
             R"({"form": "loglog_bump", "base": 0.0, "amp": 1.0, "constant": 1.0, "center": [0.0, 0.0]})",
             R"({"form": "sqrt_bump", "base": 2.0, "center": [0.5, 0.5]})",
             R"({"form": "gaussian", "base": 1.5, "amp": 0.5, "sigma": 0.3, "center": [0.5, 0.5]})",
         }) {
        const auto f = build_field(parse_config_text(spec, "form"), dom.bbox);
        for (const Point& x : box_grid(dom.bbox, 5)) {
            CHECK(f(x) >= f.inf_val - 1e-12);
            CHECK(f(x) <= f.sup_val + 1e-12);
        }
    }
}

TEST_CASE("norm function forms") {
    const auto c = build_norm_function(
        parse_config_text(R"({"form": "constant", "value": 2.0})", "x"));
    CHECK(c.value({0.1, 0.2}) == 2.0);
    REQUIRE(c.gradient.has_value());

    const auto cut = build_norm_function(parse_config_text(
        R"({"form": "cutoff", "center": [0.5, 0.5], "outer": 0.4, "inner": 0.2})",
        "x"));
    CHECK(cut.value({0.5, 0.5}) == 1.0);
    CHECK(cut.value({0.5, 0.95}) == 0.0);

    const auto ind = build_norm_function(parse_config_text(
        R"({"form": "indicator_rect", "lo": [0.0, 0.0], "hi": [0.5, 0.5]})", "x"));
    CHECK(ind.value({0.25, 0.25}) == 1.0);
    CHECK_FALSE(ind.gradient.has_value());

    CHECK_THROWS_AS(
        build_norm_function(parse_config_text(R"({"form": "what"})", "x")),
        ConfigError);
}

TEST_CASE("json17 printer reparses doubles exactly") {
    Json j;
    j["a"] = 0.1;
    j["b"] = 1.0 / 3.0;
    j["c"] = 12345678.9012345678;
    j["d"] = 1e-300;
    j["arr"] = std::vector<double>{M_PI, kE, 0.5};
    const std::string s = dump_json17(j);
    Json back = Json::parse(s);
    CHECK(back["a"].get<double>() == 0.1);
    CHECK(back["b"].get<double>() == 1.0 / 3.0);
    CHECK(back["c"].get<double>() == 12345678.9012345678);
    CHECK(back["d"].get<double>() == 1e-300);
    CHECK(back["arr"][0].get<double>() == M_PI);
    // stable bytes on repeated dumps
    CHECK(dump_json17(j) == s);
}

TEST_CASE("grid-file exponent field") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "muso_cfg_test";
    fs::create_directories(dir);
    const auto path = (dir / "p.csv").string();
    {
        std::ofstream out(path);
        for (int j = 0; j <= 4; ++j)
            for (int i = 0; i <= 4; ++i) {
                const double x = i / 4.0, y = j / 4.0;
                out << x << "," << y << "," << 1.5 + 0.5 * x * y << "\n";
            }
    }
    const auto f = fields::from_grid_csv(path);
    CHECK(f.box.dim == 2);
    CHECK(f({0.0, 0.0}) == doctest::Approx(1.5));
    CHECK(f({1.0, 1.0}) == doctest::Approx(2.0));
    // bilinear interpolation between samples
    CHECK(f({0.125, 0.0}) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(f({0.5, 0.5}) == doctest::Approx(1.5 + 0.5 * 0.25).epsilon(1e-12));
    CHECK(f.inf_val == doctest::Approx(1.5));
    CHECK(f.sup_val == doctest::Approx(2.0));
}
