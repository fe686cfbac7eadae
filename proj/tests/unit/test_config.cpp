#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kssim/config.hpp"
#include "kssim/errors.hpp"

#include <cmath>
#include <string>

using namespace kssim;

namespace {

RunConfig parse(const std::string& text) { return config_from_document(ConfigDocument::parse_string(text)); }

std::string error_of(const std::string& text) {
    try {
        parse(text).validate();
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("document parsing") {
    const auto doc = ConfigDocument::parse_string(R"(
name = "demo"   # trailing comment
[grid]
dim = 2
extent = [1.5, 2]
"cells" = [ 10, 20 ]
[step]
dt_max = inf
[run]
comparison = false
)");
    REQUIRE(doc.sections.size() == 4);
    CHECK(doc.sections[0].name.empty());
    CHECK(std::get<std::string>(doc.sections[0].entries[0].value) == "demo");
    const auto* grid = doc.find("grid");
    REQUIRE(grid);
    CHECK(std::get<std::vector<double>>(grid->entries[1].value) == std::vector<double>{1.5, 2.0});
    CHECK(grid->entries[2].key == "cells");
    CHECK(grid->entries[2].line == 6);
    CHECK(std::isinf(std::get<double>(doc.find("step")->entries[0].value)));
    CHECK(std::get<bool>(doc.find("run")->entries[0].value) == false);
    CHECK(doc.find("nope") == nullptr);
}

TEST_CASE("document syntax errors name the line") {
    CHECK_THROWS_WITH_AS(ConfigDocument::parse_string("[grid]\ndim = 1\ndim = 2\n"), doctest::Contains("line 3"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(ConfigDocument::parse_string("a = \n"), doctest::Contains("line 1"), ConfigError);
    CHECK_THROWS_AS(ConfigDocument::parse_string("[grid\n"), ConfigError);
    CHECK_THROWS_AS(ConfigDocument::parse_string("x = [1, oops]\n"), ConfigError);
    CHECK_THROWS_AS(ConfigDocument::parse_string("x = \"open\n"), ConfigError);
    CHECK_THROWS_AS(ConfigDocument::parse_string("[a]\n[a]\n"), ConfigError);
    CHECK_THROWS_AS(ConfigDocument::load("/nonexistent/kssim.toml"), ConfigError);
}

TEST_CASE("config from document") {
    const auto c = parse(R"(
name = "custom-run"
[grid]
dim = 1
extent = [4]
cells = [64]
[motility]
kind = "affine_osc"
a = 3
b = 2
[source]
kind = "log_power"
lambda = 2
alpha = 0.5
mu = 1
[initial]
kind = "gaussian"
floor = 0.1
amplitude = 3
width = 0.25
center = [2, 0]
[step]
cfl_safety = 0.5
positivity_mode = "fully_explicit"
diagnostics_stride = 7
[run]
horizon = 3
seed = 9
snapshot_times = [1, 2]
[classifier]
min_time = 1
[bounds]
tol = 0.1
)");
    CHECK(c.name == "custom-run");
    CHECK(c.grid == Grid::line(4.0, 64));
    CHECK(c.motility == MotilitySpec::affine_osc(3.0, 2.0));
    CHECK(c.source == SourceSpec::log_power(2.0, 0.5, 1.0));
    CHECK(c.initial.level == 0.1);
    CHECK(c.initial.width == 0.25);
    CHECK(c.step.cfl_safety == 0.5);
    CHECK(c.step.positivity_mode == PositivityMode::FullyExplicit);
    CHECK(c.step.diagnostics_stride == 7);
    CHECK(c.horizon == 3.0);
    CHECK(c.seed == 9);
    CHECK(c.snapshot_times == std::vector<double>{1.0, 2.0});
    CHECK(c.classifier.min_time == 1.0);
    CHECK(c.bound_tol == 0.1);
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("semantic errors") {
    CHECK(error_of("[bogus]\n").find("[bogus]") != std::string::npos);
    CHECK(error_of("[grid]\ncolor = 1\n").find("color") != std::string::npos);
    CHECK(error_of("[motility]\nkind = \"wavy\"\n").find("motility.kind") != std::string::npos);
    CHECK(error_of("[grid]\ndim = 3\n").find("grid.dim") != std::string::npos);
    CHECK(error_of("[grid]\ndim = 2\nextent = [1]\ncells = [8, 8]\n").find("grid.extent") != std::string::npos);
    CHECK(error_of("[run]\nhorizon = -1\n").find("run.horizon") != std::string::npos);
    CHECK(error_of("[run]\nsnapshot_times = [2, 1]\n").find("snapshot_times") != std::string::npos);
    CHECK(error_of("[step]\npositivity_mode = \"maybe\"\n").find("positivity_mode") != std::string::npos);
    CHECK(error_of("[grid]\ndim = \"one\"\n").find("grid.dim") != std::string::npos);
    CHECK(error_of("[preset]\nname = \"nope\"\n").find("nope") != std::string::npos);
    CHECK(error_of("[sweep]\nmax_runs = 2\n\"initial.mass\" = [1, 2, 3]\n").find("max_runs") != std::string::npos);
    CHECK(error_of("[sweep]\n\"initial.colour\" = [1]\n").find("initial.colour") != std::string::npos);
    CHECK(error_of("[sweep]\n\"motility.a\" = [1]\n").find("motility.a") != std::string::npos);
    CHECK(error_of("[grid]\ndim = 1\nextent = [1]\ncells = [2]\n").find("grid") != std::string::npos);
}

TEST_CASE("mass rescales the initial condition") {
    auto c = parse("[grid]\ndim = 1\nextent = [4]\ncells = [400]\n[initial]\nkind = \"constant\"\nlevel = 1\nmass = 6\n");
    CHECK(c.resolved_initial().level == doctest::Approx(1.5));

    c = parse(R"(
[grid]
dim = 2
extent = [16, 16]
cells = [64, 64]
[initial]
kind = "gaussian"
floor = 0.5
width = 1
center = [0, 0]
mass = 200
)");
    const auto ic = c.resolved_initial();
    // Quarter Gaussian at the corner: amplitude × 2π w² / 4, plus the floor's 128.
    CHECK(ic.amplitude * M_PI / 2.0 + 0.5 * 256.0 == doctest::Approx(200.0).epsilon(1e-6));
    CHECK(integrate(init_field(ic, c.grid)) == doctest::Approx(200.0).epsilon(1e-3));
    c.initial_mass = 100.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("echo round trip") {
    for (const auto& name : preset_names()) {
        RunConfig c = preset(name);
        c.sweep = {{"source.lambda", {0.0, 1.0}}, {"initial.mass", {2.5, 1.0 / 3.0}}};
        c.snapshot_times = {0.1, 1.0 / 7.0};
        const std::string echo = config_to_string(c);
        const RunConfig back = parse(echo);
        CHECK(config_to_string(back) == echo);
        CHECK(back.grid == c.grid);
        CHECK(back.motility == c.motility);
        CHECK(back.source == c.source);
        CHECK(back.snapshot_times == c.snapshot_times);
    }
}

TEST_CASE("presets") {
    const auto names = preset_names();
    for (const char* want : {"blowup2d", "suppress2d", "suppress1d", "concave1d", "nonmono1d", "boundedgamma1d"}) {
        CHECK(std::find(names.begin(), names.end(), want) != names.end());
    }
    for (const auto& n : names) {
        CHECK_NOTHROW(preset(n).validate());
        CHECK_FALSE(preset_description(n).empty());
    }
    CHECK(preset("blowup2d").source.kind == SourceSpec::Kind::Zero);
    CHECK(preset("blowup2d").grid.dim == 2);
    CHECK(preset("suppress2d").source.kind == SourceSpec::Kind::LogPower);
    CHECK(preset("concave1d").motility.kind == MotilitySpec::Kind::LogGrowth);
    CHECK(preset("nonmono1d").motility.kind == MotilitySpec::Kind::AffineOsc);
    CHECK_THROWS_AS(preset("nope"), ConfigError);

    // A preset section starts from the preset and the rest overrides it.
    const auto c = parse("[preset]\nname = \"suppress1d\"\n[run]\nhorizon = 2\n");
    CHECK(c.horizon == 2.0);
    CHECK(c.motility == preset("suppress1d").motility);
}

TEST_CASE("sweep axes") {
    RunConfig c = preset("suppress1d");
    apply_axis(c, "source.lambda", 0.0);
    CHECK(c.source.kind == SourceSpec::Kind::Zero);
    apply_axis(c, "source.lambda", 2.0);
    CHECK(c.source.kind == SourceSpec::Kind::LogPower);
    CHECK(c.source.lambda == 2.0);
    apply_axis(c, "source.mu", 0.5);
    CHECK(c.source.mu == 0.5);
    apply_axis(c, "motility.chi", 2.0);
    CHECK(c.motility.p1 == 2.0);
    apply_axis(c, "initial.mass", 3.0);
    CHECK(c.initial_mass == 3.0);
    apply_axis(c, "initial.width", 0.7);
    CHECK(c.initial.width == 0.7);
    CHECK_THROWS_AS(apply_axis(c, "grid.cells", 3.0), ConfigError);
    CHECK_THROWS_AS(apply_axis(c, "motility.b", 3.0), ConfigError);
}
