#include "doctest.h"

#include <algorithm>
#include <random>
#include <string>

#include "random_networks.hpp"
#include "sqznet/engine.hpp"
#include "sqznet/netlist.hpp"

using namespace sqznet;

namespace {

bool has_error(const std::vector<Diagnostic>& ds, const std::string& needle) {
    return std::any_of(ds.begin(), ds.end(), [&](const Diagnostic& d) {
        return d.severity == Diagnostic::Severity::Error &&
               d.message.find(needle) != std::string::npos;
    });
}

const Diagnostic* first_error(const std::vector<Diagnostic>& ds) {
    for (const auto& d : ds)
        if (d.severity == Diagnostic::Severity::Error)
            return &d;
    return nullptr;
}

} // namespace

TEST_CASE("a full netlist parses into the expected network") {
    const std::string text = R"(# dual-cavity test bench
param gamma = 6.2832e7
laser L { power = 1e-3, relax_freq = 900 kHz, relax_height = 30, relax_width = 50 kHz }
bs INS { ratio = 0.5 }
opa OPA1 { gamma_ic_rate = 0.15*gamma, gamma_oc_rate = 0.8*gamma,
           gamma_l_rate = 0.05*gamma, nonlinearity_rate = -0.5*gamma }
homodyne HD1 { visibility = 0.96 }
connect L.out -> INS.a
connect INS.o1 -> OPA1.seed
connect OPA1.out -> HD1.in
detect HD1
sweep freq 2.2e5 2.1e6 log 400
)";
    const ParseResult r = parse(text);
    REQUIRE(r.ok());
    const Network& net = r.doc->network;
    REQUIRE(net.components.size() == 4);
    CHECK(net.find("L")->params.at("power") == 1e-3);
    // Frequency-valued keys are stored in Hz; unit suffixes scale into Hz.
    CHECK(net.find("L")->params.at("relax_freq") == 9e5);
    CHECK(net.find("L")->params.at("relax_width") == 5e4);
    // Parameter arithmetic with previously bound names.
    CHECK(net.find("OPA1")->params.at("gamma_oc_rate") == doctest::Approx(0.8 * 6.2832e7));
    CHECK(net.find("OPA1")->params.at("nonlinearity_rate") ==
          doctest::Approx(-0.5 * 6.2832e7));
    REQUIRE(net.connections.size() == 3);
    CHECK(net.detectors == std::vector<std::string>{"HD1"});
    REQUIRE(net.sweep.has_value());
    CHECK(net.sweep->fmin_hz == 2.2e5);
    CHECK(net.sweep->fmax_hz == 2.1e6);
    CHECK(net.sweep->log);
    CHECK(net.sweep->points == 400);

    const ElaborateResult e = elaborate(*r.doc);
    REQUIRE(e.ok());
    // The unconnected cavity loss port draws a warning, not an error.
    CHECK(std::any_of(e.diagnostics.begin(), e.diagnostics.end(), [](const Diagnostic& d) {
        return d.severity == Diagnostic::Severity::Warning &&
               d.message.find("OPA1.loss") != std::string::npos;
    }));
}

TEST_CASE("connect to an undeclared component is reported at its position") {
    const std::string text = "laser L { }\nconnect L.out -> BS.a\n";
    const ParseResult r = parse(text);
    REQUIRE_FALSE(r.ok());
    const Diagnostic* d = first_error(r.diagnostics);
    REQUIRE(d != nullptr);
    CHECK(d->message == "unknown component 'BS'");
    CHECK(d->line == 2);
    CHECK(d->column == 1);
}

TEST_CASE("accepted and rejected vectors per statement kind") {
    SUBCASE("param accept") {
        const ParseResult r = parse("param x = (1+2)*3 - 4/2\nparam y = -x\n"
                                    "laser L { power = y + 8 }\nhomodyne H {}\n"
                                    "connect L.out -> H.in\ndetect H\n");
        REQUIRE(r.ok());
        CHECK(r.doc->params.at("x") == 7.0);
        CHECK(r.doc->params.at("y") == -7.0);
        CHECK(r.doc->network.find("L")->params.at("power") == 1.0);
    }
    SUBCASE("param reject: forward reference") {
        const ParseResult r = parse("param x = y + 1\nparam y = 2\n");
        REQUIRE_FALSE(r.ok());
        CHECK(has_error(r.diagnostics, "unknown parameter 'y'"));
    }
    SUBCASE("param reject: duplicate binding") {
        const ParseResult r = parse("param x = 1\nparam x = 2\n");
        REQUIRE_FALSE(r.ok());
        CHECK(has_error(r.diagnostics, "duplicate parameter 'x'"));
    }
    SUBCASE("param reject: division by zero") {
        const ParseResult r = parse("param x = 1/0\n");
        REQUIRE_FALSE(r.ok());
        CHECK(has_error(r.diagnostics, "division by zero"));
    }

    SUBCASE("component accept: empty block") {
        CHECK(parse("vacuum N { }\n").ok());
    }
    SUBCASE("component reject: unknown kind") {
        const ParseResult r = parse("resistor R { }\n");
        REQUIRE_FALSE(r.ok());
        CHECK(has_error(r.diagnostics, "unknown component kind 'resistor'"));
    }
    SUBCASE("component reject: unknown key") {
        const ParseResult r = parse("laser L { wavelength = 1064 }\n");
        REQUIRE_FALSE(r.ok());
        CHECK(has_error(r.diagnostics, "unknown parameter key 'wavelength'"));
    }
    SUBCASE("component reject: duplicate key") {
        const ParseResult r = parse("laser L { power = 1, power = 2 }\n");
        REQUIRE_FALSE(r.ok());
        CHECK(has_error(r.diagnostics, "duplicate parameter key 'power'"));
    }
    SUBCASE("component reject: duplicate name") {
        const ParseResult r = parse("laser L { }\nvacuum L { }\n");
        REQUIRE_FALSE(r.ok());
        CHECK(has_error(r.diagnostics, "duplicate component 'L'"));
    }
    SUBCASE("component reject: unit on a non-frequency key") {
        const ParseResult r = parse("loss A { efficiency = 0.9 MHz }\n");
        REQUIRE_FALSE(r.ok());
        CHECK(has_error(r.diagnostics, "not allowed for key 'efficiency'"));
    }
    SUBCASE("component accept: explicit Hz suffix is a no-op scale") {
        const ParseResult r = parse("mc M { pole = 1500 Hz }\n");
        REQUIRE(r.ok());
        CHECK(r.doc->network.find("M")->params.at("pole") == 1500.0);
    }

    SUBCASE("connect accept") {
        CHECK(parse("laser L {}\nhomodyne H {}\nconnect L.out -> H.in\ndetect H\n").ok());
    }
    SUBCASE("connect reject: invalid port") {
        const ParseResult r = parse("laser L {}\nhomodyne H {}\nconnect L.out -> H.bogus\n");
        REQUIRE_FALSE(r.ok());
        CHECK(has_error(r.diagnostics, "'bogus' is not an input port of kind 'homodyne'"));
    }
    SUBCASE("connect reject: double driver") {
        const ParseResult r = parse("laser A {}\nlaser B {}\nhomodyne H {}\n"
                                    "connect A.out -> H.in\nconnect B.out -> H.in\n");
        REQUIRE_FALSE(r.ok());
        CHECK(has_error(r.diagnostics, "more than one driver"));
    }
    SUBCASE("connect reject: non-vacuum fan-out") {
        const ParseResult r = parse("laser A {}\nhomodyne H1 {}\nhomodyne H2 {}\n"
                                    "connect A.out -> H1.in\nconnect A.out -> H2.in\n");
        REQUIRE_FALSE(r.ok());
        CHECK(has_error(r.diagnostics, "only vacuum outputs may fan out"));
    }
    SUBCASE("connect accept: vacuum fan-out") {
        CHECK(parse("vacuum N {}\nhomodyne H1 {}\nhomodyne H2 {}\n"
                    "connect N.out -> H1.in\nconnect N.out -> H2.in\n"
                    "detect H1\ndetect H2\n")
                  .ok());
    }

    SUBCASE("detect accept and reject") {
        CHECK(parse("laser L {}\nhomodyne H {}\nconnect L.out -> H.in\ndetect H\n").ok());
        const ParseResult r = parse("laser L {}\ndetect NOPE\n");
        REQUIRE_FALSE(r.ok());
        CHECK(has_error(r.diagnostics, "unknown component 'NOPE'"));
    }

    SUBCASE("sweep accept and reject") {
        CHECK(parse("sweep freq 1e3 1e6 lin 100\n").ok());
        CHECK_FALSE(parse("sweep 1e3 1e6 lin 100\n").ok());         // missing freq
        CHECK_FALSE(parse("sweep freq 1e6 1e3 log 100\n").ok());    // reversed range
        CHECK_FALSE(parse("sweep freq 1e3 1e6 log 1\n").ok());      // too few points
        CHECK_FALSE(parse("sweep freq 1e3 1e6 log 2.5\n").ok());    // non-integer
        CHECK_FALSE(parse("sweep freq 1e3 1e6 quadratic 10\n").ok());
        const ParseResult dup = parse("sweep freq 1e3 1e6 lin 10\nsweep freq 1e3 1e6 lin 10\n");
        REQUIRE_FALSE(dup.ok());
        CHECK(has_error(dup.diagnostics, "duplicate sweep declaration"));
    }
}

TEST_CASE("lexical errors carry positions and stop cleanly") {
    SUBCASE("stray byte") {
        const ParseResult r = parse("laser L { }\n@\n");
        REQUIRE_FALSE(r.ok());
        const Diagnostic* d = first_error(r.diagnostics);
        REQUIRE(d != nullptr);
        CHECK(d->line == 2);
        CHECK(d->column == 1);
    }
    SUBCASE("malformed exponent") {
        const ParseResult r = parse("param x = 2e\n");
        REQUIRE_FALSE(r.ok());
        CHECK(has_error(r.diagnostics, "malformed exponent"));
    }
    SUBCASE("literal out of range") {
        const ParseResult r = parse("param x = 1e999\n");
        REQUIRE_FALSE(r.ok());
        CHECK(has_error(r.diagnostics, "out of range"));
    }
    SUBCASE("comments run to end of line") {
        CHECK(parse("# full line\nlaser L { } # trailing\n").ok());
    }
}

TEST_CASE("elaboration errors: detectors, kinds, cycles") {
    SUBCASE("no detectors") {
        const ParseResult r = parse("laser L { }\n");
        REQUIRE(r.ok());
        const ElaborateResult e = elaborate(*r.doc);
        REQUIRE_FALSE(e.ok());
        const Diagnostic* d = first_error(e.diagnostics);
        REQUIRE(d != nullptr);
        CHECK(d->message.find("no detectors") != std::string::npos);
        CHECK(d->line == 1);
        CHECK(d->column == 1);
    }
    SUBCASE("detect on a non-homodyne component") {
        const ParseResult r = parse("laser L { }\ndetect L\n");
        REQUIRE(r.ok());
        const ElaborateResult e = elaborate(*r.doc);
        REQUIRE_FALSE(e.ok());
        const Diagnostic* d = first_error(e.diagnostics);
        REQUIRE(d != nullptr);
        CHECK(d->message.find("homodyne") != std::string::npos);
        CHECK(d->line == 2);
    }
    SUBCASE("cycle through pass-through elements") {
        const ParseResult r = parse("loss A { }\nloss B { }\nlaser L {}\nhomodyne H {}\n"
                                    "connect A.out -> B.in\nconnect B.out -> A.in\n"
                                    "connect L.out -> H.in\ndetect H\n");
        REQUIRE(r.ok());
        const ElaborateResult e = elaborate(*r.doc);
        REQUIRE_FALSE(e.ok());
        CHECK(has_error(e.diagnostics, "cycle"));
    }
}

TEST_CASE("all built-in scenarios round-trip through serialize and parse") {
    for (const ScenarioId id : all_scenarios()) {
        const Network net = scenario(id);
        const std::string text = serialize(net);
        const ElaborateResult e = load_netlist(text);
        REQUIRE_MESSAGE(e.ok(), scenario_name(id));
        CHECK_MESSAGE(network_equal(net, *e.network), scenario_name(id));
        // Serialization reaches a fixed point after one pass.
        CHECK(serialize(*e.network) == text);
    }
}

TEST_CASE("50 random networks round-trip with exact parameter values") {
    std::mt19937 gen(20260825);
    testutil::RandomNetOptions opt;
    opt.classical = true;
    opt.sweeps = true;
    for (int i = 0; i < 50; ++i) {
        const Network net = testutil::random_network(gen, opt);
        const std::string text = serialize(net);
        const ElaborateResult e = load_netlist(text);
        REQUIRE_MESSAGE(e.ok(), "iteration " << i);
        CHECK_MESSAGE(network_equal(net, *e.network), "iteration " << i);
    }
}

TEST_CASE("serializer emits deterministic canonical ordering") {
    Network net;
    net.components.push_back({"homodyne", "Z", {}});
    net.components.push_back({"laser", "A", {{"power", 0.25}}});
    net.connections.push_back({"A", "out", "Z", "in"});
    net.detectors.push_back("Z");
    const std::string a = serialize(net);
    std::reverse(net.components.begin(), net.components.end());
    const std::string b = serialize(net);
    CHECK(a == b);
    CHECK(a.find("laser A") < a.find("homodyne Z")); // sorted by name
}

TEST_CASE("diagnostic format is line:col: severity: message") {
    Diagnostic d{Diagnostic::Severity::Error, "boom", 3, 7, "tok"};
    CHECK(d.format() == "3:7: error: boom (near 'tok')");
    Diagnostic w{Diagnostic::Severity::Warning, "careful", 1, 2, ""};
    CHECK(w.format() == "1:2: warning: careful");
}

TEST_CASE("fuzzed inputs never crash and always position their diagnostics") {
    const std::string seed = serialize(scenario(ScenarioId::DualOpaMz));
    std::mt19937 gen(99);
    std::uniform_int_distribution<int> pos(0, static_cast<int>(seed.size()) - 1);
    std::uniform_int_distribution<int> byte(0, 255);
    for (int i = 0; i < 500; ++i) {
        std::string s = seed;
        const int edits = 1 + (i % 4);
        for (int e = 0; e < edits; ++e)
            s[static_cast<std::size_t>(pos(gen))] = static_cast<char>(byte(gen));
        const ParseResult r = parse(s); // must not throw
        const std::size_t lines = 1 + static_cast<std::size_t>(
                                          std::count(s.begin(), s.end(), '\n'));
        for (const auto& d : r.diagnostics) {
            CHECK(d.line >= 1);
            CHECK(d.line <= lines + 1);
            CHECK(d.column >= 1);
        }
    }
}
