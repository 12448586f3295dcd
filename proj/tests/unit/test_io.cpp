#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <limits>

#include "corrbound/io.hpp"
#include "corrbound/rng.hpp"

using namespace corrbound;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no corrbound::Error thrown";
    return ErrorCode::NonFinite;
}

const char* kThreeState = R"({"n": 3, "rates": [[0, 0.7, 0.2], [0.4, 0, 1.3], [0.9, 0.1, 0]],
                              "p0": [0.6, 0.3, 0.1], "S": [-1, 0.25, 1], "T": [0.5, -0.8, 0.3]})";

} // namespace

TEST(ModelJson, ParsesRatesByColumn) {
    const Model m = parse_model_json(kThreeState);
    ASSERT_EQ(m.w.size(), 3);
    EXPECT_EQ(m.w(0, 1), 0.7);   // rate 1 -> 0
    EXPECT_EQ(m.w(2, 0), 0.9);
    EXPECT_NEAR(m.w(0, 0), -1.3, 1e-15);
    EXPECT_NEAR(m.w(1, 1), -0.8, 1e-15);
    EXPECT_NEAR(m.w.matrix().colwise().sum().cwiseAbs().maxCoeff(), 0.0, 1e-15);
    EXPECT_NEAR(m.p0[2], 0.1, 1e-16);
    EXPECT_EQ(m.s[1], 0.25);
    EXPECT_EQ(m.t[1], -0.8);
}

TEST(ModelJson, TDefaultsToS) {
    const Model m = parse_model_json(R"({"n": 2, "rates": [[0, 1], [2, 0]], "p0": [1, 0], "S": [3, -4]})");
    EXPECT_EQ(m.t.values(), m.s.values());
}

TEST(ModelJson, DiagonalIsIgnored) {
    const Model m = parse_model_json(R"({"n": 2, "rates": [[99, 1], [2, -7]], "p0": [1, 0], "S": [0, 1]})");
    EXPECT_EQ(m.w(0, 0), -2.0);
    EXPECT_EQ(m.w(1, 1), -1.0);
}

TEST(ModelJson, RejectsMalformedDocuments) {
    const char* bad[] = {
        "",
        "{\"n\": 2, \"rates\": [[0, 1], [1, 0]]",
        "[1, 2]",
        R"({"rates": [[0, 1], [1, 0]], "p0": [1, 0], "S": [0, 1]})",
        R"({"n": 2.5, "rates": [[0, 1], [1, 0]], "p0": [1, 0], "S": [0, 1]})",
        R"({"n": 0, "rates": [], "p0": [], "S": []})",
        R"({"n": 2, "rates": [[0, 1]], "p0": [1, 0], "S": [0, 1]})",
        R"({"n": 2, "rates": [[0, 1], [1]], "p0": [1, 0], "S": [0, 1]})",
        R"({"n": 2, "rates": [[0, "x"], [1, 0]], "p0": [1, 0], "S": [0, 1]})",
        R"({"n": 2, "rates": [[0, 1], [1, 0]], "p0": [1, 0, 0], "S": [0, 1]})",
        R"({"n": 2, "rates": [[0, 1], [1, 0]], "p0": [1, 0]})",
        R"({"n": 2, "rates": [[0, 1], [1, 0]], "p0": [1, 0], "S": [0, null]})",
        R"({"n": 2, "rates": [[0, 1], [1, 0]], "p0": [1, 0], "S": [0, 1], "T": [1]})",
    };
    for (const char* text : bad) EXPECT_EQ(code_of([&] { parse_model_json(text); }), ErrorCode::BadInput) << text;
}

TEST(ModelJson, RejectsInvalidContent) {
    EXPECT_EQ(code_of([] { parse_model_json(R"({"n": 2, "rates": [[0, -1], [1, 0]], "p0": [1, 0], "S": [0, 1]})"); }),
              ErrorCode::NegativeRate);
    EXPECT_EQ(code_of([] { parse_model_json(R"({"n": 2, "rates": [[0, 1], [1, 0]], "p0": [0.5, 0.6], "S": [0, 1]})"); }),
              ErrorCode::InvalidProbability);
    // Hand-written probabilities get 1e-9 of slack.
    EXPECT_NO_THROW(parse_model_json(R"({"n": 2, "rates": [[0, 1], [1, 0]], "p0": [0.3333333333, 0.6666666667], "S": [0, 1]})"));
}

TEST(ModelJson, RoundTrip) {
    const Model m = parse_model_json(kThreeState);
    const Model back = parse_model_json(model_to_json(m));
    EXPECT_EQ(back.w.matrix(), m.w.matrix());
    EXPECT_LT((back.p0.values() - m.p0.values()).cwiseAbs().maxCoeff(), 4e-16);   // p0 is renormalized on each parse
    EXPECT_EQ(back.s.values(), m.s.values());
    EXPECT_EQ(back.t.values(), m.t.values());
}

TEST(ModelJson, LoadFromDisk) {
    const Model m = load_model_file(std::string(CORRBOUND_TEST_DATA) + "/three_state.json");
    EXPECT_EQ(m.w.size(), 3);
    EXPECT_EQ(code_of([] { load_model_file(std::string(CORRBOUND_TEST_DATA) + "/missing.json"); }),
              ErrorCode::BadInput);
    EXPECT_EQ(code_of([] { load_model_file(std::string(CORRBOUND_TEST_DATA) + "/malformed.json"); }),
              ErrorCode::BadInput);
}

// ---------------------------------------------------------------------------
// time grids

TEST(TimeGrid, Linear) {
    const auto g = parse_time_grid("0:10:101:lin");
    ASSERT_EQ(g.size(), 101u);
    EXPECT_EQ(g.front(), 0.0);
    EXPECT_EQ(g.back(), 10.0);
    EXPECT_NEAR(g[37], 3.7, 1e-15);
    EXPECT_EQ(parse_time_grid("2:2:1:lin"), std::vector<double>{2.0});
}

TEST(TimeGrid, Logarithmic) {
    const auto g = parse_time_grid("1e-2:10:4:log");
    ASSERT_EQ(g.size(), 4u);
    EXPECT_EQ(g.front(), 0.01);
    EXPECT_NEAR(g[1], 0.1, 1e-15);
    EXPECT_NEAR(g[2], 1.0, 1e-14);
    EXPECT_EQ(g.back(), 10.0);
    for (std::size_t i = 1; i < g.size(); ++i) EXPECT_GT(g[i], g[i - 1]);
}

TEST(TimeGrid, Errors) {
    for (const char* spec : {"", "0:1:10", "0:1:10:lin:x", "a:1:10:lin", "0:1:0:lin", "0:1:2.5:lin", "-1:1:10:lin",
                             "2:1:10:lin", "0:1:10:log", "0:1:10:cubic", "0:inf:10:lin", "0:1::lin"})
        EXPECT_EQ(code_of([&] { parse_time_grid(spec); }), ErrorCode::BadInput) << spec;
}

TEST(FormatReal, RoundTrips) {
    Xoshiro256 rng(77);
    for (int i = 0; i < 2000; ++i) {
        const double x = (rng.uniform() - 0.5) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
        EXPECT_EQ(std::strtod(format_real(x).c_str(), nullptr), x);
    }
    EXPECT_EQ(format_real(0.1), "0.10000000000000001");
    EXPECT_EQ(format_real(1.0), "1");
    EXPECT_EQ(std::strtod(format_real(std::numeric_limits<double>::denorm_min()).c_str(), nullptr),
              std::numeric_limits<double>::denorm_min());
}
