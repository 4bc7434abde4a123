#include "commands.hpp"
#include "purify/errors.hpp"
#include "purify/report.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace purify;
using namespace purify::cli;

namespace {

double num(const ResultRecord& r, std::size_t row, const std::string& col) {
    for (std::size_t i = 0; i < r.columns.size(); ++i) {
        if (r.columns[i] == col) return std::get<double>(r.rows.at(row)[i]);
    }
    throw std::out_of_range(col);
}

std::string str(const ResultRecord& r, std::size_t row, const std::string& col) {
    for (std::size_t i = 0; i < r.columns.size(); ++i) {
        if (r.columns[i] == col) return std::get<std::string>(r.rows.at(row)[i]);
    }
    throw std::out_of_range(col);
}

RunConfig config(const std::string& command, const std::string& mode = "") {
    RunConfig c;
    c.command = command;
    c.mode = mode;
    return c;
}

}  // namespace

TEST(Report, RoundTripsThroughJsonAndCsv) {
    ResultRecord r;
    r.command = "sdp sweep";
    r.params = {{"d", "2"}, {"note", "a, \"quoted\" value"}};
    r.columns = {"kind", "p", "f"};
    r.timestamp = "2026-01-01T00:00:00Z";
    r.add_row({std::string("sdp"), 0.1 + 0.2, 1.0 / 3.0});
    r.add_row({std::string("x,y"), 1e-17, -2.5e8});
    EXPECT_EQ(std::get<double>(r.rows[0][1]), 0.3);
    EXPECT_EQ(from_json(to_json(r)), r);
    EXPECT_EQ(from_csv(to_csv(r)), r);
    EXPECT_EQ(to_csv(from_json(to_json(r))), to_csv(r));
}

TEST(Report, RejectsBadRows) {
    ResultRecord r;
    r.columns = {"a"};
    EXPECT_THROW(r.add_row({std::nan("")}), InvalidArgument);
    EXPECT_THROW(r.add_row({1.0, 2.0}), InvalidArgument);
    EXPECT_THROW(from_json("{"), InvalidArgument);
}

TEST(Report, TwelveSignificantDigits) {
    EXPECT_EQ(format12(0.929865771812081), "0.929865771812");
    EXPECT_EQ(round12(2.0 / 3.0), 0.666666666667);
}

TEST(Cli, Grid) {
    const auto g = parse_grid("0.2:0.9:8");
    ASSERT_EQ(g.size(), 8u);
    EXPECT_DOUBLE_EQ(g.front(), 0.2);
    EXPECT_DOUBLE_EQ(g.back(), 0.9);
    EXPECT_THROW(parse_grid("0.2:0.9"), InvalidArgument);
    EXPECT_THROW(parse_grid("a:b:c"), InvalidArgument);
}

TEST(Cli, Analytic) {
    auto c = config("analytic");
    c.d = 2;
    c.delta = 0.3;
    c.n_max = 3;
    auto out = run(c);
    ASSERT_EQ(out.record.rows.size(), 3u);
    EXPECT_NEAR(num(out.record, 2, "p"), 0.745, 1e-12);
    EXPECT_NEAR(num(out.record, 2, "f"), 0.929866, 1e-6);
    EXPECT_NEAR(num(out.record, 2, "n_over_p"), 4.0268, 1e-4);
    c.delta = 0.0;
    c.n_max = 2;
    out = run(c);
    EXPECT_EQ(num(out.record, 1, "p"), 1.0);
    EXPECT_EQ(num(out.record, 1, "f"), 1.0);
    EXPECT_EQ(num(out.record, 1, "n_over_p"), 2.0);
    c.d = 3;
    c.delta = 0.3;
    out = run(c);
    EXPECT_NEAR(num(out.record, 1, "p"), 0.83, 1e-12);
    EXPECT_NEAR(num(out.record, 1, "f"), 0.867470, 1e-6);
    EXPECT_NEAR(num(out.record, 1, "n_over_p"), 2.4096, 1e-4);
}

TEST(Cli, SdpGoldenKeyword) {
    auto c = config("sdp", "fidelity");
    c.delta = 0.2;
    c.p = "golden";
    auto out = run(c);
    EXPECT_TRUE(out.ok);
    EXPECT_NEAR(num(out.record, 0, "f"), 0.939560, 1e-6);
    EXPECT_EQ(str(out.record, 1, "kind"), "symmetric");
    c.mode = "probability";
    c.f = "golden";
    out = run(c);
    EXPECT_NEAR(num(out.record, 0, "p"), 0.91, 1e-6);
    c.f = "high";
    EXPECT_THROW(run(c), InvalidArgument);
}

TEST(Cli, SdpSweepAmplitudeDamping) {
    auto c = config("sdp", "sweep");
    c.noise = "ad";
    c.delta = 0.4;
    c.p_grid = "0.2:0.9:8";
    const auto out = run(c);
    EXPECT_TRUE(out.ok);
    ASSERT_EQ(out.record.rows.size(), 9u);
    for (std::size_t i = 1; i < 8; ++i) {
        EXPECT_LE(num(out.record, i, "f"), num(out.record, i - 1, "f") + 1e-7);
    }
}

TEST(Cli, Certify) {
    auto c = config("certify", "golden");
    c.d = 2;
    c.delta = 0.3;
    auto out = run(c);
    EXPECT_TRUE(out.ok);
    EXPECT_EQ(str(out.record, 0, "result"), "pass");
    EXPECT_NEAR(num(out.record, 0, "s_plus"), 0.8725, 1e-10);
    EXPECT_NEAR(num(out.record, 0, "s1"), -0.1275, 1e-10);
    c.d = 4;
    c.delta_grid = "0.1:0.9:9";
    out = run(c);
    EXPECT_TRUE(out.ok);
    EXPECT_EQ(out.record.rows.size(), 9u);
    c.delta_grid.reset();
    c.delta = 0.0;
    out = run(c);
    EXPECT_TRUE(out.ok);
    EXPECT_EQ(num(out.record, 0, "f2"), 1.0);
}

TEST(Cli, Circuits) {
    auto c = config("circuit", "three");
    auto out = run(c);
    EXPECT_LT(num(out.record, 0, "residual"), 1e-12);
    EXPECT_NEAR(num(out.record, 0, "success_prob"), 0.745, 1e-10);
    EXPECT_NEAR(num(out.record, 0, "fidelity"), 0.929866, 1e-6);
    c.mode = "lcu";
    out = run(c);
    EXPECT_LT(num(out.record, 0, "residual"), 1e-10);
    EXPECT_NEAR(num(out.record, 0, "success_prob"), 0.8725, 1e-10);
    EXPECT_NEAR(num(out.record, 0, "fidelity"), 0.901146, 1e-6);
    c.mode = "four";
    c.train = true;
    c.restarts = 2;
    EXPECT_THROW(run(c), TrainingFailed);
    c.extended = true;
    out = run(c);
    EXPECT_LE(num(out.record, 0, "residual"), 1e-6);
}

TEST(Cli, SampleComplexityAndRecurse) {
    auto c = config("sample-complexity");
    c.f_goal = 0.92;
    auto out = run(c);
    EXPECT_EQ(num(out.record, 0, "n"), 3.0);
    EXPECT_NEAR(num(out.record, 0, "n_over_p"), 4.0268, 1e-4);
    EXPECT_NEAR(num(out.record, 0, "achieved_f"), 0.929866, 1e-6);

    auto r = config("recurse");
    r.d = 3;
    r.n = {3};
    r.depth = 0;
    out = run(r);
    ASSERT_EQ(out.record.rows.size(), 1u);
    EXPECT_NEAR(num(out.record, 0, "fidelity"), 0.8, 1e-12);
    r.n = {2};
    r.depth = 3;
    const auto two = run(r);
    r.n = {3};
    r.depth = 2;
    const auto three = run(r);
    EXPECT_GE(num(three.record, 2, "fidelity"), num(two.record, 2, "fidelity"));
}

TEST(Cli, UnknownInputs) {
    EXPECT_THROW(run(config("nope")), InvalidArgument);
    auto c = config("sdp", "fidelity");
    c.noise = "ad";
    c.d = 3;
    c.p = "0.5";
    EXPECT_THROW(run(c), InvalidArgument);
}
