#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "frobenius/commands.hpp"
#include "oracles.hpp"

using namespace frobenius;
namespace fs = std::filesystem;

namespace {

const std::string kData = FROBENIUS_DATA_DIR;

std::string data(const std::string& name) { return kData + "/" + name; }

std::string write_temp(const std::string& name, const std::string& contents) {
    const fs::path dir = fs::temp_directory_path() / "frobenius_io_tests";
    fs::create_directories(dir);
    const fs::path p = dir / name;
    std::ofstream(p) << contents;
    return p.string();
}

struct Run {
    int code;
    std::string out;
    std::string err;
};

template <class Fn>
Run run(Fn&& fn) {
    std::ostringstream out, err;
    const int code = fn(out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST(Json, ComplexParsing) {
    EXPECT_EQ(io::parse_complex(io::json(2.5), "x"), Complex(2.5, 0.0));
    EXPECT_EQ(io::parse_complex(io::json::array({1.0, -2.0}), "x"), Complex(1.0, -2.0));
    EXPECT_THROW(io::parse_complex(io::json::array({1.0}), "x"), Error);
    EXPECT_THROW(io::parse_complex(io::json("1"), "x"), Error);
}

TEST(Json, EquationRoundTripIsBitExact) {
    oracle::Generator gen(71);
    for (int trial = 0; trial < 50; ++trial) {
        io::EquationFile f;
        f.kind = io::EquationKind::fuchsian;
        f.singular_points = gen.values(3);
        f.gammas = gen.values(3);
        f.van_vleck = gen.values(2);
        const std::string text = io::to_json(f).dump();
        EXPECT_EQ(io::parse_equation_file(io::json::parse(text)), f);
    }
    for (const char* name : {"hypergeometric.json", "heun.json", "four_points.json"}) {
        const auto f = io::parse_equation_file(io::read_json_file(data(name)));
        EXPECT_EQ(io::parse_equation_file(io::json::parse(io::to_json(f).dump())), f) << name;
        EXPECT_NO_THROW(io::build(f));
    }
}

TEST(Json, EquationSchemaErrors) {
    EXPECT_THROW(io::parse_equation_file(io::json::parse(R"({"kind": "bessel"})")), Error);
    EXPECT_THROW(io::parse_equation_file(io::json::parse(R"({"kind": "heun", "params": {"a": 2}})")), Error);
    EXPECT_THROW(io::parse_equation_file(io::json::parse(R"({"kind": "fuchsian", "gammas": []})")), Error);
    EXPECT_THROW(io::read_json_file(data("does_not_exist.json")), Error);
    const auto bad = io::parse_equation_file(io::json::parse(
        R"({"kind": "fuchsian", "singular_points": [0, 1], "gammas": [1, 1], "van_vleck": [1, 1]})"));
    EXPECT_THROW(io::build(bad), Error);
}

TEST(Json, RuleFiles) {
    const auto r = io::parse_rule_file(io::read_json_file(data("rule_span2.json")));
    EXPECT_EQ(r.span, 2);
    EXPECT_EQ(r.K(), 6);
    ASSERT_TRUE(r.phi.has_value());
    EXPECT_EQ(r.start, Complex(1.0));
    EXPECT_EQ(r.rule().mu(2, 2), Complex(0.7, 0.0));
    EXPECT_THROW(r.rule().mu(1, 7), Error);
    EXPECT_THROW(io::parse_rule_file(io::read_json_file(data("rule_corrupted.json"))), Error);
    EXPECT_THROW(io::parse_rule_file(io::json::parse(R"({"span": 1, "mu": [[1, 2], [3]]})")), Error);
    EXPECT_THROW(io::parse_rule_file(io::json::parse(R"({"span": 2, "mu": [[1, 2], [3]]})")), Error);
    EXPECT_THROW(io::parse_rule_file(io::json::parse(R"({"span": 1, "mu": [[]]})")), Error);
    EXPECT_THROW(io::parse_rule_file(io::json::parse(R"({"span": 1, "mu": [[1]], "phi": [1, 2]})")), Error);
    EXPECT_THROW(io::parse_rule_file(io::json::parse(R"({"span": 1, "mu": [[1]], "w0": 1, "v0": 1})")), Error);
}

TEST(Format, Doubles) {
    EXPECT_EQ(io::format_double(0.5), "0.5");
    EXPECT_EQ(io::format_double(-0.0), "0");
    EXPECT_EQ(io::format_double(1.0 / 3.0), "0.33333333333333331");
    EXPECT_EQ(std::stod(io::format_double(0.1 + 0.2)), 0.1 + 0.2);
    EXPECT_EQ(io::format_double(std::numeric_limits<double>::infinity()), "inf");
}

TEST(CmdAnalyze, Hypergeometric) {
    const std::string path = write_temp("hyp_analyze.json", R"({"kind": "hypergeometric", "params": {"a": 2, "b": 3, "c": 0.5}})");
    const auto r = run([&](auto& o, auto& e) { return cli::cmd_analyze(path, o, e); });
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = csv(r.out);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "point_re,point_im,rho1_re,rho1_im,rho2_re,rho2_im,classification,radius");
    EXPECT_EQ(rows[1], (std::vector<std::string>{"0", "0", "0.5", "0", "0", "0", "generic", "1"}));
    EXPECT_EQ(rows[3][0], "inf");
    EXPECT_EQ(rows[3][2], "3");
    EXPECT_EQ(rows[3][4], "2");
}

TEST(CmdAnalyze, HeunAndErrors) {
    const auto r = run([&](auto& o, auto& e) { return cli::cmd_analyze(data("heun.json"), o, e); });
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(csv(r.out).size(), 5u);
    const std::string bad = write_temp("bad.json", "{ not json");
    const auto b = run([&](auto& o, auto& e) { return cli::cmd_analyze(bad, o, e); });
    EXPECT_EQ(b.code, 1);
    EXPECT_TRUE(b.out.empty());
    EXPECT_EQ(std::count(b.err.begin(), b.err.end(), '\n'), 1);
    const std::string dup = write_temp("dup.json", R"({"kind": "fuchsian", "singular_points": [0, 0], "gammas": [1, 1], "van_vleck": []})");
    EXPECT_EQ(run([&](auto& o, auto& e) { return cli::cmd_analyze(dup, o, e); }).code, 1);
}

TEST(CmdCoeffs, HarmonicSeries) {
    const std::string path = write_temp("harm.json", R"({"kind": "hypergeometric", "params": {"a": 1, "b": 1, "c": 2}})");
    for (const char* method : {"direct", "closed"}) {
        cli::CoeffsOptions opt;
        opt.path = path;
        opt.order = 3;
        opt.method = method;
        const auto r = run([&](auto& o, auto& e) { return cli::cmd_coeffs(opt, o, e); });
        ASSERT_EQ(r.code, 0) << r.err;
        const auto rows = csv(r.out);
        ASSERT_EQ(rows.size(), 5u);
        for (int k = 0; k <= 3; ++k) EXPECT_DOUBLE_EQ(std::stod(rows[static_cast<std::size_t>(k + 1)][1]), 1.0 / (k + 1));
    }
    cli::CoeffsOptions zero;
    zero.path = path;
    zero.order = 0;
    EXPECT_EQ(run([&](auto& o, auto& e) { return cli::cmd_coeffs(zero, o, e); }).out, "k,w_re,w_im\n0,1,0\n");
}

TEST(CmdCoeffs, ResonantBranchNeedsFlag) {
    cli::CoeffsOptions opt;
    opt.path = data("hypergeometric_log.json");
    opt.branch = 2;
    opt.order = 5;
    EXPECT_EQ(run([&](auto& o, auto& e) { return cli::cmd_coeffs(opt, o, e); }).code, 2);
    opt.allow_log = true;
    const auto r = run([&](auto& o, auto& e) { return cli::cmd_coeffs(opt, o, e); });
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.err.find("log_coefficient"), std::string::npos);
    opt.branch = 3;
    EXPECT_EQ(run([&](auto& o, auto& e) { return cli::cmd_coeffs(opt, o, e); }).code, 1);
    opt.branch = 1;
    opt.method = "fast";
    EXPECT_EQ(run([&](auto& o, auto& e) { return cli::cmd_coeffs(opt, o, e); }).code, 1);
}

TEST(CmdCoeffs, MaxOrderFromEnvironment) {
    cli::CoeffsOptions opt;
    opt.path = data("hypergeometric.json");
    opt.order = 50;
    setenv("FROBENIUS_MAX_ORDER", "20", 1);
    EXPECT_EQ(run([&](auto& o, auto& e) { return cli::cmd_coeffs(opt, o, e); }).code, 1);
    unsetenv("FROBENIUS_MAX_ORDER");
    EXPECT_EQ(run([&](auto& o, auto& e) { return cli::cmd_coeffs(opt, o, e); }).code, 0);
    EXPECT_EQ(cli::max_order_from_env(), 4096);
}

TEST(CmdEval, ValuesAndDomain) {
    const std::string path = write_temp("harm_eval.json", R"({"kind": "hypergeometric", "params": {"a": 1, "b": 1, "c": 2}})");
    cli::EvalOptions opt;
    opt.path = path;
    opt.order = 80;
    opt.at = {"0.5,0", "0,0", "-0.25,0.1"};
    const auto r = run([&](auto& o, auto& e) { return cli::cmd_eval(opt, o, e); });
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = csv(r.out);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"xi_re", "xi_im", "f_re", "f_im", "tail_bound", "residual"}));
    EXPECT_NEAR(std::stod(rows[1][2]), 2.0 * std::log(2.0), 1e-14);
    EXPECT_EQ(rows[2][2], "1");
    EXPECT_LT(std::stod(rows[2][5]), 1e-15);
    EXPECT_EQ(rows[3][0], "-0.25");

    opt.at = {"1.5,0"};
    EXPECT_EQ(run([&](auto& o, auto& e) { return cli::cmd_eval(opt, o, e); }).code, 2);
    opt.force = true;
    EXPECT_EQ(run([&](auto& o, auto& e) { return cli::cmd_eval(opt, o, e); }).code, 0);
    opt.at = {"abc"};
    EXPECT_EQ(run([&](auto& o, auto& e) { return cli::cmd_eval(opt, o, e); }).code, 1);
}

TEST(CmdEval, ManyPointsKeepInputOrder) {
    cli::EvalOptions opt;
    opt.path = data("heun.json");
    opt.order = 60;
    for (int k = 0; k < 40; ++k) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3f,%.3f", 0.5 * std::cos(0.15 * k), 0.5 * std::sin(0.15 * k));
        opt.at.emplace_back(buf);
    }
    const auto a = run([&](auto& o, auto& e) { return cli::cmd_eval(opt, o, e); });
    const auto b = run([&](auto& o, auto& e) { return cli::cmd_eval(opt, o, e); });
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    const auto rows = csv(a.out);
    for (std::size_t k = 0; k < opt.at.size(); ++k) {
        const std::string& in = opt.at[k];
        const std::size_t comma = in.find(',');
        EXPECT_EQ(rows[k + 1][0], io::format_double(std::stod(in.substr(0, comma))));
        EXPECT_EQ(rows[k + 1][1], io::format_double(std::stod(in.substr(comma + 1))));
    }
}

TEST(CmdVerify, SampleFiles) {
    for (const char* name : {"hypergeometric.json", "heun.json", "four_points.json", "hypergeometric_log.json", "rule_span2.json"}) {
        cli::VerifyOptions opt;
        opt.path = data(name);
        const auto r = run([&](auto& o, auto& e) { return cli::cmd_verify(opt, o, e); });
        EXPECT_EQ(r.code, 0) << name << "\n" << r.out << r.err;
        EXPECT_EQ(r.out.find("FAIL"), std::string::npos) << name;
    }
    cli::VerifyOptions corrupted;
    corrupted.path = data("rule_corrupted.json");
    EXPECT_EQ(run([&](auto& o, auto& e) { return cli::cmd_verify(corrupted, o, e); }).code, 1);
}

TEST(CmdRecurrence, MethodsAgree) {
    const auto file = io::parse_rule_file(io::read_json_file(data("rule_span2.json")));
    std::vector<std::string> outputs;
    for (const char* method : {"direct", "closed", "tensor"}) {
        cli::RecurrenceOptions opt;
        opt.path = data("rule_span2.json");
        opt.order = 2;
        opt.method = method;
        const auto r = run([&](auto& o, auto& e) { return cli::cmd_recurrence(opt, o, e); });
        ASSERT_EQ(r.code, 0) << method << r.err;
        const auto rows = csv(r.out);
        ASSERT_EQ(rows.size(), 4u);
        outputs.push_back(r.out);
        const auto rule = file.rule();
        const Complex phi1 = (*file.phi)[0], phi2 = (*file.phi)[1];
        const Complex v1 = rule.mu(1, 1) * file.start + phi1;
        const Complex want = rule.mu(1, 2) * v1 + rule.mu(2, 2) * file.start + phi2;
        EXPECT_LT(std::abs(Complex(std::stod(rows[3][1]), std::stod(rows[3][2])) - want), 1e-15) << method;
    }
    EXPECT_EQ(outputs[0], outputs[1]);
}

TEST(CmdRecurrence, Limits) {
    const std::string big = [] {
        std::string row = "[";
        for (int k = 0; k < 20; ++k) row += std::string(k ? "," : "") + "[0.5, 0.1]";
        row += "]";
        return write_temp("big_rule.json", "{\"span\": 1, \"mu\": [" + row + "]}");
    }();
    cli::RecurrenceOptions opt;
    opt.path = big;
    opt.order = 13;
    opt.method = "tensor";
    EXPECT_EQ(run([&](auto& o, auto& e) { return cli::cmd_recurrence(opt, o, e); }).code, 1);
    opt.order = 12;
    EXPECT_EQ(run([&](auto& o, auto& e) { return cli::cmd_recurrence(opt, o, e); }).code, 0);
    opt.order = 21;
    opt.method = "closed";
    EXPECT_EQ(run([&](auto& o, auto& e) { return cli::cmd_recurrence(opt, o, e); }).code, 1);
    opt.path = data("rule_corrupted.json");
    opt.order = 2;
    EXPECT_EQ(run([&](auto& o, auto& e) { return cli::cmd_recurrence(opt, o, e); }).code, 1);
}
