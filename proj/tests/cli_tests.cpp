// End-to-end checks of the strengthlab binary: exit codes, output shapes and
// byte-level determinism across runs and thread counts.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>

#include "strengthlab/json_io.hpp"
#include <string>

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string cmd = std::string(STRENGTHLAB_BIN) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
    int status = pclose(pipe);
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {code, out};
}

nlohmann::json run_json(const std::string& args) {
    RunResult r = run(args);
    REQUIRE(r.exit_code == 0);
    return nlohmann::json::parse(r.out);
}

std::string temp_file(const std::string& name, const std::string& content) {
    std::string path = std::string("/tmp/strengthlab_test_") + name;
    std::ofstream(path) << content;
    return path;
}

}  // namespace

TEST_CASE("bias command") {
    auto j = run_json("bias --field 2 --poly \"x1*x2\"");
    CHECK(j["magnitude"].get<double>() == doctest::Approx(0.5));
    CHECK(j["mode"] == "exact");
    CHECK(j["counts"].size() == 2);

    auto lin = run_json("bias --field 3 --poly \"x1\"");
    CHECK(lin["magnitude"].get<double>() == doctest::Approx(0.0));

    auto ar = run_json("bias --field 2 --poly \"x1*x2\" --arank");
    CHECK(ar["analytic_rank"].get<double>() == doctest::Approx(2.0));
}

TEST_CASE("error exit codes") {
    RunResult zero_samples = run("bias --field 2 --poly \"x1*x2\" --mode mc --samples 0");
    CHECK(zero_samples.exit_code == 1);

    RunResult syntax = run("bias --field 2 --poly \"x1 + @\"");
    CHECK(syntax.exit_code == 1);

    RunResult budget = run("bias --field 2 --poly \"x1*x2\" --budget 2");
    CHECK(budget.exit_code == 2);

    RunResult nonprime = run("bias --field 6 --poly \"x1\"");
    CHECK(nonprime.exit_code == 1);
}

TEST_CASE("determinism across runs and thread counts") {
    std::string fam = temp_file("fam.poly", "x1*x3 + x2*x4\n");
    std::string cmd = "family search-shifts --field 2 --poly-file " + fam +
                      " --m 2 --trials 8 --seed 1";
    RunResult a = run(cmd);
    RunResult b = run(cmd);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);

    // --threads changes only the echoed threads field, never a measured number
    auto strip_threads = [](const std::string& text) {
        auto j = nlohmann::json::parse(text);
        j.erase("threads");
        return j.dump();
    };
    RunResult t1 = run("bias --field 3 --poly \"x1*x2 + x3^2\" --threads 1");
    RunResult t8 = run("bias --field 3 --poly \"x1*x2 + x3^2\" --threads 8");
    CHECK(strip_threads(t1.out) == strip_threads(t8.out));

    RunResult s1 = run("variety codim --field 3 --poly \"x1*x2\" --smax 2 --threads 1");
    RunResult s8 = run("variety codim --field 3 --poly \"x1*x2\" --smax 2 --threads 8");
    CHECK(s1.out == s8.out);
}

TEST_CASE("family commands") {
    std::string lin = temp_file("lins.poly", "x1\nx2\n");
    auto j = run_json("family rank --field 2 --family-file " + lin);
    CHECK(j["min_arank"] == "inf");

    std::string single = temp_file("one.poly", "x1\n");
    auto fib = run_json("family fibers --field 3 --family-file " + single + " --nvars 2");
    CHECK(fib["fibers"].size() == 3);
    for (auto& f : fib["fibers"]) CHECK(f["count"].get<int>() == 3);

    std::string bil = temp_file("bil.poly", "x1*x4 + x2*x5 + x3*x6\n");
    auto eq = run_json("family equidistribution --field 3 --family-file " + bil);
    CHECK(eq["satisfied"].get<bool>());
    CHECK(eq["hypothesis_rank"].get<double>() == doctest::Approx(3.0));
}

TEST_CASE("variety commands") {
    auto j = run_json("variety codim --field 2 --poly \"x1*x2 + x3*x4 + x5*x6\" --smax 2");
    CHECK(j["kappa"].get<int>() == 5);

    std::string sys = temp_file("empty.poly", "x1\nx1 + 1\n");
    RunResult csv =
        run("variety count --field 3 --family-file " + sys + " --nvars 2 --smax 2 --format csv");
    CHECK(csv.exit_code == 0);
    CHECK(csv.out.find("s,q_s,N_variety,N_singular,elapsed_ms") == 0);
    CHECK(csv.out.find("1,3,0,0,0") != std::string::npos);
    CHECK(csv.out.find("2,9,0,0,0") != std::string::npos);

    // extension counting over a non-prime base is an input error
    RunResult bad = run("variety count --field 4,1 --poly \"x1\" --smax 2");
    CHECK(bad.exit_code == 1);
}

TEST_CASE("gen command") {
    RunResult f32 = run("gen F --field 5 --n 3 --s 2");
    CHECK(f32.exit_code == 0);
    CHECK(f32.out.find("x1*x5") != std::string::npos);

    RunResult g = run("gen G --field 5 --t 2 --s 2 --degrees 2,2");
    CHECK(g.exit_code == 0);

    // sidecar file with the naming map
    RunResult with_out = run("gen F --field 5 --n 3 --s 2 --out /tmp/strengthlab_test_gen");
    CHECK(with_out.exit_code == 0);
    std::ifstream vars("/tmp/strengthlab_test_gen.vars.json");
    REQUIRE(vars.good());
    nlohmann::json sidecar;
    vars >> sidecar;
    CHECK(sidecar["kind"] == "F");
    CHECK(sidecar["variables"].size() == 6);
}

TEST_CASE("rank command emits a verifiable certificate") {
    auto j = run_json("rank prank --field 5 --poly \"x1*x2 + x3*x4\"");
    CHECK(j["prank_lower"].get<int>() == 4);
    CHECK(j["upper"].get<int>() == 4);
    CHECK(j.contains("certificate"));
}

TEST_CASE("suite command runs a single criterion") {
    RunResult r = run("suite fn2-bias");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("PASS 5 fn2-bias") != std::string::npos);
}

TEST_CASE("STRENGTHLAB_THREADS environment default") {
    RunResult r = run("bias --field 2 --poly \"x1*x2\"");
    nlohmann::json base = nlohmann::json::parse(r.out);
    CHECK(base["threads"].get<int>() == 1);

    std::string cmd = std::string("STRENGTHLAB_THREADS=8 ") + STRENGTHLAB_BIN +
                      " bias --field 2 --poly \"x1*x2\" 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
    pclose(pipe);
    nlohmann::json env = nlohmann::json::parse(out);
    CHECK(env["threads"].get<int>() == 8);
    env.erase("threads");
    base.erase("threads");
    CHECK(env == base);
}

TEST_CASE("CLI-assembled reports validate against their schemas") {
    auto load_schema = [](const std::string& name) {
        std::ifstream in(std::string(STRENGTHLAB_SCHEMA_DIR) + "/" + name);
        REQUIRE(in.good());
        nlohmann::json j;
        in >> j;
        return j;
    };
    std::string bil = temp_file("schema_bil.poly", "x1*x4 + x2*x5 + x3*x6\n");
    auto eq = run_json("family equidistribution --field 3 --family-file " + bil);
    CHECK(strengthlab::validate_against_schema(eq, load_schema("equidistribution_report.schema.json")) ==
          "");

    auto rk = run_json("rank prank --field 5 --poly \"x1*x2 + x3*x4\"");
    CHECK(strengthlab::validate_against_schema(rk, load_schema("rank_report.schema.json")) == "");

    auto gw = run_json("gowers --field 2 --poly \"x1*x2\" --d 2 --path tensor");
    CHECK(strengthlab::validate_against_schema(gw, load_schema("gowers_report.schema.json")) == "");

    std::string lins = temp_file("schema_lins.poly", "x1\nx2\n");
    auto fr = run_json("family rank --field 2 --family-file " + lins);
    CHECK(strengthlab::validate_against_schema(fr, load_schema("family_rank_report.schema.json")) == "");
}
