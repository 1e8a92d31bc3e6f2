#include "ortree/metrics.hpp"
#include "ortree/model_io.hpp"

#include "support/patterns.hpp"
#include "support/tictactoe.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <sys/wait.h>

using namespace ortree;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

fs::path work_dir() {
    auto dir = fs::temp_directory_path() / "ortree_cli_test";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path &p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Run cli(const std::string &args) {
    const auto err = work_dir() / "stderr.txt";
    const std::string cmd = std::string("\"") + ORTREE_CLI + "\" " + args + " 2>\"" + err.string() + "\"";
    FILE *pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe);
    Run r;
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = slurp(err);
    return r;
}

std::string write_data(const std::string &name, const Dataset &d) {
    const auto p = (work_dir() / name).string();
    std::ofstream f(p);
    write_csv(d, f);
    return p;
}

std::vector<std::string> lines(const std::string &s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string l;
    while (std::getline(in, l)) out.push_back(l);
    return out;
}

} // namespace

TEST_CASE("exit codes") {
    CHECK(cli("--help").code == 0);
    auto bad = cli("train --no-such-flag x.csv");
    CHECK(bad.code == 2);
    auto none = cli("");
    CHECK(none.code == 2);
    auto missing = cli("train /nonexistent/file.csv --target y");
    CHECK(missing.code == 1);
    CHECK(missing.err.find("error:") != std::string::npos);
}

TEST_CASE("train then predict reproduces the library predictions") {
    auto d = testsupport::pattern_dataset("circ", 300, 12);
    const auto data = write_data("circ.csv", d);
    const auto model = (work_dir() / "circ.json").string();
    auto tr = cli("train " + data + " --target class --max-rules 2 -m " + model);
    REQUIRE(tr.code == 0);
    CHECK(tr.out.find("Node 0") != std::string::npos);
    CHECK(tr.out.find("Accuracy: ") != std::string::npos);
    CHECK(tr.out.find("Training time: ") != std::string::npos);

    const auto m = load_model(model);
    const auto &t = std::get<Tree>(m);
    CHECK(t.positive_label == "pos");
    CHECK(t.config.solver.max_rules == 2);

    auto pr = cli("predict " + data + " -m " + model + " --type both");
    REQUIRE(pr.code == 0);
    const auto got = lines(pr.out);
    REQUIRE(got.size() == d.n + 1);
    CHECK(got[0] == "label,score");
    const auto want = predict_all(t, d);
    for (std::size_t i = 0; i < d.n; ++i) CHECK(got[i + 1] == want[i].label + "," + format_number(want[i].score));

    auto ev = cli("evaluate " + data + " -m " + model + " --target class --roc-csv " +
                  (work_dir() / "roc.csv").string());
    REQUIRE(ev.code == 0);
    CHECK(ev.out.find("AUC: ") != std::string::npos);
    CHECK(fs::exists(work_dir() / "roc.csv"));
}

TEST_CASE("prediction input without a model column names it") {
    auto d = testsupport::pattern_dataset("obli", 200, 1);
    const auto data = write_data("obli.csv", d);
    const auto model = (work_dir() / "obli.json").string();
    REQUIRE(cli("train " + data + " --target class -m " + model).code == 0);
    std::ofstream f(work_dir() / "only_x1.csv");
    f << "x1\n0.5\n0.25\n";
    f.close();
    auto r = cli("predict " + (work_dir() / "only_x1.csv").string() + " -m " + model);
    CHECK(r.code == 1);
    CHECK(r.err.find("'x2'") != std::string::npos);
}

TEST_CASE("three classes give a three-tree model") {
    std::mt19937_64 rng(21);
    auto d = testsupport::random_dataset(rng, 3);
    const auto data = write_data("three.csv", d);
    const auto model = (work_dir() / "three.json").string();
    REQUIRE(cli("train " + data + " --target y -m " + model).code == 0);
    const auto m = load_model(model);
    REQUIRE(std::holds_alternative<Ensemble>(m));
    CHECK(std::get<Ensemble>(m).trees.size() == 3);
    auto pr = cli("predict " + data + " -m " + model + " --type class");
    REQUIRE(pr.code == 0);
    for (const auto &l : lines(pr.out)) CHECK((l == "label" || l == "c0" || l == "c1" || l == "c2"));
}

TEST_CASE("experiment output is deterministic") {
    auto d = testsupport::pattern_dataset("grid", 100, 2);
    const auto data = write_data("grid100.csv", d);
    auto a = cli("experiment " + data + " --target class --reps 1 --seed 7");
    auto b = cli("experiment " + data + " --target class --reps 1 --seed 7");
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    const auto rows = lines(a.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1].rfind("1,70,30,", 0) == 0);
}

TEST_CASE("solve and export-lp on a dl85 matrix") {
    const auto B = testsupport::tictactoe_matrix();
    const auto path = (work_dir() / "ttt.txt").string();
    {
        std::ofstream f(path);
        for (std::size_t i = 0; i < B.n; ++i) {
            f << int(B.y[i]);
            for (std::size_t k = 0; k < B.m(); ++k) f << ' ' << int(B.at(i, k));
            f << '\n';
        }
    }
    auto s = cli("solve " + path + " --format dl85 --max-rules 2 --node-size 1");
    REQUIRE(s.code == 0);
    CHECK(s.out.find("objective: 95336\n") != std::string::npos);
    CHECK(s.out.find("evaluations: 378\n") != std::string::npos);
    CHECK(s.out.find("indices: 13\n") != std::string::npos);

    const auto lp = (work_dir() / "ttt.lp").string();
    auto e = cli("export-lp " + path + " --format dl85 --model error -o " + lp);
    REQUIRE(e.code == 0);
    CHECK(slurp(lp).rfind("\\ error split model", 0) == 0);
    auto refused = cli("export-lp " + path + " --format dl85 --max-pairs 10");
    CHECK(refused.code == 1);
}

TEST_CASE("binarize writes the question matrix") {
    auto d = testsupport::pattern_dataset("diam", 100, 3);
    const auto data = write_data("diam.csv", d);
    auto r = cli("binarize " + data + " --target class");
    REQUIRE(r.code == 0);
    const auto rows = lines(r.out);
    REQUIRE(rows.size() == 101);
    CHECK(rows[0].rfind("q0:x", 0) == 0);
}
