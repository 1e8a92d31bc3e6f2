#include "ortree/model_io.hpp"
#include "ortree/report.hpp"

#include "support/patterns.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <random>
#include <sstream>

using namespace ortree;
using Catch::Matchers::ContainsSubstring;

namespace {

Tree small_tree() {
    auto d = testsupport::pattern_dataset("diam", 200, 2);
    TreeConfig c;
    c.solver.max_rules = 3;
    c.max_depth = 3;
    return grow(d, binarize_target(d, "pos"), c);
}

nlohmann::json as_json(const Model &m) {
    std::stringstream ss;
    write_model(m, ss);
    return nlohmann::json::parse(ss);
}

Model from_json(const nlohmann::json &j) {
    std::stringstream ss(j.dump());
    return read_model(ss);
}

} // namespace

TEST_CASE("tree and ensemble round trips") {
    const auto t = small_tree();
    CHECK(std::get<Tree>(from_json(as_json(t))) == t);

    std::mt19937_64 rng(8);
    auto d = testsupport::random_dataset(rng, 3);
    TreeConfig c;
    c.binarize.bin_size = 3;
    c.solver.time_limit = 5.0;
    auto e = grow_multiclass(d, c);
    const auto back = std::get<Ensemble>(from_json(as_json(e)));
    CHECK(back == e);
    CHECK(back.trees[0].config.binarize.bin_size == 3u);

    const auto kinds = model_column_kinds(e);
    CHECK(kinds.size() == d.columns.size());
    for (const auto &col : d.columns) CHECK(kinds.at(col.name) == col.kind);
}

TEST_CASE("writing twice gives identical text") {
    const auto t = small_tree();
    std::stringstream a, b;
    write_model(t, a);
    write_model(small_tree(), b);
    CHECK(a.str() == b.str());
}

TEST_CASE("version and structure errors") {
    const auto j = as_json(small_tree());
    CHECK(j.at("format") == "ortree-model");
    CHECK(j.at("version") == 1);

    auto v2 = j;
    v2["version"] = 2;
    CHECK_THROWS_WITH(from_json(v2), ContainsSubstring("unsupported model version 2"));

    auto badq = j;
    badq["tree"]["nodes"][0]["rule"] = {999};
    CHECK_THROWS_WITH(from_json(badq), ContainsSubstring("invalid question reference"));

    auto badn = j;
    badn["tree"]["nodes"][0]["yes"] = 0;
    CHECK_THROWS_WITH(from_json(badn), ContainsSubstring("invalid node reference"));

    auto badcol = j;
    badcol["tree"]["questions"][0]["column"] = "nope";
    CHECK_THROWS_AS(from_json(badcol), ModelError);

    auto missing = j;
    missing["tree"].erase("nodes");
    CHECK_THROWS_WITH(from_json(missing), ContainsSubstring("malformed model file"));

    std::stringstream junk("{not json");
    CHECK_THROWS_AS(read_model(junk), ModelError);
    CHECK_THROWS_AS(load_model("/nonexistent/model.json"), ModelError);
}

TEST_CASE("summary, confusion and dot output") {
    const auto t = small_tree();
    std::ostringstream s;
    print_summary(t, s);
    const auto text = s.str();
    CHECK(text.find("positive 'pos', negative 'neg'") != std::string::npos);
    CHECK(text.find("Node 0 [") != std::string::npos);
    CHECK(text.find("cover=100.00%") != std::string::npos);
    CHECK(text.find("(leaf)") != std::string::npos);
    CHECK(text.find(" -> node 1, else node ") != std::string::npos);

    std::ostringstream c;
    print_confusion(confusion_accuracy({"a", "b"}, {"a", "a"}), c);
    CHECK(c.str().find("Accuracy: 0.5000 (2 cases)") != std::string::npos);

    std::ostringstream g;
    write_dot(t, g);
    CHECK(g.str().rfind("digraph tree {", 0) == 0);
    CHECK(g.str().find("n0 -> n1 [label=\"yes\"]") != std::string::npos);
    CHECK(g.str().find("style=dashed") != std::string::npos);

    const auto &root = t.root();
    REQUIRE_FALSE(root.is_leaf());
    const auto rule = rule_text(t, root);
    CHECK(rule.find(t.questions[root.rule[0]].describe()) == 0);
    if (root.rule.size() > 1) CHECK(rule.find(" OR ") != std::string::npos);
}
