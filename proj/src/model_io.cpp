#include "ortree/model_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>

namespace ortree {

using nlohmann::json;

namespace {

template <class T> json optional_json(const std::optional<T> &v) { return v ? json(*v) : json(nullptr); }

template <class T> std::optional<T> optional_from(const json &j, const char *key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<T>();
}

json config_json(const TreeConfig &c) {
    return {
        {"max_rules", c.solver.max_rules},
        {"node_size", c.solver.min_node_size},
        {"node_size_policy", to_string(c.solver.min_size_policy)},
        {"no_same_gender_children", c.solver.no_same_gender_children},
        {"objective", to_string(c.solver.objective)},
        {"time_limit", optional_json(c.solver.time_limit)},
        {"node_budget", optional_json(c.solver.node_budget)},
        {"threads", c.solver.threads},
        {"bin_size", optional_json(c.binarize.bin_size)},
        {"nseg_numeric", c.binarize.nseg_numeric},
        {"categorical_dummy_threshold", c.binarize.categorical_dummy_threshold},
        {"stop_prob", c.stop_prob},
        {"max_depth", optional_json(c.max_depth)},
        {"max_leaves", optional_json(c.max_leaves)},
    };
}

TreeConfig config_from(const json &j) {
    TreeConfig c;
    c.solver.max_rules = j.at("max_rules").get<std::size_t>();
    c.solver.min_node_size = j.at("node_size").get<std::size_t>();
    c.solver.min_size_policy = min_size_policy_from_string(j.at("node_size_policy").get<std::string>());
    c.solver.no_same_gender_children = j.at("no_same_gender_children").get<bool>();
    c.solver.objective = objective_from_string(j.at("objective").get<std::string>());
    c.solver.time_limit = optional_from<double>(j, "time_limit");
    c.solver.node_budget = optional_from<std::uint64_t>(j, "node_budget");
    c.solver.threads = j.at("threads").get<unsigned>();
    c.binarize.bin_size = optional_from<std::size_t>(j, "bin_size");
    c.binarize.nseg_numeric = j.at("nseg_numeric").get<std::size_t>();
    c.binarize.categorical_dummy_threshold = j.at("categorical_dummy_threshold").get<std::size_t>();
    c.stop_prob = j.at("stop_prob").get<double>();
    c.max_depth = optional_from<std::size_t>(j, "max_depth");
    c.max_leaves = optional_from<std::size_t>(j, "max_leaves");
    return c;
}

json tree_json(const Tree &t) {
    json cols = json::array();
    for (const auto &c : t.columns) cols.push_back({{"name", c.name}, {"kind", to_string(c.kind)}});
    json qs = json::array();
    for (const auto &q : t.questions) {
        json jq = {{"column", q.column_name}, {"op", to_string(q.op)}, {"support", q.support}};
        if (q.op == QuestionOp::In)
            jq["levels"] = q.levels;
        else
            jq["threshold"] = q.threshold;
        qs.push_back(std::move(jq));
    }
    json nodes = json::array();
    for (const auto &n : t.nodes) {
        json jn = {{"id", n.id},       {"depth", n.depth}, {"P", n.stats.P},
                   {"N", n.stats.N},   {"label", n.label}, {"prob_positive", n.prob_positive}};
        if (!n.is_leaf()) {
            jn["rule"] = n.rule;
            jn["yes"] = *n.yes;
            jn["no"] = *n.no;
            jn["delta_gini"] = n.delta_gini;
            jn["objective"] = n.objective;
            jn["evaluations"] = n.evaluations;
            jn["separable"] = n.separable;
        }
        nodes.push_back(std::move(jn));
    }
    return {{"target", t.target_name},
            {"positive_label", t.positive_label},
            {"negative_label", t.negative_label},
            {"columns", cols},
            {"config", config_json(t.config)},
            {"questions", qs},
            {"nodes", nodes}};
}

Tree tree_from(const json &j) {
    Tree t;
    t.target_name = j.at("target").get<std::string>();
    t.positive_label = j.at("positive_label").get<std::string>();
    t.negative_label = j.at("negative_label").get<std::string>();
    for (const auto &c : j.at("columns"))
        t.columns.push_back({c.at("name").get<std::string>(), column_kind_from_string(c.at("kind").get<std::string>())});
    t.config = config_from(j.at("config"));
    for (const auto &jq : j.at("questions")) {
        Question q;
        q.column_name = jq.at("column").get<std::string>();
        auto it = std::find_if(t.columns.begin(), t.columns.end(),
                               [&](const ColumnSchema &c) { return c.name == q.column_name; });
        if (it == t.columns.end()) throw ModelError("question refers to unknown column '" + q.column_name + "'");
        q.column = static_cast<std::size_t>(it - t.columns.begin());
        q.op = question_op_from_string(jq.at("op").get<std::string>());
        q.support = jq.at("support").get<std::size_t>();
        if (q.op == QuestionOp::In) {
            q.levels = jq.at("levels").get<std::vector<std::string>>();
            std::sort(q.levels.begin(), q.levels.end());
        } else {
            q.threshold = jq.at("threshold").get<double>();
        }
        t.questions.push_back(std::move(q));
    }
    for (const auto &jn : j.at("nodes")) {
        TreeNode n;
        n.id = jn.at("id").get<std::size_t>();
        n.depth = jn.at("depth").get<std::size_t>();
        n.stats = {jn.at("P").get<std::int64_t>(), jn.at("N").get<std::int64_t>()};
        n.label = jn.at("label").get<std::string>();
        n.prob_positive = jn.at("prob_positive").get<double>();
        if (jn.contains("rule")) {
            n.rule = jn.at("rule").get<std::vector<std::size_t>>();
            if (n.rule.empty()) throw ModelError("internal node with an empty rule");
            n.yes = jn.at("yes").get<std::size_t>();
            n.no = jn.at("no").get<std::size_t>();
            n.delta_gini = jn.at("delta_gini").get<double>();
            n.objective = jn.at("objective").get<std::int64_t>();
            n.evaluations = jn.at("evaluations").get<std::uint64_t>();
            n.separable = jn.at("separable").get<bool>();
        }
        t.nodes.push_back(std::move(n));
    }
    if (t.nodes.empty()) throw ModelError("model has no nodes");
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
        const auto &n = t.nodes[i];
        if (n.id != i) throw ModelError("node ids must be 0..n-1 in order");
        if (!n.is_leaf()) {
            for (auto k : n.rule)
                if (k >= t.questions.size()) throw ModelError("invalid question reference");
            // preorder storage means children come after their parent
            if (*n.yes <= i || *n.yes >= t.nodes.size() || *n.no <= i || *n.no >= t.nodes.size())
                throw ModelError("invalid node reference");
        }
    }
    return t;
}

} // namespace

void write_model(const Model &m, std::ostream &out) {
    json j = {{"format", "ortree-model"}, {"version", kModelVersion}};
    if (const auto *t = std::get_if<Tree>(&m)) {
        j["kind"] = "tree";
        j["tree"] = tree_json(*t);
    } else {
        const auto &e = std::get<Ensemble>(m);
        json trees = json::array();
        for (const auto &t : e.trees) trees.push_back(tree_json(t));
        j["kind"] = "ensemble";
        j["ensemble"] = {{"mode", to_string(e.mode)}, {"classes", e.classes}, {"trees", trees}};
    }
    out << j.dump(1) << "\n";
    if (!out) throw ModelError("failed writing model");
}

void save_model(const Model &m, const std::string &path) {
    std::ofstream f(path);
    if (!f) throw ModelError("cannot write '" + path + "'");
    write_model(m, f);
}

Model read_model(std::istream &in) {
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception &e) {
        throw ModelError(std::string("malformed model file: ") + e.what());
    }
    try {
        if (!j.is_object() || j.value("format", "") != "ortree-model") throw ModelError("not a model file");
        const int version = j.at("version").get<int>();
        if (version != kModelVersion)
            throw ModelError("unsupported model version " + std::to_string(version) + " (expected " +
                             std::to_string(kModelVersion) + ")");
        const auto kind = j.at("kind").get<std::string>();
        if (kind == "tree") return tree_from(j.at("tree"));
        if (kind != "ensemble") throw ModelError("unknown model kind '" + kind + "'");
        const auto &je = j.at("ensemble");
        Ensemble e;
        e.mode = ensemble_mode_from_string(je.at("mode").get<std::string>());
        e.classes = je.at("classes").get<std::vector<std::string>>();
        for (const auto &jt : je.at("trees")) e.trees.push_back(tree_from(jt));
        if (e.trees.empty()) throw ModelError("ensemble has no trees");
        if (e.mode == EnsembleMode::OneVsRest && e.trees.size() != e.classes.size())
            throw ModelError("one-vs-rest ensemble needs one tree per class");
        return e;
    } catch (const json::exception &e) {
        throw ModelError(std::string("malformed model file: ") + e.what());
    } catch (const std::invalid_argument &e) {
        throw ModelError(std::string("malformed model file: ") + e.what());
    }
}

Model load_model(const std::string &path) {
    std::ifstream f(path);
    if (!f) throw ModelError("cannot open '" + path + "'");
    return read_model(f);
}

std::map<std::string, ColumnKind> model_column_kinds(const Model &m) {
    std::map<std::string, ColumnKind> out;
    auto add = [&](const Tree &t) {
        for (const auto &c : t.columns) out[c.name] = c.kind;
    };
    if (const auto *t = std::get_if<Tree>(&m))
        add(*t);
    else
        for (const auto &t : std::get<Ensemble>(m).trees) add(t);
    return out;
}

} // namespace ortree
