// ortree: train, apply and inspect OR-clause decision trees.

#include "ortree/experiment.hpp"
#include "ortree/lp_export.hpp"
#include "ortree/report.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>

using namespace ortree;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataFlags {
    std::string path;
    std::string target;
    std::string positive;
    std::string delimiter = ",";
    bool drop_incomplete = false;

    void add(CLI::App *app, bool need_target) {
        app->add_option("data", path, "Input CSV file")->required();
        auto *t = app->add_option("--target", target, "Class column");
        if (need_target) t->required();
        app->add_option("--positive", positive, "Class treated as positive (default: last in sorted order)");
        app->add_option("--delimiter", delimiter, "Field delimiter (one character, or 'tab')");
        app->add_flag("--drop-incomplete", drop_incomplete, "Drop rows with missing values");
    }

    LoadOptions options() const {
        LoadOptions o;
        if (delimiter == "tab" || delimiter == "\\t")
            o.delimiter = '\t';
        else if (delimiter.size() == 1)
            o.delimiter = delimiter[0];
        else
            throw UsageError("--delimiter must be a single character");
        o.drop_incomplete = drop_incomplete;
        return o;
    }

    std::optional<std::string> positive_label() const {
        return positive.empty() ? std::nullopt : std::optional<std::string>(positive);
    }
};

struct TreeFlags {
    std::size_t max_rules = 2;
    std::size_t node_size = 0;
    std::string node_size_policy = "sqrt";
    double stop_prob = 0.95;
    std::size_t bin_size = 0;
    std::size_t nseg_numeric = 20;
    bool no_same_gender = false;
    std::size_t max_leaves = 0;
    std::size_t max_depth = 0;
    double time_limit = 0;
    unsigned threads = 1;

    void add_solver(CLI::App *app) {
        app->add_option("--max-rules", max_rules, "Maximum questions per split")->capture_default_str();
        app->add_option("--node-size", node_size, "Minimum child size (0 = dynamic)")->capture_default_str();
        app->add_option("--node-size-policy", node_size_policy, "Dynamic node size: sqrt or fourth-root")
            ->check(CLI::IsMember({"sqrt", "fourth-root"}))
            ->capture_default_str();
        app->add_flag("--no-same-gender-children", no_same_gender, "Children must differ in majority class");
        app->add_option("--time-limit", time_limit, "Seconds per split search (0 = none)");
        app->add_option("--threads", threads, "Worker threads for the split search")->capture_default_str();
    }
    void add_binarize(CLI::App *app) {
        app->add_option("--bin-size", bin_size, "Minimum question support (0 = sqrt(n)/4)");
        app->add_option("--nseg-numeric", nseg_numeric, "Thresholds per direction per numeric column")
            ->capture_default_str();
    }
    void add_tree(CLI::App *app) {
        add_solver(app);
        add_binarize(app);
        app->add_option("--stop-prob", stop_prob, "Do not split nodes at least this pure")->capture_default_str();
        app->add_option("--max-leaves", max_leaves, "Prune to at most this many leaves (0 = no limit)");
        app->add_option("--max-depth", max_depth, "Depth limit while growing (0 = none)");
    }

    SolverConfig solver() const {
        SolverConfig c;
        c.max_rules = max_rules;
        c.min_node_size = node_size;
        c.min_size_policy = min_size_policy_from_string(node_size_policy);
        c.no_same_gender_children = no_same_gender;
        if (time_limit > 0) c.time_limit = time_limit;
        c.threads = threads;
        if (max_rules < 1) throw UsageError("--max-rules must be >= 1");
        if (threads < 1) throw UsageError("--threads must be >= 1");
        if (time_limit < 0) throw UsageError("--time-limit must be >= 0");
        return c;
    }
    BinarizeConfig binarize() const {
        BinarizeConfig c;
        if (bin_size > 0) c.bin_size = bin_size;
        if (nseg_numeric < 1) throw UsageError("--nseg-numeric must be >= 1");
        c.nseg_numeric = nseg_numeric;
        return c;
    }
    TreeConfig tree() const {
        TreeConfig c;
        c.solver = solver();
        c.binarize = binarize();
        c.stop_prob = stop_prob;
        if (max_leaves > 0) c.max_leaves = max_leaves;
        if (max_depth > 0) c.max_depth = max_depth;
        if (!(stop_prob > 0.5 && stop_prob <= 1.0)) throw UsageError("--stop-prob must be in (0.5, 1]");
        if (max_leaves == 1) throw UsageError("--max-leaves must be >= 2");
        return c;
    }
};

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

// Output file or stdout.
class Sink {
public:
    explicit Sink(const std::string &path) {
        if (path.empty() || path == "-") return;
        file_ = std::make_unique<std::ofstream>(path);
        if (!*file_) throw std::runtime_error("cannot write '" + path + "'");
    }
    std::ostream &get() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

std::vector<Prediction> predict_model(const Model &m, const Dataset &d) {
    if (const auto *t = std::get_if<Tree>(&m)) return predict_all(*t, d);
    return predict_all(std::get<Ensemble>(m), d);
}

Dataset load_for_model(const Model &m, const DataFlags &df, bool with_target) {
    auto opt = df.options();
    opt.allow_missing = !df.drop_incomplete;
    for (const auto &[name, kind] : model_column_kinds(m)) opt.kind_overrides[name] = kind;
    if (with_target) return load_csv(df.path, df.target, opt);
    // A target column in the file is harmless; the model never reads it.
    return load_features(df.path, opt);
}

// Loads the 0/1 matrix used by solve and export-lp.
BinaryMatrix load_matrix(const DataFlags &df, const std::string &format) {
    if (format == "dl85") return load_dl85(df.path);
    if (df.target.empty()) throw UsageError("--target is required for CSV matrices");
    auto d = load_csv(df.path, df.target, df.options());
    const auto pos = df.positive_label().value_or(default_positive_label(d));
    return matrix_from_dataset(d, binarize_target(d, pos));
}

int cmd_train(const DataFlags &df, const TreeFlags &tf, const std::string &model_path,
              const std::string &dot_path, bool vote) {
    const auto cfg = tf.tree();
    const auto d = load_csv(df.path, df.target, df.options());
    const auto start = std::chrono::steady_clock::now();
    const Model model = train_model(d, cfg, df.positive_label(), vote);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!model_path.empty()) save_model(model, model_path);

    const auto preds = predict_model(model, d);
    std::vector<std::string> labels, actual;
    const bool binary = std::holds_alternative<Tree>(model) || std::get<Ensemble>(model).mode == EnsembleMode::Vote;
    const std::string positive = df.positive_label().value_or(default_positive_label(d));
    for (std::size_t i = 0; i < d.n; ++i) {
        labels.push_back(preds[i].label);
        if (binary)
            actual.push_back(d.target[i] == positive ? positive : negative_label_for(d, positive));
        else
            actual.push_back(d.target[i]);
    }

    if (const auto *t = std::get_if<Tree>(&model)) {
        print_summary(*t, std::cout);
        if (!dot_path.empty()) {
            Sink s(dot_path);
            write_dot(*t, s.get());
        }
    } else {
        const auto &e = std::get<Ensemble>(model);
        std::cout << to_string(e.mode) << " ensemble of " << e.trees.size() << " trees\n";
        for (std::size_t i = 0; i < e.trees.size(); ++i) {
            std::cout << "\n== tree " << i + 1 << " ==\n";
            print_summary(e.trees[i], std::cout);
        }
    }
    std::cout << "\n";
    print_confusion(confusion_accuracy(labels, actual), std::cout);
    std::cout << "Training time: " << fixed(secs, 2) << " s\n";
    return 0;
}

int cmd_predict(const DataFlags &df, const std::string &model_path, const std::string &out_path,
                const std::string &type) {
    const auto model = load_model(model_path);
    const auto d = load_for_model(model, df, false);
    const auto preds = predict_model(model, d);
    Sink sink(out_path);
    auto &out = sink.get();
    if (type == "class")
        out << "label\n";
    else if (type == "score")
        out << "score\n";
    else
        out << "label,score\n";
    for (const auto &p : preds) {
        if (type == "class")
            out << p.label << "\n";
        else if (type == "score")
            out << format_number(p.score) << "\n";
        else
            out << p.label << "," << format_number(p.score) << "\n";
    }
    return 0;
}

int cmd_evaluate(const DataFlags &df, const std::string &model_path, const std::string &roc_path) {
    const auto model = load_model(model_path);
    const auto d = load_for_model(model, df, true);
    const auto preds = predict_model(model, d);

    std::string positive, negative;
    bool binary = true;
    if (const auto *t = std::get_if<Tree>(&model)) {
        positive = t->positive_label;
        negative = t->negative_label;
    } else {
        const auto &e = std::get<Ensemble>(model);
        binary = e.mode == EnsembleMode::Vote;
        positive = e.trees.front().positive_label;
        negative = e.trees.front().negative_label;
    }
    std::vector<std::string> labels, actual;
    std::vector<double> scores;
    std::vector<std::uint8_t> y;
    for (std::size_t i = 0; i < d.n; ++i) {
        labels.push_back(preds[i].label);
        scores.push_back(preds[i].score);
        if (binary) {
            y.push_back(d.target[i] == positive);
            actual.push_back(y.back() ? positive : negative);
        } else {
            actual.push_back(d.target[i]);
        }
    }
    const auto conf = confusion_accuracy(labels, actual);
    std::cout << "Accuracy: " << fixed(conf.accuracy, 4) << "\n";
    const auto npos = std::count(y.begin(), y.end(), std::uint8_t{1});
    if (binary && npos > 0 && npos < static_cast<std::ptrdiff_t>(y.size())) {
        const auto roc = roc_auc(scores, y);
        std::cout << "AUC: " << fixed(roc.auc, 4) << "\n";
        if (!roc_path.empty()) {
            Sink s(roc_path);
            s.get() << "fpr,tpr\n";
            for (const auto &[f, t] : roc.points) s.get() << format_number(f) << "," << format_number(t) << "\n";
        }
    } else {
        std::cout << "AUC: NA\n";
    }
    print_confusion(conf, std::cout);
    return 0;
}

int cmd_experiment(const DataFlags &df, const TreeFlags &tf, std::size_t reps, std::uint64_t seed,
                   double fraction, bool vote, bool timing) {
    ExperimentConfig cfg;
    cfg.tree = tf.tree();
    cfg.reps = reps;
    cfg.seed = seed;
    cfg.fraction = fraction;
    cfg.positive_label = df.positive_label();
    cfg.vote = vote;
    cfg.timing = timing;
    if (reps < 1) throw UsageError("--reps must be >= 1");
    if (!(fraction > 0 && fraction < 1)) throw UsageError("--fraction must be in (0, 1)");
    const auto d = load_csv(df.path, df.target, df.options());
    print_report(run_experiment(d, cfg), std::cout);
    return 0;
}

int cmd_solve(const DataFlags &df, const TreeFlags &tf, const std::string &format, const std::string &objective,
              bool brute) {
    auto cfg = tf.solver();
    cfg.objective = objective_from_string(objective);
    const auto B = load_matrix(df, format);
    const auto s = NodeStats::of(B);
    const auto r = brute ? brute_force_solve(B, s, cfg) : enum_solve(B, s, cfg);
    const auto worst = worst_case_evals(B.m(), cfg.max_rules);
    std::cout << "n: " << B.n << "  m: " << B.m() << "  P: " << s.P << "  N: " << s.N << "\n";
    std::cout << "max_rules: " << cfg.max_rules << "  min_node_size: " << cfg.effective_min_node_size(B.n) << "\n";
    if (!r.feasible) {
        std::cout << "status: infeasible\n";
    } else {
        std::cout << "status: " << (r.optimal ? "optimal" : "stopped early") << "\n";
        std::cout << "objective: " << r.objective << "\n";
        std::cout << "rule: ";
        for (std::size_t i = 0; i < r.best.indices.size(); ++i)
            std::cout << (i ? " | " : "") << B.questions[r.best.indices[i]].column_name;
        std::cout << "\n";
        std::cout << "indices:";
        for (auto k : r.best.indices) std::cout << " " << k;
        std::cout << "\n";
        std::cout << "TP: " << r.best_eval.TP << "  FP: " << r.best_eval.FP << "  TN: " << r.best_eval.TN
                  << "  FN: " << r.best_eval.FN << "\n";
        if (r.best_eval.z_sum > 0 && r.best_eval.z_sum < s.n())
            std::cout << "delta_gini: " << fixed(delta_gini(s, r.best_eval), 6) << "\n";
    }
    std::cout << "evaluations: " << r.evaluations << "\n";
    std::cout << "worst_case: " << (worst >= kEvalSaturation ? ">= 2^63" : std::to_string(worst)) << "\n";
    std::cout << "pct_of_worst: " << fixed(100.0 * static_cast<double>(r.evaluations) / static_cast<double>(worst), 1)
              << "%\n";
    std::cout << "seconds: " << fixed(r.seconds, 3) << "\n";
    return r.feasible ? 0 : 1;
}

int cmd_export_lp(const DataFlags &df, const TreeFlags &tf, const std::string &format, const std::string &kind,
                  const std::string &out_path, std::uint64_t max_pairs) {
    const auto cfg = tf.solver();
    const auto B = load_matrix(df, format);
    const auto s = NodeStats::of(B);
    LpSummary sum;
    Sink sink(out_path);
    if (kind == "gini") {
        LpExportOptions opt;
        opt.max_pair_vars = max_pairs;
        sum = write_optg_lp(B, s, cfg, sink.get(), opt);
    } else {
        sum = write_opte_lp(B, s, cfg, sink.get());
    }
    std::cerr << "variables: " << sum.vars << " (" << sum.binaries << " binary), constraints: " << sum.constraints
              << "\n";
    return 0;
}

int cmd_binarize(const DataFlags &df, const TreeFlags &tf, const std::string &out_path) {
    const auto bcfg = tf.binarize();
    const auto d = load_csv(df.path, df.target, df.options());
    const auto y = binarize_target(d, df.positive_label().value_or(default_positive_label(d)));
    const auto B = build_matrix(d, y, bcfg);
    Sink sink(out_path);
    write_matrix_csv(B, d.target, d.target_name, sink.get());
    std::cerr << B.m() << " questions over " << B.n << " rows";
    if (B.separable) std::cerr << "; separable by " << B.separable->describe();
    std::cerr << "\n";
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Decision trees with optimal OR-clause splits"};
    app.require_subcommand(1);

    DataFlags df;
    TreeFlags tf;
    std::string model_path, out_path, dot_path, roc_path, type = "both", format = "csv", lp_kind = "gini",
                                                          objective = "gini";
    bool vote = false, timing = false, brute = false;
    std::size_t reps = 20;
    std::uint64_t seed = 2021, max_pairs = 1'000'000;
    double fraction = 0.7;

    auto *train = app.add_subcommand("train", "Grow a tree (or ensemble) and save it");
    df.add(train, true);
    tf.add_tree(train);
    train->add_option("-m,--model", model_path, "Model file to write");
    train->add_option("--dot", dot_path, "Also write a Graphviz file");
    train->add_flag("--vote-ensemble", vote, "Train nine trees and vote");

    auto *predict = app.add_subcommand("predict", "Score new data with a saved model");
    predict->add_option("data", df.path, "Input CSV file")->required();
    predict->add_option("-m,--model", model_path, "Model file")->required();
    predict->add_option("-o,--output", out_path, "Predictions CSV (default stdout)");
    predict->add_option("--type", type, "class, score or both")
        ->check(CLI::IsMember({"class", "score", "both"}))
        ->capture_default_str();
    predict->add_option("--delimiter", df.delimiter, "Field delimiter");
    predict->add_flag("--drop-incomplete", df.drop_incomplete, "Drop rows with missing values");

    auto *evaluate = app.add_subcommand("evaluate", "Accuracy, AUC and confusion matrix on labelled data");
    evaluate->add_option("data", df.path, "Input CSV file")->required();
    evaluate->add_option("-m,--model", model_path, "Model file")->required();
    evaluate->add_option("--target", df.target, "Class column")->required();
    evaluate->add_option("--delimiter", df.delimiter, "Field delimiter");
    evaluate->add_flag("--drop-incomplete", df.drop_incomplete, "Drop rows with missing values");
    evaluate->add_option("--roc-csv", roc_path, "Write ROC points here");

    auto *experiment = app.add_subcommand("experiment", "Repeated seeded train/test splits");
    df.add(experiment, true);
    tf.add_tree(experiment);
    experiment->add_option("--reps", reps, "Repetitions")->capture_default_str();
    experiment->add_option("--seed", seed, "Base seed")->capture_default_str();
    experiment->add_option("--fraction", fraction, "Training fraction")->capture_default_str();
    experiment->add_flag("--vote-ensemble", vote, "Train nine trees and vote");
    experiment->add_flag("--timing", timing, "Report training seconds (makes output run-dependent)");

    auto *solve = app.add_subcommand("solve", "Optimal root split of a 0/1 matrix");
    df.add(solve, false);
    tf.add_solver(solve);
    solve->add_option("--format", format, "csv (0/1 columns + --target) or dl85")
        ->check(CLI::IsMember({"csv", "dl85"}))
        ->capture_default_str();
    solve->add_option("--objective", objective, "gini or error")
        ->check(CLI::IsMember({"gini", "error"}))
        ->capture_default_str();
    solve->add_flag("--brute-force", brute, "Enumerate every rule set");

    auto *lp = app.add_subcommand("export-lp", "Write the split model in CPLEX LP format");
    df.add(lp, false);
    tf.add_solver(lp);
    lp->add_option("--format", format, "csv or dl85")->check(CLI::IsMember({"csv", "dl85"}))->capture_default_str();
    lp->add_option("--model", lp_kind, "gini or error")->check(CLI::IsMember({"gini", "error"}))->capture_default_str();
    lp->add_option("-o,--output", out_path, "LP file (default stdout)");
    lp->add_option("--max-pairs", max_pairs, "Refuse Gini models with more pair variables")->capture_default_str();

    auto *bin = app.add_subcommand("binarize", "Write the candidate question matrix as CSV");
    df.add(bin, true);
    tf.add_binarize(bin);
    bin->add_option("-o,--output", out_path, "Matrix CSV (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*train) return cmd_train(df, tf, model_path, dot_path, vote);
        if (*predict) return cmd_predict(df, model_path, out_path, type);
        if (*evaluate) return cmd_evaluate(df, model_path, roc_path);
        if (*experiment) return cmd_experiment(df, tf, reps, seed, fraction, vote, timing);
        if (*solve) return cmd_solve(df, tf, format, objective, brute);
        if (*lp) return cmd_export_lp(df, tf, format, lp_kind, out_path, max_pairs);
        if (*bin) return cmd_binarize(df, tf, out_path);
    } catch (const UsageError &e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
