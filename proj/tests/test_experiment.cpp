#include "ortree/experiment.hpp"

#include "support/patterns.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>
#include <sstream>

using namespace ortree;

TEST_CASE("splitmix64 reference outputs") {
    std::uint64_t state = 0;
    CHECK(splitmix64(state) == 0xE220A8397B1DCDAFULL);
    CHECK(splitmix64(state) == 0x6E789E6AA1B965F4ULL);
    CHECK(splitmix64(state) == 0x06C45D188009454FULL);
    std::uint64_t s0 = 2021;
    CHECK(repetition_seed(2021, 0) == splitmix64(s0));
    std::uint64_t s3 = 2021 + 3 * 0x9E3779B97F4A7C15ULL;
    CHECK(repetition_seed(2021, 3) == splitmix64(s3));
}

TEST_CASE("the 64-bit Mersenne twister used for splits is the standard one") {
    std::mt19937_64 rng;
    rng.discard(9999);
    CHECK(rng() == 9981545732273789042ULL);
}

TEST_CASE("uniform_below stays in range and rejects the biased tail") {
    std::uint64_t calls = 0;
    auto fake = [&]() -> std::uint64_t { return calls++ == 0 ? 0 : 7; };
    // 2^64 mod 3 == 1, so 0 is rejected
    CHECK(uniform_below(fake, 3) == 1);
    CHECK(calls == 2);
    std::mt19937_64 rng(1);
    for (int i = 0; i < 1000; ++i) CHECK(uniform_below(rng, 7) < 7);
}

TEST_CASE("seeded splits") {
    const auto s = seeded_split(100, 0.7, 2021, 0);
    CHECK(s.train.size() == 70);
    CHECK(s.test.size() == 30);
    std::set<std::size_t> all(s.train.begin(), s.train.end());
    all.insert(s.test.begin(), s.test.end());
    CHECK(all.size() == 100);
    CHECK(std::is_sorted(s.train.begin(), s.train.end()));

    CHECK(seeded_split(100, 0.7, 2021, 0).train == s.train);
    CHECK(seeded_split(100, 0.7, 2021, 1).train != s.train);
    CHECK(seeded_split(100, 0.7, 2022, 0).train != s.train);
    CHECK(seeded_split(10, 0.7, 1, 0).train.size() == 7);
    CHECK(seeded_split(3, 0.5, 1, 0).train.size() == 1);
    CHECK_THROWS(seeded_split(10, 1.0, 1, 0));

    // hand-run Fisher-Yates with the same generator
    std::mt19937_64 rng(repetition_seed(5, 2));
    std::vector<std::size_t> perm{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    for (std::size_t i = 9; i >= 1; --i) {
        std::uint64_t x = rng();
        while (x < (-std::uint64_t(i + 1)) % (i + 1)) x = rng();
        std::swap(perm[i], perm[x % (i + 1)]);
    }
    std::vector<std::size_t> train(perm.begin(), perm.begin() + 6);
    std::sort(train.begin(), train.end());
    CHECK(seeded_split(10, 0.6, 5, 2).train == train);
}

TEST_CASE("default positive class is the last sorted label") {
    Dataset d;
    d.classes = {"benign", "malignant"};
    CHECK(default_positive_label(d) == "malignant");
}

TEST_CASE("experiments are deterministic") {
    auto d = testsupport::pattern_dataset("circ", 200, 6);
    ExperimentConfig c;
    c.reps = 3;
    auto a = run_experiment(d, c);
    auto b = run_experiment(d, c);
    std::ostringstream ra, rb;
    print_report(a, ra);
    print_report(b, rb);
    CHECK(ra.str() == rb.str());
    CHECK(ra.str().rfind("rep,n_train,n_test,leaves,accuracy,auc\n", 0) == 0);
    CHECK(ra.str().find("train_seconds") == std::string::npos);
    REQUIRE(a.reps.size() == 3);
    CHECK(a.reps[0].n_train == 140);
    CHECK(a.mean_auc.has_value());

    c.timing = true;
    std::ostringstream rt;
    print_report(run_experiment(d, c), rt);
    CHECK(rt.str().find(",train_seconds\n") != std::string::npos);
}

TEST_CASE("separable data reaches perfect test accuracy") {
    Dataset d;
    d.target_name = "y";
    d.columns = {{"x", ColumnKind::Numeric, {}, {}, {}}};
    for (int i = 0; i < 80; ++i) {
        // any midpoint between the two classes falls inside the gap
        d.columns[0].numbers.push_back(i < 30 ? i : i + 100);
        d.target.push_back(i < 30 ? "lo" : "hi");
    }
    d.n = 80;
    d.classes = {"hi", "lo"};
    ExperimentConfig c;
    c.reps = 20;
    auto r = run_experiment(d, c);
    CHECK(r.mean_accuracy == 1.0);
}

TEST_CASE("multi-class experiments use one tree per class") {
    std::mt19937_64 rng(3);
    auto d = testsupport::random_dataset(rng, 3);
    auto m = train_model(d, TreeConfig{}, std::nullopt, false);
    REQUIRE(std::holds_alternative<Ensemble>(m));
    CHECK(std::get<Ensemble>(m).trees.size() == 3);
    CHECK_THROWS_AS(train_model(d, TreeConfig{}, std::nullopt, true), DataError);
    ExperimentConfig c;
    c.reps = 2;
    auto r = run_experiment(d, c);
    CHECK_FALSE(r.mean_auc.has_value());
    CHECK(r.reps[0].accuracy >= 0.0);
}
