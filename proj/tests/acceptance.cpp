// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "exnrule/baselines.hpp"
#include "exnrule/bench.hpp"
#include "exnrule/exnrule.hpp"
#include "exnrule/metrics.hpp"
#include "oracles.hpp"

using namespace exn;
using namespace exn::bench;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& fn, double limit_s = 0.0) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = fn();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit_s > 0.0 && secs >= limit_s) {
        o.pass = false;
        o.detail += (o.detail.empty() ? "" : "; ") + std::string("runtime limit exceeded");
    }
    if (!o.pass) ++failures;
    std::printf("%s  %d  %s  (%.2fs)%s%s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), secs,
                o.detail.empty() ? "" : "  ", o.detail.c_str());
    std::fflush(stdout);
}

std::string f3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

Outcome chain_oracle() {
    RngStream rng(0xC4A1, 0);
    for (int t = 0; t < 500; ++t) {
        const std::size_t n = 2 + rng.uniform_index(19);
        const std::size_t p = 1 + rng.uniform_index(5);
        const auto d = oracle::random_dataset(rng, n, p, t % 2 == 0);
        const std::size_t p_prime = 1 + rng.uniform_index(p);
        const auto sample = draw_base_learner_sample(n, p, p_prime, RngStream(t, 1));
        const std::size_t k = 1 + rng.uniform_index(n);
        std::vector<double> q;
        for (std::size_t j = 0; j < p_prime; ++j) q.push_back(t % 2 == 0 ? double(rng.uniform_index(4)) : rng.normal());
        const auto got = extended_chain(sample, d, q, k, DistanceMetric());
        const auto want = oracle::greedy_chain(d, sample.row_indices, sample.feature_indices, q, k, 2.0);
        if (got.pool_positions != want.positions || got.rows != want.rows || got.labels != want.labels ||
            got.hop_distances != want.hops)
            return {false, "instance " + std::to_string(t) + " differs"};
    }
    return {true, "500/500 chains identical"};
}

Outcome one_nn_reduction() {
    RngStream rng(0x1AA, 0);
    std::size_t agree = 0, total = 0;
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 5 + rng.uniform_index(26);
        const std::size_t p = 1 + rng.uniform_index(6);
        const auto d = oracle::random_dataset(rng, n, p, t % 3 == 0);
        ExNRuleConfig cfg;
        cfg.ensemble_size = 1;
        cfg.bootstrap = false;
        cfg.feature_rule = FeatureRule::fixed_count(p);
        cfg.chain_length = 1;
        const auto model = fit(d, cfg);
        for (int i = 0; i < 20; ++i) {
            std::vector<double> q(p);
            for (auto& v : q) v = t % 3 == 0 ? double(rng.uniform_index(4)) : rng.uniform() * 4;
            agree += predict(model, q).label == oracle::one_nn(d, q);
            ++total;
        }
    }
    return {agree == total, std::to_string(agree) + "/" + std::to_string(total) + " queries agree"};
}

const std::vector<std::string> kScenarios{"S1", "S2", "S3", "S4", "S5", "S6"};

struct Reference {
    const char* method;
    double tol;
    double acc[6];
};

const Reference kTable[] = {
    {"exnrule", 0.05, {0.832, 0.823, 0.852, 0.884, 0.742, 0.693}},
    {"knn", 0.07, {0.786, 0.811, 0.850, 0.878, 0.682, 0.696}},
    {"wknn", 0.07, {0.789, 0.821, 0.849, 0.887, 0.680, 0.706}},
    {"rknn", 0.07, {0.809, 0.798, 0.833, 0.862, 0.730, 0.675}},
};

ResultsTable synthetic_table() {
    ExperimentConfig cfg;
    cfg.set("datasets", "S1,S2,S3,S4,S5,S6");
    cfg.repetitions = 50;
    cfg.ensemble_size = 500;
    cfg.k_values = {3};
    cfg.master_seed = 1;
    return run_experiment(cfg);
}

Outcome synthetic_reproduction(const ResultsTable& table) {
    Outcome o;
    std::string misses;
    for (const auto& ref : kTable) {
        for (std::size_t s = 0; s < 6; ++s) {
            const auto row = table.find(ref.method, kScenarios[s], 3);
            const double got = row ? row->accuracy : -1.0;
            if (!(std::fabs(got - ref.acc[s]) <= ref.tol)) {
                o.pass = false;
                misses += " " + std::string(ref.method) + ":" + kScenarios[s] + "=" + f3(got);
            }
        }
    }
    const auto s4 = table.find("exnrule", "S4", 3);
    const double kappa = s4 ? s4->kappa : -1.0, brier = s4 ? s4->brier : -1.0;
    if (!(std::fabs(kappa - 0.766) <= 0.07)) o.pass = false, misses += " S4 kappa=" + f3(kappa);
    if (!(std::fabs(brier - 0.104) <= 0.05)) o.pass = false, misses += " S4 brier=" + f3(brier);

    o.detail = "exnrule acc";
    for (const auto& sc : kScenarios) {
        const auto r = table.find("exnrule", sc, 3);
        o.detail += " " + sc + "=" + (r ? f3(r->accuracy) : std::string("?"));
    }
    o.detail += "; S4 kappa=" + f3(kappa) + " brier=" + f3(brier);
    if (!misses.empty()) o.detail += "; out of tolerance:" + misses;
    return o;
}

Outcome ordering(const ResultsTable& table) {
    auto acc = [&](const char* s) {
        const auto r = table.find("exnrule", s, 3);
        return r ? r->accuracy : std::nan("");
    };
    const double s1 = acc("S1"), s4 = acc("S4"), s5 = acc("S5"), s6 = acc("S6");
    const bool pass = s4 - s1 > 0.02 && s1 - s5 > 0.02 && s4 - s6 > 0.02;
    return {pass, "S4-S1=" + f3(s4 - s1) + " S1-S5=" + f3(s1 - s5) + " S4-S6=" + f3(s4 - s6)};
}

Outcome k_robustness() {
    ExperimentConfig cfg;
    cfg.set("datasets", "S1");
    cfg.set("methods", "exnrule,knn");
    cfg.repetitions = 50;
    cfg.ensemble_size = 500;
    cfg.k_values = {3, 5, 7};
    cfg.master_seed = 1;
    const auto table = run_experiment(cfg);
    auto spread = [&](const char* method) {
        double lo = 1e9, hi = -1e9;
        for (std::size_t k : {3, 5, 7}) {
            const double a = table.find(method, "S1", k)->accuracy;
            lo = std::min(lo, a);
            hi = std::max(hi, a);
        }
        return hi - lo;
    };
    const double ex = spread("exnrule"), kn = spread("knn");
    return {ex <= kn + 0.02, "exnrule spread=" + f3(ex) + " knn spread=" + f3(kn)};
}

Outcome metric_suite() {
    std::vector<std::string> bad;
    auto check = [&](const std::string& name, double got, double want) {
        if (!(std::fabs(got - want) <= 1e-12)) bad.push_back(name);
    };
    std::vector<Label> pred, truth;
    auto push = [&](int count, Label p, Label t) {
        for (int i = 0; i < count; ++i) pred.push_back(p), truth.push_back(t);
    };
    push(40, 1, 1);
    push(10, 0, 1);
    push(20, 1, 0);
    push(30, 0, 0);
    check("kappa confusion", cohen_kappa(pred, truth), 0.4);
    check("accuracy confusion", accuracy(pred, truth), 0.7);
    check("brier", brier_score(std::vector<double>{0.8, 0.4}, std::vector<Label>{1, 0}), 0.1);

    const std::vector<Label> y{0, 1, 1, 0, 1, 0};
    check("accuracy perfect", accuracy(y, y), 1.0);
    check("kappa perfect", cohen_kappa(y, y), 1.0);
    const std::vector<Label> inv{1, 0, 0, 1, 0, 1};
    check("accuracy inverted", accuracy(inv, y), 0.0);
    check("kappa inverted", cohen_kappa(inv, y), -1.0);
    const std::vector<Label> ones(5, 1);
    check("kappa constant agreement", cohen_kappa(ones, ones), 1.0);
    check("brier perfect", brier_score(std::vector<double>{1.0, 0.0}, std::vector<Label>{1, 0}), 0.0);
    check("brier worst", brier_score(std::vector<double>{0.0, 1.0}, std::vector<Label>{1, 0}), 1.0);
    check("brier half", brier_score(std::vector<double>{0.5, 0.5}, std::vector<Label>{1, 0}), 0.25);

    std::string detail = bad.empty() ? "11/11 exact" : "mismatch:";
    for (const auto& b : bad) detail += " " + b;
    return {bad.empty(), detail};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism() {
    const auto base = fs::temp_directory_path() / "exnrule_acceptance_determinism";
    fs::remove_all(base);
    ExperimentConfig cfg;
    cfg.set("datasets", "S1,S4,S6");
    cfg.repetitions = 8;
    cfg.ensemble_size = 100;
    cfg.k_values = {3, 5};
    cfg.master_seed = 2024;
    cfg.threads = 1;
    cfg.output_dir = base / "w1";
    run_experiment(cfg);
    cfg.threads = 8;
    cfg.output_dir = base / "w8";
    run_experiment(cfg);
    const auto a = slurp(base / "w1" / "results.csv");
    const auto b = slurp(base / "w8" / "results.csv");
    return {!a.empty() && a == b, std::to_string(a.size()) + " bytes, " + (a == b ? "identical" : "different")};
}

Outcome filament() {
    const auto layout = oracle::filament_layout();
    ExNRuleConfig cfg;
    cfg.ensemble_size = 1;
    cfg.bootstrap = false;
    cfg.feature_rule = FeatureRule::fixed_count(layout.train.p());
    cfg.chain_length = 5;
    const auto ex = predict(fit(layout.train, cfg), layout.query);
    const auto kn = knn_predict(layout.train, layout.query, {5, DistanceMetric()});
    const bool pass = ex.label == 1 && kn.label == 0 && std::fabs(kn.prob_class1 - 0.4) <= 1e-12;
    return {pass, "exnrule label=" + std::to_string(ex.label) + " p1=" + f3(ex.prob_class1) +
                      "; 5-NN label=" + std::to_string(kn.label) + " p1=" + f3(kn.prob_class1)};
}

} // namespace

int main() {
    report(1, "chain matches brute-force greedy oracle on 500 instances", chain_oracle, 10.0);
    report(2, "B=1, no bootstrap, p'=p, k=1 reduces to 1-NN", one_nn_reduction, 10.0);
    ResultsTable table;
    report(3, "synthetic scenarios S1-S6 match reference accuracies", [&] {
        table = synthetic_table();
        return synthetic_reproduction(table);
    }, 600.0);
    report(4, "ExNRule ordering S4 > S1 > S5 and S4 > S6", [&] { return ordering(table); });
    report(5, "ExNRule k-spread on S1 within kNN k-spread + 0.02", k_robustness);
    report(6, "metric unit suite", metric_suite);
    report(7, "results.csv identical with 1 and 8 workers", determinism);
    report(8, "filament layout: chain picks filament, 5-NN picks blob", filament);
    std::printf("%s: %d failure(s)\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
