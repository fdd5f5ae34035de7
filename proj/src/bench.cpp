#include "exnrule/bench.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <fmt/format.h>

#include "exnrule/baselines.hpp"
#include "exnrule/dataset.hpp"
#include "exnrule/error.hpp"
#include "exnrule/exnrule.hpp"
#include "exnrule/parallel.hpp"
#include "exnrule/synthgen.hpp"

namespace exn::bench {

namespace {

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::size_t parse_count(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        if (value.empty() || value.front() == '-' || value.front() == '+') throw std::invalid_argument(value);
        const auto v = std::stoull(value, &used);
        if (used == value.size()) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::ConfigInvalid, "'" + key + "' expects a non-negative integer, got '" + value + "'");
}

bool parse_flag(const std::string& key, const std::string& value) {
    if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
    if (value == "0" || value == "false" || value == "no" || value == "off") return false;
    throw Error(ErrorCode::ConfigInvalid, "'" + key + "' expects a boolean, got '" + value + "'");
}

double parse_real(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used == value.size()) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::ConfigInvalid, "'" + key + "' expects a number, got '" + value + "'");
}

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    return out;
}

} // namespace

std::string to_string(Method m) {
    switch (m) {
    case Method::ExNRule: return "exnrule";
    case Method::Knn: return "knn";
    case Method::Wknn: return "wknn";
    case Method::Rknn: return "rknn";
    }
    return "exnrule";
}

Method parse_method(const std::string& name) {
    if (name == "exnrule") return Method::ExNRule;
    if (name == "knn") return Method::Knn;
    if (name == "wknn") return Method::Wknn;
    if (name == "rknn") return Method::Rknn;
    throw Error(ErrorCode::ConfigInvalid, "unknown method '" + name + "' (exnrule, knn, wknn, rknn)");
}

DatasetSource DatasetSource::parse(const std::string& token) {
    DatasetSource src;
    if (find_scenario(token)) {
        src.name = token;
        src.scenario = token;
        return src;
    }
    const auto eq = token.find('=');
    if (eq != std::string::npos) {
        src.name = token.substr(0, eq);
        src.csv = token.substr(eq + 1);
    } else {
        src.csv = token;
        src.name = std::filesystem::path(token).stem().string();
    }
    if (src.name.empty() || src.csv->empty())
        throw Error(ErrorCode::ConfigInvalid, "bad dataset entry '" + token + "'");
    return src;
}

std::string DatasetSource::to_string() const {
    if (scenario) return *scenario;
    return name + "=" + csv->string();
}

void ExperimentConfig::validate() const {
    if (datasets.empty()) throw Error(ErrorCode::ConfigInvalid, "no datasets configured");
    if (methods.empty()) throw Error(ErrorCode::ConfigInvalid, "no methods configured");
    if (repetitions < 1) throw Error(ErrorCode::ConfigInvalid, "repetitions must be >= 1");
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw Error(ErrorCode::ConfigInvalid, "train_fraction must lie in (0, 1)");
    if (ensemble_size < 1) throw Error(ErrorCode::ConfigInvalid, "B must be >= 1");
    if (k_values.empty()) throw Error(ErrorCode::ConfigInvalid, "no k values configured");
    for (auto k : k_values)
        if (k < 1) throw Error(ErrorCode::ConfigInvalid, "k values must be >= 1");
    std::vector<std::string> names;
    for (const auto& d : datasets) names.push_back(d.name);
    std::sort(names.begin(), names.end());
    if (std::adjacent_find(names.begin(), names.end()) != names.end())
        throw Error(ErrorCode::ConfigInvalid, "dataset names must be unique");
}

std::string ExperimentConfig::canonical() const {
    std::string out;
    auto line = [&out](const std::string& k, const std::string& v) { out += k + "=" + v + "\n"; };
    std::string ds, ms, ks;
    for (const auto& d : datasets) ds += (ds.empty() ? "" : ",") + d.to_string();
    for (auto m : methods) ms += (ms.empty() ? "" : ",") + to_string(m);
    for (auto k : k_values) ks += (ks.empty() ? "" : ",") + std::to_string(k);
    line("datasets", ds);
    line("methods", ms);
    line("repetitions", std::to_string(repetitions));
    line("train_fraction", fmt::format("{}", train_fraction));
    line("B", std::to_string(ensemble_size));
    line("k", ks);
    line("tune", tune ? "true" : "false");
    line("seed", std::to_string(master_seed));
    line("scale", scale ? "true" : "false");
    line("feature_rule", feature_rule.to_string());
    line("q", fmt::format("{}", minkowski_q));
    line("label_column", label_column);
    return out;
}

std::uint64_t ExperimentConfig::hash() const { return fnv1a(canonical()); }

void ExperimentConfig::set(const std::string& key, const std::string& raw) {
    const auto value = trim(raw);
    if (key == "datasets") {
        datasets.clear();
        for (const auto& t : split_list(value)) datasets.push_back(DatasetSource::parse(t));
    } else if (key == "methods") {
        methods.clear();
        for (const auto& t : split_list(value)) methods.push_back(parse_method(t));
    } else if (key == "repetitions" || key == "reps") {
        repetitions = parse_count(key, value);
    } else if (key == "train_fraction") {
        train_fraction = parse_real(key, value);
    } else if (key == "B" || key == "ensemble_size") {
        ensemble_size = parse_count(key, value);
    } else if (key == "k") {
        k_values.clear();
        for (const auto& t : split_list(value)) k_values.push_back(parse_count(key, t));
    } else if (key == "tune") {
        tune = parse_flag(key, value);
    } else if (key == "seed") {
        master_seed = parse_count(key, value);
    } else if (key == "scale") {
        scale = parse_flag(key, value);
    } else if (key == "feature_rule") {
        feature_rule = FeatureRule::parse(value);
    } else if (key == "q") {
        minkowski_q = parse_real(key, value);
    } else if (key == "label_column") {
        label_column = value;
    } else if (key == "out" || key == "output_dir") {
        output_dir = value;
    } else if (key == "threads") {
        threads = static_cast<unsigned>(parse_count(key, value));
    } else {
        throw Error(ErrorCode::ConfigInvalid, "unknown config key '" + key + "'");
    }
}

ExperimentConfig load_config_file(const std::filesystem::path& path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open config " + path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(line_no) + ": expected key = value");
        base.set(trim(line.substr(0, eq)), line.substr(eq + 1));
    }
    return base;
}

std::vector<SummaryRow> ResultsTable::summary() const {
    std::vector<SummaryRow> rows;
    std::map<std::tuple<std::string, std::string, std::size_t>, std::size_t> index;
    for (const auto& r : records_) {
        const auto key = std::make_tuple(r.method, r.dataset, r.k);
        auto [it, inserted] = index.try_emplace(key, rows.size());
        if (inserted) rows.push_back({r.method, r.dataset, r.k, 0, 0.0, 0.0, 0.0});
        auto& row = rows[it->second];
        ++row.count;
        row.accuracy += r.accuracy;
        row.kappa += r.kappa;
        row.brier += r.brier;
    }
    for (auto& row : rows) {
        const auto c = static_cast<double>(row.count);
        row.accuracy /= c;
        row.kappa /= c;
        row.brier /= c;
    }
    return rows;
}

std::optional<SummaryRow> ResultsTable::find(const std::string& method, const std::string& dataset,
                                             std::size_t k) const {
    for (const auto& row : summary())
        if (row.method == method && row.dataset == dataset && row.k == k) return row;
    return std::nullopt;
}

namespace {

struct TaskKey {
    std::size_t dataset, method, k_slot, repetition;
    auto tie() const { return std::tie(dataset, method, k_slot, repetition); }
    bool operator<(const TaskKey& o) const { return tie() < o.tie(); }
};

struct KeyedRecord {
    TaskKey key;
    EvalRecord record;
};

EvalRecord score(const std::string& method, const std::string& dataset, std::size_t k, std::size_t k_used,
                 std::size_t rep, const Split& split, std::span<const Label> predicted,
                 std::span<const double> probs) {
    EvalRecord r;
    r.method = method;
    r.dataset = dataset;
    r.k = k;
    r.k_used = k_used;
    r.repetition = rep;
    r.partition_hash = split.partition_hash;
    r.accuracy = accuracy(predicted, split.test.labels());
    r.kappa = cohen_kappa(predicted, split.test.labels());
    r.brier = brier_score(probs, split.test.labels());
    return r;
}

std::vector<KeyedRecord> run_task(const ExperimentConfig& config, std::size_t d, const Dataset* csv_data,
                                  std::size_t rep) {
    const auto& src = config.datasets[d];
    const std::uint64_t name_seed = derive_seed(config.master_seed, fnv1a(src.name));

    Dataset data;
    if (src.scenario)
        data = generate(*find_scenario(*src.scenario), RngStream(name_seed, rep));
    else
        data = *csv_data;

    Split split = train_test_split(data, config.train_fraction, RngStream(config.master_seed, rep));
    if (config.scale) {
        const auto z = Standardizer::fit(split.train);
        split.train = z.apply(split.train);
        split.test = z.apply(split.test);
    }
    const auto& train = split.train;
    const auto& test = split.test;
    const std::uint64_t model_seed = derive_seed(derive_seed(name_seed, 0x6D6F64656CULL), rep);
    const DistanceMetric metric(config.minkowski_q);

    std::vector<KeyedRecord> out;
    std::vector<Label> predicted(test.n());
    std::vector<double> probs(test.n());

    for (std::size_t m = 0; m < config.methods.size(); ++m) {
        const Method method = config.methods[m];
        const auto name = to_string(method);

        auto evaluate = [&](std::size_t k_slot, std::size_t k_setting, std::size_t k) {
            switch (method) {
            case Method::ExNRule: {
                ExNRuleConfig cfg;
                cfg.ensemble_size = config.ensemble_size;
                cfg.chain_length = k;
                cfg.feature_rule = config.feature_rule;
                cfg.metric = metric;
                cfg.master_seed = model_seed;
                const auto model = fit(train, cfg);
                for (std::size_t i = 0; i < test.n(); ++i) {
                    const auto pr = predict(model, test.row(i));
                    predicted[i] = pr.label;
                    probs[i] = pr.prob_class1;
                }
                break;
            }
            case Method::Knn:
            case Method::Wknn:
                for (std::size_t i = 0; i < test.n(); ++i) {
                    const auto v = method == Method::Knn ? knn_predict(train, test.row(i), {k, metric})
                                                         : wknn_predict(train, test.row(i), {k, metric});
                    predicted[i] = v.label;
                    probs[i] = v.prob_class1;
                }
                break;
            case Method::Rknn: {
                RknnConfig cfg;
                cfg.ensemble_size = config.ensemble_size;
                cfg.k = k;
                cfg.feature_rule = config.feature_rule;
                cfg.metric = metric;
                cfg.master_seed = model_seed;
                const auto model = rknn_fit(train, cfg);
                for (std::size_t i = 0; i < test.n(); ++i) {
                    const auto v = rknn_predict(model, test.row(i));
                    predicted[i] = v.label;
                    probs[i] = v.prob_class1;
                }
                break;
            }
            }
            out.push_back({{d, m, k_slot, rep}, score(name, src.name, k_setting, k, rep, split, predicted, probs)});
        };

        if (config.tune && method != Method::ExNRule) {
            TuneOptions opts;
            opts.seed = derive_seed(model_seed, 0x74756E65ULL);
            opts.metric = metric;
            opts.rknn.ensemble_size = config.ensemble_size;
            opts.rknn.feature_rule = config.feature_rule;
            opts.rknn.master_seed = model_seed;
            const auto family = method == Method::Knn ? KnnFamily::Knn
                                : method == Method::Wknn ? KnnFamily::Wknn
                                                         : KnnFamily::Rknn;
            evaluate(0, 0, tune_k(train, family, opts));
        } else {
            for (std::size_t s = 0; s < config.k_values.size(); ++s) evaluate(s, config.k_values[s], config.k_values[s]);
        }
    }
    return out;
}

} // namespace

ResultsTable run_experiment(const ExperimentConfig& config) {
    config.validate();
    std::vector<std::optional<Dataset>> csv_data(config.datasets.size());
    for (std::size_t d = 0; d < config.datasets.size(); ++d) {
        const auto& src = config.datasets[d];
        if (src.csv) {
            try {
                csv_data[d] = load_csv(*src.csv, config.label_column);
            } catch (const Error& e) {
                throw Error(e.code(), "dataset '" + src.name + "': " + e.what());
            }
        }
    }

    const std::size_t reps = config.repetitions;
    const std::size_t tasks = config.datasets.size() * reps;
    std::vector<std::vector<KeyedRecord>> slots(tasks);
    parallel_for(tasks, config.threads, [&](std::size_t t) {
        const std::size_t d = t / reps;
        const std::size_t rep = t % reps;
        try {
            slots[t] = run_task(config, d, csv_data[d] ? &*csv_data[d] : nullptr, rep);
        } catch (const Error& e) {
            throw Error(e.code(), "dataset '" + config.datasets[d].name + "', repetition " + std::to_string(rep) +
                                      ": " + e.what());
        }
    });

    std::vector<KeyedRecord> all;
    for (auto& s : slots)
        for (auto& r : s) all.push_back(std::move(r));
    std::sort(all.begin(), all.end(), [](const KeyedRecord& a, const KeyedRecord& b) { return a.key < b.key; });
    ResultsTable table;
    for (auto& r : all) table.add(std::move(r.record));

    if (!config.output_dir.empty()) {
        const auto header = metadata_header(config);
        std::filesystem::create_directories(config.output_dir);
        write_results_csv(table, config.output_dir / "results.csv", header);
        write_summary_csv(table, config.output_dir / "summary.csv", header);
        for (auto metric : {Metric::Accuracy, Metric::Kappa, Metric::Brier}) {
            const auto stem = "box_" + to_string(metric);
            emit_boxplot_data(table, metric, config.output_dir / (stem + ".tsv"),
                              config.output_dir / (stem + ".svg"), header);
        }
    }
    return table;
}

std::string metadata_header(const ExperimentConfig& config) {
    std::string out = fmt::format("# exnrule-bench {}\n# seed={}\n# config_hash={:016x}\n", kVersion,
                                  config.master_seed, config.hash());
    std::istringstream in(config.canonical());
    std::string line;
    while (std::getline(in, line)) out += "# " + line + "\n";
    return out;
}

void write_results_csv(const ResultsTable& table, const std::filesystem::path& path, const std::string& header) {
    auto out = open_out(path);
    out << header;
    out << "method,dataset,k,repetition,partition_hash,accuracy,kappa,brier,k_used\n";
    for (const auto& r : table.records())
        out << fmt::format("{},{},{},{},{:016x},{},{},{},{}\n", r.method, r.dataset, r.k, r.repetition,
                           r.partition_hash, r.accuracy, r.kappa, r.brier, r.k_used);
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

void write_summary_csv(const ResultsTable& table, const std::filesystem::path& path, const std::string& header) {
    auto out = open_out(path);
    out << header;
    out << "method,dataset,k,repetitions,accuracy,kappa,brier\n";
    for (const auto& s : table.summary())
        out << fmt::format("{},{},{},{},{},{},{}\n", s.method, s.dataset, s.k, s.count, s.accuracy, s.kappa,
                           s.brier);
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

ResultsTable read_results_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    std::string line;
    std::vector<std::string> header;
    ResultsTable table;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& what) {
        throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(line_no) + ": " + what);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        if (header.empty()) {
            header = fields;
            continue;
        }
        if (fields.size() != header.size()) fail("field count differs from header");
        EvalRecord r;
        try {
            for (std::size_t j = 0; j < fields.size(); ++j) {
                const auto& h = header[j];
                const auto& v = fields[j];
                if (h == "method") r.method = v;
                else if (h == "dataset") r.dataset = v;
                else if (h == "k") r.k = std::stoull(v);
                else if (h == "repetition") r.repetition = std::stoull(v);
                else if (h == "partition_hash") r.partition_hash = std::stoull(v, nullptr, 16);
                else if (h == "accuracy") r.accuracy = std::stod(v);
                else if (h == "kappa") r.kappa = std::stod(v);
                else if (h == "brier") r.brier = std::stod(v);
                else if (h == "k_used") r.k_used = std::stoull(v);
            }
        } catch (const std::exception&) {
            fail("malformed value");
        }
        table.add(std::move(r));
    }
    if (header.empty()) throw Error(ErrorCode::ParseError, path.string() + ": no header row");
    return table;
}

void dump_scenario(const std::string& id, std::uint64_t seed, const std::filesystem::path& path) {
    const auto spec = find_scenario(id);
    if (!spec) throw Error(ErrorCode::UnknownScenario, "no built-in scenario '" + id + "' (S1..S6)");
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    write_csv(generate(*spec, RngStream(seed, 0)), path);
}

} // namespace exn::bench
