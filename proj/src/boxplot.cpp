#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>

#include <fmt/format.h>

#include "exnrule/bench.hpp"
#include "exnrule/error.hpp"

namespace exn::bench {

Metric parse_metric(const std::string& name) {
    if (name == "accuracy") return Metric::Accuracy;
    if (name == "kappa") return Metric::Kappa;
    if (name == "brier") return Metric::Brier;
    throw Error(ErrorCode::UnknownMetric, "'" + name + "' (accuracy, kappa, brier)");
}

std::string to_string(Metric m) {
    switch (m) {
    case Metric::Accuracy: return "accuracy";
    case Metric::Kappa: return "kappa";
    case Metric::Brier: return "brier";
    }
    return "accuracy";
}

double quantile7(const std::vector<double>& sorted, double prob) {
    if (sorted.empty()) throw Error(ErrorCode::LengthMismatch, "quantile of an empty sample");
    const double h = (static_cast<double>(sorted.size()) - 1.0) * prob;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

BoxStats box_stats(std::string group, std::vector<double> values) {
    std::sort(values.begin(), values.end());
    BoxStats b;
    b.group = std::move(group);
    b.q1 = quantile7(values, 0.25);
    b.median = quantile7(values, 0.5);
    b.q3 = quantile7(values, 0.75);
    const double iqr = b.q3 - b.q1;
    const double lo_fence = b.q1 - 1.5 * iqr;
    const double hi_fence = b.q3 + 1.5 * iqr;
    b.whisker_low = b.q1;
    b.whisker_high = b.q3;
    for (double v : values) {
        if (v < lo_fence || v > hi_fence) {
            b.outliers.push_back(v);
            continue;
        }
        b.whisker_low = std::min(b.whisker_low, v);
        b.whisker_high = std::max(b.whisker_high, v);
    }
    return b;
}

namespace {

double metric_value(const EvalRecord& r, Metric m) {
    switch (m) {
    case Metric::Accuracy: return r.accuracy;
    case Metric::Kappa: return r.kappa;
    case Metric::Brier: return r.brier;
    }
    return r.accuracy;
}

struct Group {
    std::string name;
    std::map<std::size_t, double> by_rep;
};

std::vector<Group> collect_groups(const ResultsTable& table, Metric metric) {
    std::vector<Group> groups;
    std::map<std::string, std::size_t> index;
    for (const auto& r : table.records()) {
        const auto name = r.method + ":" + r.dataset + ":" + (r.k == 0 ? std::string("tuned") : "k" + std::to_string(r.k));
        auto [it, inserted] = index.try_emplace(name, groups.size());
        if (inserted) groups.push_back({name, {}});
        groups[it->second].by_rep[r.repetition] = metric_value(r, metric);
    }
    return groups;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

void write_svg(const std::vector<BoxStats>& boxes, Metric metric, const std::filesystem::path& path,
               const std::string& header) {
    constexpr double kSlot = 90.0, kLeft = 60.0, kTop = 30.0, kPlotH = 300.0, kBoxW = 40.0;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& b : boxes) {
        lo = std::min({lo, b.whisker_low, b.q1});
        hi = std::max({hi, b.whisker_high, b.q3});
        for (double v : b.outliers) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }
    auto y = [&](double v) { return kTop + kPlotH * (hi - v) / (hi - lo); };
    const double width = kLeft + kSlot * static_cast<double>(boxes.size()) + 20.0;
    const double height = kTop + kPlotH + 120.0;

    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    if (!header.empty()) {
        out << "<!--\n";
        out << header;
        out << "-->\n";
    }
    out << fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\">\n", width, height);
    out << fmt::format("<text x=\"{:.1f}\" y=\"18\" font-size=\"14\">{}</text>\n", kLeft, to_string(metric));
    out << fmt::format("<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{0:.1f}\" y2=\"{2:.1f}\" stroke=\"black\"/>\n", kLeft - 10,
                       kTop, kTop + kPlotH);
    out << fmt::format("<text x=\"4\" y=\"{:.1f}\" font-size=\"10\">{:.3g}</text>\n", y(hi) + 4, hi);
    out << fmt::format("<text x=\"4\" y=\"{:.1f}\" font-size=\"10\">{:.3g}</text>\n", y(lo) + 4, lo);

    for (std::size_t g = 0; g < boxes.size(); ++g) {
        const auto& b = boxes[g];
        const double cx = kLeft + kSlot * (static_cast<double>(g) + 0.5);
        out << fmt::format("<g class=\"box\" data-group=\"{}\" data-q1=\"{}\" data-median=\"{}\" data-q3=\"{}\" "
                           "data-whisker-low=\"{}\" data-whisker-high=\"{}\" data-outliers=\"{}\">\n",
                           xml_escape(b.group), b.q1, b.median, b.q3, b.whisker_low, b.whisker_high, b.outliers.size());
        out << fmt::format("  <line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n", cx,
                           y(b.whisker_high), y(b.q3));
        out << fmt::format("  <line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n", cx,
                           y(b.q1), y(b.whisker_low));
        out << fmt::format("  <rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"#cfe2f3\" "
                           "stroke=\"black\"/>\n",
                           cx - kBoxW / 2, y(b.q3), kBoxW, std::max(0.0, y(b.q1) - y(b.q3)));
        out << fmt::format("  <line x1=\"{0:.2f}\" y1=\"{2:.2f}\" x2=\"{1:.2f}\" y2=\"{2:.2f}\" stroke=\"black\" "
                           "stroke-width=\"2\"/>\n",
                           cx - kBoxW / 2, cx + kBoxW / 2, y(b.median));
        for (double v : b.outliers)
            out << fmt::format("  <circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"2.5\" fill=\"none\" stroke=\"black\"/>\n", cx, y(v));
        out << fmt::format("  <text transform=\"translate({:.2f},{:.2f}) rotate(45)\" font-size=\"10\">{}</text>\n", cx - 10,
                           kTop + kPlotH + 14, xml_escape(b.group));
        out << "</g>\n";
    }
    out << "</svg>\n";
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

} // namespace

void emit_boxplot_data(const ResultsTable& table, Metric metric, const std::filesystem::path& tsv_path,
                       const std::optional<std::filesystem::path>& svg_path, const std::string& header) {
    const auto groups = collect_groups(table, metric);
    std::vector<std::size_t> reps;
    for (const auto& g : groups)
        for (const auto& [rep, v] : g.by_rep) reps.push_back(rep);
    std::sort(reps.begin(), reps.end());
    reps.erase(std::unique(reps.begin(), reps.end()), reps.end());

    if (tsv_path.has_parent_path()) std::filesystem::create_directories(tsv_path.parent_path());
    std::ofstream out(tsv_path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + tsv_path.string());
    out << header;
    for (std::size_t g = 0; g < groups.size(); ++g) out << (g ? "\t" : "") << groups[g].name;
    out << '\n';
    for (auto rep : reps) {
        for (std::size_t g = 0; g < groups.size(); ++g) {
            if (g) out << '\t';
            const auto it = groups[g].by_rep.find(rep);
            if (it != groups[g].by_rep.end()) out << fmt::format("{}", it->second);
        }
        out << '\n';
    }
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + tsv_path.string());

    if (svg_path && !groups.empty()) {
        std::vector<BoxStats> boxes;
        for (const auto& g : groups) {
            std::vector<double> values;
            for (const auto& [rep, v] : g.by_rep) values.push_back(v);
            boxes.push_back(box_stats(g.name, std::move(values)));
        }
        write_svg(boxes, metric, *svg_path, header);
    }
}

} // namespace exn::bench
