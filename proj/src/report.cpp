#include "nrslice/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

namespace nrslice {

namespace {

std::string shortest(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t p = line.find(sep, start);
        out.push_back(line.substr(start, p - start));
        if (p == std::string_view::npos) return out;
        start = p + 1;
    }
}

template <typename T>
T parse_number(std::string_view s, std::size_t line_no) {
    T v{};
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
        throw std::runtime_error(fmt::format("csv line {}: bad number '{}'", line_no, s));
    return v;
}

}  // namespace

std::string to_csv(const MetricTable& table, std::string_view config_hash) {
    std::string out(kCsvHeader);
    out += '\n';
    for (const auto& [k, v] : table)
        out += fmt::format("{},{},{},{},{},{},{},{}\n", k.plan, k.interval, k.profile, k.metric, shortest(v.mean),
                           shortest(v.dev_lo), shortest(v.dev_hi), v.seeds);
    out += fmt::format("# config_hash={}\n", config_hash);
    return out;
}

std::string to_seed_csv(const CampaignResult& result, std::uint64_t master_seed, std::string_view config_hash) {
    std::string out(kSeedCsvHeader);
    out += '\n';
    for (std::size_t r = 0; r < result.runs.size(); ++r) {
        const auto [mode, index] = result.run_ids[r];
        const std::uint64_t seed = run_seed(master_seed, static_cast<std::uint64_t>(index));
        for (const auto& [k, v] : result.runs[r]) {
            if (k.plan != to_string(mode)) continue;
            out += fmt::format("{},{},{},{},{},{},{}\n", k.plan, index, seed, k.interval, k.profile, k.metric,
                               shortest(v));
        }
    }
    out += fmt::format("# config_hash={}\n", config_hash);
    return out;
}

ParsedCsv parse_csv(std::string_view text) {
    ParsedCsv out;
    std::size_t line_no = 0;
    bool header = false;
    while (!text.empty()) {
        const std::size_t nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (line.starts_with("# config_hash=")) {
            out.config_hash = std::string(line.substr(14));
            continue;
        }
        if (line.starts_with('#')) continue;
        if (!header) {
            if (line != kCsvHeader) throw std::runtime_error(fmt::format("csv line {}: unexpected header", line_no));
            header = true;
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != 8) throw std::runtime_error(fmt::format("csv line {}: expected 8 fields", line_no));
        out.table[{std::string(f[0]), std::string(f[1]), std::string(f[2]), std::string(f[3])}] = {
            parse_number<double>(f[4], line_no), parse_number<double>(f[5], line_no),
            parse_number<double>(f[6], line_no), parse_number<std::size_t>(f[7], line_no)};
    }
    if (!header) throw std::runtime_error("csv: missing header");
    return out;
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw std::runtime_error(fmt::format("{}: {}", path.parent_path().string(), ec.message()));
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(fmt::format("{}: cannot open for writing", path.string()));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) throw std::runtime_error(fmt::format("{}: write failed", path.string()));
}

std::span<const ChartSpec> chart_specs() {
    static const ChartSpec specs[] = {
        {"embb_throughput.svg", "eMBB throughput per worker", "eMBB", "throughput_per_device_bps", "Mbps", 1e-6, false},
        {"urllc_outage.svg", "URLLC outage at 5 ms", "URLLC", "outage", "fraction", 1.0, true},
        {"mmtc_blocking.svg", "mMTC blocking probability", "mMTC", "blocking_probability", "fraction", 1.0, false},
        {"mmtc_preamble_retx.svg", "mMTC preamble retransmissions", "mMTC", "avg_preamble_retx", "count", 1.0, false},
        {"mmtc_access_delay.svg", "mMTC access delay", "mMTC", "access_delay_ms", "ms", 1.0, false},
    };
    return specs;
}

namespace {

struct Bar {
    double mean, lo, hi;
};

constexpr double kWidth = 640, kHeight = 400, kLeft = 70, kRight = 20, kTop = 40, kBottom = 60;
constexpr const char* kPlanColors[] = {"#4c72b0", "#dd8452", "#55a868", "#c44e52"};

std::string num(double v) { return fmt::format("{:.2f}", v); }

}  // namespace

std::string render_chart(const MetricTable& table, const ChartSpec& spec, std::string_view config_hash) {
    std::set<std::string> plans;
    std::set<std::string> interval_set;
    for (const auto& [k, v] : table) {
        if (k.profile != spec.profile || k.metric != spec.metric) continue;
        plans.insert(k.plan);
        interval_set.insert(k.interval);
    }
    if (plans.empty()) return {};
    // numeric intervals first, combined last
    std::vector<std::string> groups(interval_set.begin(), interval_set.end());
    std::stable_sort(groups.begin(), groups.end(), [](const std::string& a, const std::string& b) {
        const bool ca = a == kCombined, cb = b == kCombined;
        if (ca != cb) return cb;
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    std::vector<std::string> plan_list(plans.begin(), plans.end());
    std::sort(plan_list.begin(), plan_list.end(), [](const std::string& a, const std::string& b) {
        // static before dynamic, then alphabetical
        if ((a == "static") != (b == "static")) return a == "static";
        return a < b;
    });

    std::vector<std::vector<std::optional<Bar>>> bars(groups.size(), std::vector<std::optional<Bar>>(plan_list.size()));
    double vmax = 0.0, vmin_pos = INFINITY;
    for (std::size_t g = 0; g < groups.size(); ++g)
        for (std::size_t p = 0; p < plan_list.size(); ++p) {
            auto it = table.find({plan_list[p], groups[g], spec.profile, spec.metric});
            if (it == table.end()) continue;
            const AggregateValue& a = it->second;
            const Bar b{a.mean * spec.scale, (a.mean - a.dev_lo) * spec.scale, (a.mean + a.dev_hi) * spec.scale};
            bars[g][p] = b;
            vmax = std::max(vmax, b.hi);
            for (double x : {b.lo, b.mean})
                if (x > 0) vmin_pos = std::min(vmin_pos, x);
        }

    const double plot_w = kWidth - kLeft - kRight, plot_h = kHeight - kTop - kBottom;
    double lo_exp = 0, hi_exp = 0, ymax = 1.0;
    if (spec.log_axis) {
        if (!std::isfinite(vmin_pos)) vmin_pos = 1e-6;
        lo_exp = std::floor(std::log10(vmin_pos));
        hi_exp = std::max(lo_exp + 1, std::ceil(std::log10(std::max(vmax, vmin_pos))));
    } else {
        ymax = vmax > 0 ? vmax * 1.1 : 1.0;
    }
    auto y_of = [&](double v) {
        double f;
        if (spec.log_axis) f = v <= 0 ? 0.0 : std::clamp((std::log10(v) - lo_exp) / (hi_exp - lo_exp), 0.0, 1.0);
        else f = std::clamp(v / ymax, 0.0, 1.0);
        return kTop + plot_h * (1.0 - f);
    };

    std::string svg = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
        "font-family=\"sans-serif\" font-size=\"12\">\n"
        "<!-- config_hash={2} -->\n"
        "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        "<text x=\"{3}\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">{4}</text>\n",
        kWidth, kHeight, config_hash, num(kWidth / 2), spec.title);

    // axis and ticks
    svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", kLeft, kTop,
                       kTop + plot_h);
    svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n", kLeft, kTop + plot_h,
                       kLeft + plot_w);
    if (spec.log_axis) {
        for (double e = lo_exp; e <= hi_exp; e += 1) {
            const double y = y_of(std::pow(10.0, e));
            svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"#ddd\"/>"
                               "<text x=\"{3}\" y=\"{4}\" text-anchor=\"end\">1e{5}</text>\n",
                               kLeft, num(y), kLeft + plot_w, kLeft - 6, num(y + 4), static_cast<int>(e));
        }
    } else {
        for (int i = 0; i <= 5; ++i) {
            const double v = ymax * i / 5.0;
            const double y = y_of(v);
            svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"#ddd\"/>"
                               "<text x=\"{3}\" y=\"{4}\" text-anchor=\"end\">{5:.3g}</text>\n",
                               kLeft, num(y), kLeft + plot_w, kLeft - 6, num(y + 4), v);
        }
    }
    svg += fmt::format("<text x=\"16\" y=\"{0}\" transform=\"rotate(-90 16 {0})\" text-anchor=\"middle\">{1}</text>\n",
                       num(kTop + plot_h / 2), spec.unit);

    const double group_w = plot_w / static_cast<double>(groups.size());
    const double bar_w = group_w * 0.7 / static_cast<double>(plan_list.size());
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const double gx = kLeft + group_w * static_cast<double>(g) + group_w * 0.15;
        const std::string label = groups[g] == kCombined ? std::string("combined") : "interval " + groups[g];
        svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", num(gx + group_w * 0.35),
                           num(kTop + plot_h + 18), label);
        for (std::size_t p = 0; p < plan_list.size(); ++p) {
            if (!bars[g][p]) continue;
            const Bar& b = *bars[g][p];
            const double x = gx + bar_w * static_cast<double>(p);
            const double y = y_of(b.mean);
            svg += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"><title>{} {}: {:.6g}</title></rect>\n",
                               num(x), num(y), num(bar_w * 0.92), num(kTop + plot_h - y), kPlanColors[p % 4],
                               plan_list[p], label, b.mean);
            const double cx = x + bar_w * 0.46;
            svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", num(cx),
                               num(y_of(b.lo)), num(y_of(b.hi)));
        }
    }
    for (std::size_t p = 0; p < plan_list.size(); ++p) {
        const double lx = kLeft + 10 + 110 * static_cast<double>(p);
        svg += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"12\" height=\"12\" fill=\"{}\"/>"
                           "<text x=\"{}\" y=\"{}\">{}</text>\n",
                           num(lx), num(kHeight - 24), kPlanColors[p % 4], num(lx + 16), num(kHeight - 14),
                           plan_list[p]);
    }
    svg += "</svg>\n";
    return svg;
}

std::vector<std::filesystem::path> write_charts(const MetricTable& table, const std::filesystem::path& dir,
                                                std::string_view config_hash,
                                                const std::function<void(const std::string&)>& log) {
    std::vector<std::filesystem::path> written;
    for (const ChartSpec& spec : chart_specs()) {
        const std::string svg = render_chart(table, spec, config_hash);
        if (svg.empty()) {
            if (log) log(fmt::format("chart {} omitted: no {} {} rows", spec.file, spec.profile, spec.metric));
            continue;
        }
        write_file(dir / spec.file, svg);
        written.push_back(dir / spec.file);
    }
    return written;
}

std::string format_targets(std::span<const TargetRow> rows, std::string_view config_hash) {
    std::string out = fmt::format("# config_hash={}\n{:<5} {:<58} {:<52} {:>12}  {}\n", config_hash, "id",
                                  "quantity", "target", "obtained", "result");
    for (const auto& r : rows)
        out += fmt::format("{:<5} {:<58} {:<52} {:>12}  {}\n", r.criterion, r.description, r.target,
                           r.obtained ? fmt::format("{:.4g}", *r.obtained) : std::string("-"), r.pass ? "PASS" : "FAIL");
    return out;
}

}  // namespace nrslice
