#include "nrslice/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "nrslice/error.hpp"

namespace nrslice {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, kNumSites> kSiteNames = {"P1", "P2", "P3", "P4", "P5"};

std::string join(const std::string& path, std::string_view key) {
    return path.empty() ? std::string(key) : path + "." + std::string(key);
}

/// Wraps a JSON object and tracks which keys were consumed so leftovers can be
/// reported as unknown fields.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError("expected an object", path_);
    }

    bool has(std::string_view key) const { return j_.contains(key); }
    const std::string& path() const { return path_; }

    const json& raw(std::string_view key) {
        seen_.insert(std::string(key));
        return j_.at(std::string(key));
    }

    double number(std::string_view key, double fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_number()) throw ConfigError("expected a number", join(path_, key));
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw ConfigError("expected a finite number", join(path_, key));
        return d;
    }

    int count(std::string_view key, int fallback) {
        if (!has(key)) return fallback;
        return as_count(raw(key), join(path_, key));
    }

    std::string text(std::string_view key, std::string fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_string()) throw ConfigError("expected a string", join(path_, key));
        return v.get<std::string>();
    }

    Reader child(std::string_view key) { return Reader(raw(key), join(path_, key)); }

    void finish() const {
        for (const auto& [k, _] : j_.items()) {
            if (!seen_.contains(k)) throw ConfigError("unknown field", join(path_, k));
        }
    }

    static int as_count(const json& v, const std::string& path) {
        if (v.is_number_float()) throw ConfigError("count must be an integer, got a fractional value", path);
        if (!v.is_number_integer()) throw ConfigError("expected an integer", path);
        const auto n = v.get<std::int64_t>();
        if (n < 0) throw ConfigError("count must be non-negative", path);
        if (n > 1'000'000'000) throw ConfigError("count too large", path);
        return static_cast<int>(n);
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

Position3D read_point(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 3) throw ConfigError("expected [x, y, z]", path);
    Position3D p;
    double* dst[3] = {&p.x, &p.y, &p.z};
    for (std::size_t i = 0; i < 3; ++i) {
        if (!v[i].is_number()) throw ConfigError("coordinate must be a number", path);
        *dst[i] = v[i].get<double>();
    }
    return p;
}

json write_point(const Position3D& p) { return json::array({p.x, p.y, p.z}); }

Split read_split(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 3) throw ConfigError("expected [eMBB, URLLC, mMTC] fractions", path);
    Split s{};
    for (std::size_t i = 0; i < 3; ++i) {
        if (!v[i].is_number()) throw ConfigError("fraction must be a number", path);
        s[i] = v[i].get<double>();
    }
    return s;
}

RouteClass read_route(Reader r, RouteClass fallback) {
    RouteClass rc = fallback;
    rc.from = site_from_string(r.text("from", std::string(to_string(fallback.from))));
    rc.to = site_from_string(r.text("to", std::string(to_string(fallback.to))));
    rc.period_s = r.number("period_s", fallback.period_s);
    r.finish();
    return rc;
}

json write_route(const RouteClass& rc) {
    return {{"from", to_string(rc.from)}, {"to", to_string(rc.to)}, {"period_s", rc.period_s}};
}

NetworkSpec read_network(Reader r, const NetworkSpec& d) {
    NetworkSpec n = d;
    n.bandwidth_hz = r.number("bandwidth_hz", d.bandwidth_hz);
    n.guard_fraction = r.number("guard_fraction", d.guard_fraction);
    if (r.has("channel")) {
        Reader c = r.child("channel");
        auto& ch = n.channel;
        ch.frequency_ghz = c.number("frequency_ghz", ch.frequency_ghz);
        ch.k_dh_m = c.number("k_dh_m", ch.k_dh_m);
        ch.sigma_los_db = c.number("sigma_los_db", ch.sigma_los_db);
        ch.sigma_nlos_db = c.number("sigma_nlos_db", ch.sigma_nlos_db);
        ch.noise_figure_dl_db = c.number("noise_figure_dl_db", ch.noise_figure_dl_db);
        ch.noise_figure_ul_db = c.number("noise_figure_ul_db", ch.noise_figure_ul_db);
        ch.gnb_tx_power_dbm = c.number("gnb_tx_power_dbm", ch.gnb_tx_power_dbm);
        ch.ue_tx_power_dbm = c.number("ue_tx_power_dbm", ch.ue_tx_power_dbm);
        ch.se_alpha = c.number("se_alpha", ch.se_alpha);
        ch.se_max = c.number("se_max", ch.se_max);
        ch.sinr_min_db = c.number("sinr_min_db", ch.sinr_min_db);
        c.finish();
    }
    if (r.has("pipeline")) {
        Reader p = r.child("pipeline");
        auto& pl = n.pipeline;
        pl.mac_to_phy_slots = p.count("mac_to_phy_slots", pl.mac_to_phy_slots);
        pl.tb_decode = SimTime::from_ms(p.number("tb_decode_ms", pl.tb_decode.ms()));
        pl.harq_feedback_slots = p.count("harq_feedback_slots", pl.harq_feedback_slots);
        pl.max_harq_retx = p.count("max_harq_retx", pl.max_harq_retx);
        p.finish();
    }
    if (r.has("bler")) {
        Reader b = r.child("bler");
        n.bler.margin_db = b.number("margin_db", n.bler.margin_db);
        n.bler.floor = b.number("floor", n.bler.floor);
        n.bler.ceiling = b.number("ceiling", n.bler.ceiling);
        b.finish();
    }
    r.finish();
    return n;
}

json write_network(const NetworkSpec& n) {
    const auto& ch = n.channel;
    return {
        {"bandwidth_hz", n.bandwidth_hz},
        {"guard_fraction", n.guard_fraction},
        {"channel",
         {{"frequency_ghz", ch.frequency_ghz},
          {"k_dh_m", ch.k_dh_m},
          {"sigma_los_db", ch.sigma_los_db},
          {"sigma_nlos_db", ch.sigma_nlos_db},
          {"noise_figure_dl_db", ch.noise_figure_dl_db},
          {"noise_figure_ul_db", ch.noise_figure_ul_db},
          {"gnb_tx_power_dbm", ch.gnb_tx_power_dbm},
          {"ue_tx_power_dbm", ch.ue_tx_power_dbm},
          {"se_alpha", ch.se_alpha},
          {"se_max", ch.se_max},
          {"sinr_min_db", ch.sinr_min_db}}},
        {"pipeline",
         {{"mac_to_phy_slots", n.pipeline.mac_to_phy_slots},
          {"tb_decode_ms", n.pipeline.tb_decode.ms()},
          {"harq_feedback_slots", n.pipeline.harq_feedback_slots},
          {"max_harq_retx", n.pipeline.max_harq_retx}}},
        {"bler", {{"margin_db", n.bler.margin_db}, {"floor", n.bler.floor}, {"ceiling", n.bler.ceiling}}},
    };
}

SlicesSpec read_slices(Reader r, const SlicesSpec& d) {
    SlicesSpec s = d;
    if (r.has("numerology")) {
        Reader m = r.child("numerology");
        for (auto p : kProfiles) {
            auto& mu = s.numerology[static_cast<std::size_t>(p)];
            mu = m.count(to_string(p), mu);
        }
        m.finish();
    }
    if (r.has("static")) s.static_split = read_split(r.raw("static"), join(r.path(), "static"));
    if (r.has("dynamic")) {
        const json& v = r.raw("dynamic");
        const std::string path = join(r.path(), "dynamic");
        if (!v.is_array()) throw ConfigError("expected a list of splits", path);
        s.dynamic_splits.clear();
        for (std::size_t i = 0; i < v.size(); ++i) {
            s.dynamic_splits.push_back(read_split(v[i], fmt::format("{}[{}]", path, i)));
        }
    }
    r.finish();
    return s;
}

json write_slices(const SlicesSpec& s) {
    json numerology;
    for (auto p : kProfiles) numerology[std::string(to_string(p))] = s.numerology[static_cast<std::size_t>(p)];
    json dynamic = json::array();
    for (const auto& sp : s.dynamic_splits) dynamic.push_back(sp);
    return {{"numerology", numerology}, {"static", s.static_split}, {"dynamic", dynamic}};
}

RachSpec read_rach(Reader r, const RachSpec& d) {
    RachSpec s = d;
    auto& b = s.base;
    b.num_preambles = r.count("num_preambles", b.num_preambles);
    b.preamble_trans_max = r.count("preamble_trans_max", b.preamble_trans_max);
    b.rar_window = SimTime::from_ms(r.number("rar_window_ms", b.rar_window.ms()));
    b.backoff_indicator = SimTime::from_ms(r.number("backoff_indicator_ms", b.backoff_indicator.ms()));
    b.rar_processing_delay = SimTime::from_ms(r.number("rar_processing_delay_ms", b.rar_processing_delay.ms()));
    b.collision_feedback = collision_feedback_from_string(
        r.text("collision_feedback", std::string(to_string(b.collision_feedback))));
    if (r.has("patterns")) {
        Reader p = r.child("patterns");
        s.patterns.clear();
        for (const auto& [key, _] : r.raw("patterns").items()) {
            const std::string path = join(p.path(), key);
            int index = 0;
            try {
                std::size_t used = 0;
                index = std::stoi(key, &used);
                if (used != key.size()) throw std::invalid_argument(key);
            } catch (const std::exception&) {
                throw ConfigError("pattern key must be a PRACH configuration index", path);
            }
            Reader e = p.child(key);
            RaSlotPattern pat;
            pat.period_frames = e.count("period_frames", 1);
            const json& sf = e.raw("subframes");
            if (!sf.is_array()) throw ConfigError("expected a list of subframes", join(path, "subframes"));
            for (const auto& v : sf) pat.subframes.push_back(Reader::as_count(v, join(path, "subframes")));
            e.finish();
            s.patterns[index] = pat;
        }
        p.finish();
    }
    r.finish();
    return s;
}

json write_rach(const RachSpec& s) {
    json patterns = json::object();
    for (const auto& [idx, pat] : s.patterns) {
        patterns[std::to_string(idx)] = {{"period_frames", pat.period_frames}, {"subframes", pat.subframes}};
    }
    const auto& b = s.base;
    return {
        {"num_preambles", b.num_preambles},
        {"preamble_trans_max", b.preamble_trans_max},
        {"rar_window_ms", b.rar_window.ms()},
        {"backoff_indicator_ms", b.backoff_indicator.ms()},
        {"rar_processing_delay_ms", b.rar_processing_delay.ms()},
        {"collision_feedback", to_string(b.collision_feedback)},
        {"patterns", patterns},
    };
}

Floorplan read_floorplan(Reader r, const Floorplan& d) {
    Floorplan f = d;
    if (r.has("bounds")) f.bounds = read_point(r.raw("bounds"), join(r.path(), "bounds"));
    if (r.has("gnb")) f.gnb = read_point(r.raw("gnb"), join(r.path(), "gnb"));
    if (r.has("sites")) {
        Reader s = r.child("sites");
        for (std::size_t i = 0; i < kNumSites; ++i) {
            if (!s.has(kSiteNames[i])) continue;
            const json& v = s.raw(kSiteNames[i]);
            const std::string path = join(s.path(), kSiteNames[i]);
            if (!v.is_array()) throw ConfigError("expected a list of points", path);
            f.sites[i].clear();
            for (std::size_t k = 0; k < v.size(); ++k) {
                f.sites[i].push_back(read_point(v[k], fmt::format("{}[{}]", path, k)));
            }
        }
        s.finish();
    }
    if (r.has("racks")) {
        const json& v = r.raw("racks");
        const std::string path = join(r.path(), "racks");
        if (!v.is_array()) throw ConfigError("expected a list of racks", path);
        f.racks.clear();
        for (std::size_t k = 0; k < v.size(); ++k) {
            Reader b(v[k], fmt::format("{}[{}]", path, k));
            Box box{read_point(b.raw("min"), b.path() + ".min"), read_point(b.raw("max"), b.path() + ".max")};
            b.finish();
            f.racks.push_back(box);
        }
    }
    r.finish();
    return f;
}

json write_floorplan(const Floorplan& f) {
    json sites;
    for (std::size_t i = 0; i < kNumSites; ++i) {
        json pts = json::array();
        for (const auto& p : f.sites[i]) pts.push_back(write_point(p));
        sites[std::string(kSiteNames[i])] = pts;
    }
    json racks = json::array();
    for (const auto& b : f.racks) racks.push_back({{"min", write_point(b.min)}, {"max", write_point(b.max)}});
    return {{"bounds", write_point(f.bounds)}, {"gnb", write_point(f.gnb)}, {"sites", sites}, {"racks", racks}};
}

FleetSpec read_fleet(Reader r, const FleetSpec& d) {
    FleetSpec f = d;
    f.workers = r.count("workers", d.workers);
    f.smart_tags = r.count("smart_tags", d.smart_tags);
    f.max_agvs = r.count("max_agvs", d.max_agvs);
    f.agv_height_m = r.number("agv_height_m", d.agv_height_m);
    f.worker_height_m = r.number("worker_height_m", d.worker_height_m);
    f.agv_speed_mps = r.number("agv_speed_mps", d.agv_speed_mps);
    f.worker_speed_mps = r.number("worker_speed_mps", d.worker_speed_mps);
    if (r.has("worker_route")) f.worker_route = read_route(r.child("worker_route"), d.worker_route);
    f.embb_packet_bytes = r.count("embb_packet_bytes", d.embb_packet_bytes);
    f.urllc_packet_bytes = r.count("urllc_packet_bytes", d.urllc_packet_bytes);
    f.urllc_rate_hz = r.number("urllc_rate_hz", d.urllc_rate_hz);
    f.mmtc_packet_bytes = r.count("mmtc_packet_bytes", d.mmtc_packet_bytes);
    f.mmtc_report_period_s = r.number("mmtc_report_period_s", d.mmtc_report_period_s);
    r.finish();
    return f;
}

json write_fleet(const FleetSpec& f) {
    return {
        {"workers", f.workers},
        {"smart_tags", f.smart_tags},
        {"max_agvs", f.max_agvs},
        {"agv_height_m", f.agv_height_m},
        {"worker_height_m", f.worker_height_m},
        {"agv_speed_mps", f.agv_speed_mps},
        {"worker_speed_mps", f.worker_speed_mps},
        {"worker_route", write_route(f.worker_route)},
        {"embb_packet_bytes", f.embb_packet_bytes},
        {"urllc_packet_bytes", f.urllc_packet_bytes},
        {"urllc_rate_hz", f.urllc_rate_hz},
        {"mmtc_packet_bytes", f.mmtc_packet_bytes},
        {"mmtc_report_period_s", f.mmtc_report_period_s},
    };
}

IntervalSpec read_interval(Reader r, const IntervalSpec& d) {
    IntervalSpec iv = d;
    iv.duration_s = r.number("duration_s", d.duration_s);
    iv.agvs = r.count("agvs", d.agvs);
    if (r.has("agv_route")) iv.agv_route = read_route(r.child("agv_route"), d.agv_route);
    iv.worker_rate_bps = r.number("worker_rate_bps", d.worker_rate_bps);
    iv.mmtc_arrivals = r.count("mmtc_arrivals", d.mmtc_arrivals);
    iv.static_prach_index = r.count("static_prach_index", d.static_prach_index);
    iv.dynamic_prach_index = r.count("dynamic_prach_index", d.dynamic_prach_index);
    r.finish();
    return iv;
}

json write_interval(const IntervalSpec& iv) {
    return {
        {"duration_s", iv.duration_s},
        {"agvs", iv.agvs},
        {"agv_route", write_route(iv.agv_route)},
        {"worker_rate_bps", iv.worker_rate_bps},
        {"mmtc_arrivals", iv.mmtc_arrivals},
        {"static_prach_index", iv.static_prach_index},
        {"dynamic_prach_index", iv.dynamic_prach_index},
    };
}

json to_json(const Scenario& s) {
    json intervals = json::array();
    for (const auto& iv : s.intervals) intervals.push_back(write_interval(iv));
    return {
        {"network", write_network(s.network)},
        {"slices", write_slices(s.slices)},
        {"rach", write_rach(s.rach)},
        {"floorplan", write_floorplan(s.floorplan)},
        {"fleet", write_fleet(s.fleet)},
        {"intervals", intervals},
    };
}

}  // namespace

std::string_view to_string(Site s) { return kSiteNames[static_cast<std::size_t>(s)]; }

Site site_from_string(std::string_view s) {
    for (std::size_t i = 0; i < kNumSites; ++i) {
        if (kSiteNames[i] == s) return static_cast<Site>(i);
    }
    throw ConfigError("unknown site '" + std::string(s) + "' (expected P1-P5)");
}

bool Floorplan::contains(const Position3D& p) const {
    return p.x >= 0.0 && p.y >= 0.0 && p.z >= 0.0 && p.x <= bounds.x && p.y <= bounds.y && p.z <= bounds.z;
}

RachConfig RachSpec::config_for(int prach_index) const {
    RachConfig c = base;
    c.prach_config_index = prach_index;
    c.pattern = pattern_for_index(prach_index, patterns);
    return c;
}

CarrierConfig Scenario::carrier() const {
    CarrierConfig c;
    c.bandwidth_hz = network.bandwidth_hz;
    c.guard_fraction = network.guard_fraction;
    c.numerology = slices.numerology;
    c.intervals = intervals.size();
    c.interval_duration = intervals.empty() ? SimTime{} : SimTime::from_s(intervals.front().duration_s);
    return c;
}

SlicePlan Scenario::plan(PlanMode mode) const {
    if (mode == PlanMode::kStatic) {
        const std::array<Split, 1> one = {slices.static_split};
        return build_slice_plan(mode, one, carrier());
    }
    return build_slice_plan(mode, slices.dynamic_splits, carrier());
}

SimTime Scenario::interval_start(std::size_t i) const {
    return carrier().interval_duration * static_cast<std::int64_t>(i);
}

SimTime Scenario::horizon() const {
    return carrier().interval_duration * static_cast<std::int64_t>(intervals.size());
}

Scenario default_scenario() {
    Scenario s;
    auto& f = s.floorplan;
    // seven 10 x 2 x 6 m racks with 2 m aisles along the west wall
    for (int k = 0; k < 7; ++k) {
        const double y0 = 2.0 + 4.0 * k;
        f.racks.push_back({{4.0, y0, 0.0}, {14.0, y0 + 2.0, 6.0}});
    }
    auto& p = f.sites;
    p[0] = {{39.0, 15.0, 0.0}};                                   // trailer door, +x wall
    p[1] = {{30.0, 13.0, 0.0}, {30.0, 17.0, 0.0}};                // palletizer, pallet side
    p[2] = {{24.0, 13.0, 0.0}, {24.0, 17.0, 0.0}};                // palletizer, parcel side
    for (int k = 0; k < 6; ++k) p[3].push_back({9.0, 5.0 + 4.0 * k, 0.0});  // rack aisles
    p[4] = {{20.0, 0.5, 0.0}, {20.0, 29.5, 0.0}};                 // worker entrances

    IntervalSpec i1;
    i1.agvs = 3;
    i1.agv_route = {Site::kTrailer, Site::kPalletSide, 300.0};
    i1.worker_rate_bps = 4e6;
    i1.mmtc_arrivals = 1000;
    i1.static_prach_index = 19;
    i1.dynamic_prach_index = 22;
    IntervalSpec i2 = i1;
    i2.agvs = 10;
    i2.agv_route = {Site::kParcelSide, Site::kRackAccess, 60.0};
    i2.mmtc_arrivals = 500;
    IntervalSpec i3 = i2;
    i3.agvs = 3;
    i3.worker_rate_bps = 8e6;
    i3.mmtc_arrivals = 250;
    i3.dynamic_prach_index = 16;
    s.intervals = {i1, i2, i3};
    // link-adaptation efficiency for this hall, chosen so the eMBB slice saturates
    // at 8 Mbps per worker but not at 4 Mbps
    s.network.channel.se_alpha = 0.30;
    return s;
}

void validate(const Scenario& s) {
    if (s.intervals.empty()) throw ConfigError("at least one interval required", "intervals");
    const double dur = s.intervals.front().duration_s;
    for (std::size_t i = 0; i < s.intervals.size(); ++i) {
        const auto& iv = s.intervals[i];
        const std::string path = fmt::format("intervals[{}]", i);
        if (iv.duration_s != dur) throw ConfigError("all intervals must have the same duration", path + ".duration_s");
        if (!(iv.duration_s > 0.0) || std::fmod(iv.duration_s * 1000.0, 1.0) != 0.0) {
            throw ConfigError("duration must be a positive whole number of ms", path + ".duration_s");
        }
        if (iv.agvs > s.fleet.max_agvs) throw ConfigError("exceeds fleet.max_agvs", path + ".agvs");
        if (iv.worker_rate_bps < 0.0) throw ConfigError("must be non-negative", path + ".worker_rate_bps");
        if (!(iv.agv_route.period_s > 0.0)) throw ConfigError("must be positive", path + ".agv_route.period_s");
        if (iv.mmtc_arrivals > s.fleet.smart_tags) throw ConfigError("exceeds fleet.smart_tags", path + ".mmtc_arrivals");
        s.rach.config_for(iv.static_prach_index).validate();
        s.rach.config_for(iv.dynamic_prach_index).validate();
        if (iv.agvs > 0) {
            for (Site site : {iv.agv_route.from, iv.agv_route.to}) {
                if (s.floorplan.points(site).empty()) {
                    throw ConfigError("route uses a site with no points", path + ".agv_route");
                }
            }
        }
    }
    for (auto p : kProfiles) {
        const int mu = s.slices.numerology[static_cast<std::size_t>(p)];
        const std::string path = "slices.numerology." + std::string(to_string(p));
        if (mu < 0 || mu > 2) throw ConfigError("data channels in FR1 use mu in [0, 2]", path);
    }
    try {
        (void)s.plan(PlanMode::kStatic);
    } catch (const ConfigError& e) {
        throw ConfigError(e.what(), "slices.static");
    }
    try {
        (void)s.plan(PlanMode::kDynamic);
    } catch (const ConfigError& e) {
        throw ConfigError(e.what(), "slices.dynamic");
    }
    const auto& n = s.network;
    if (!(n.bandwidth_hz > 0.0)) throw ConfigError("must be positive", "network.bandwidth_hz");
    if (n.channel.frequency_ghz < 0.5 || n.channel.frequency_ghz > 100.0) {
        throw ConfigError("must be within 0.5-100 GHz", "network.channel.frequency_ghz");
    }
    if (!(n.channel.k_dh_m > 0.0)) throw ConfigError("must be positive", "network.channel.k_dh_m");
    if (n.pipeline.mac_to_phy_slots < 0 || n.pipeline.harq_feedback_slots < 0 || n.pipeline.tb_decode.ns < 0) {
        throw ConfigError("delays must be non-negative", "network.pipeline");
    }
    const auto& fp = s.floorplan;
    if (!fp.contains(fp.gnb)) throw ConfigError("gNB outside the floorplan", "floorplan.gnb");
    for (std::size_t i = 0; i < kNumSites; ++i) {
        for (const auto& pt : fp.sites[i]) {
            if (!fp.contains(pt)) {
                throw ConfigError("point outside the floorplan", "floorplan.sites." + std::string(kSiteNames[i]));
            }
        }
    }
    for (std::size_t k = 0; k < fp.racks.size(); ++k) {
        if (!fp.contains(fp.racks[k].min) || !fp.contains(fp.racks[k].max)) {
            throw ConfigError("rack outside the floorplan", fmt::format("floorplan.racks[{}]", k));
        }
    }
    if (s.fleet.smart_tags > 0 && fp.racks.empty()) throw ConfigError("smart tags need racks", "floorplan.racks");
    if (s.fleet.workers > 0) {
        for (Site site : {s.fleet.worker_route.from, s.fleet.worker_route.to}) {
            if (fp.points(site).empty()) throw ConfigError("route uses a site with no points", "fleet.worker_route");
        }
    }
    if (!(s.fleet.agv_speed_mps > 0.0) || !(s.fleet.worker_speed_mps > 0.0)) {
        throw ConfigError("speeds must be positive", "fleet");
    }
    if (!(s.fleet.urllc_rate_hz > 0.0)) throw ConfigError("must be positive", "fleet.urllc_rate_hz");
    if (s.fleet.embb_packet_bytes == 0 || s.fleet.urllc_packet_bytes == 0 || s.fleet.mmtc_packet_bytes == 0) {
        throw ConfigError("packet sizes must be positive", "fleet");
    }
    if (s.fleet.agv_height_m > fp.bounds.z || s.fleet.worker_height_m > fp.bounds.z) {
        throw ConfigError("device height above the hall", "fleet");
    }
}

Scenario parse_scenario(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("parse error: ") + e.what());
    }
    const Scenario d = default_scenario();
    Reader root(doc, "");
    Scenario s = d;
    if (root.has("network")) s.network = read_network(root.child("network"), d.network);
    if (root.has("slices")) s.slices = read_slices(root.child("slices"), d.slices);
    if (root.has("rach")) s.rach = read_rach(root.child("rach"), d.rach);
    if (root.has("floorplan")) s.floorplan = read_floorplan(root.child("floorplan"), d.floorplan);
    if (root.has("fleet")) s.fleet = read_fleet(root.child("fleet"), d.fleet);
    if (root.has("intervals")) {
        const json& v = root.raw("intervals");
        if (!v.is_array()) throw ConfigError("expected a list", "intervals");
        s.intervals.clear();
        for (std::size_t i = 0; i < v.size(); ++i) {
            const IntervalSpec fallback = i < d.intervals.size() ? d.intervals[i] : d.intervals.back();
            s.intervals.push_back(read_interval(Reader(v[i], fmt::format("intervals[{}]", i)), fallback));
        }
    }
    root.finish();
    validate(s);
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string serialize_scenario(const Scenario& s) { return to_json(s).dump(2) + "\n"; }

std::string scenario_hash(const Scenario& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : serialize_scenario(s)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return fmt::format("{:016x}", h);
}

}  // namespace nrslice
