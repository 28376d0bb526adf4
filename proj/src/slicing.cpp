#include "nrslice/slicing.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nrslice/error.hpp"

namespace nrslice {

std::string_view to_string(Profile p) {
    switch (p) {
        case Profile::kEmbb: return "eMBB";
        case Profile::kUrllc: return "URLLC";
        case Profile::kMmtc: return "mMTC";
    }
    return "?";
}

Profile profile_from_string(std::string_view s) {
    for (auto p : kProfiles) {
        if (to_string(p) == s) return p;
    }
    throw ConfigError("unknown profile '" + std::string(s) + "'");
}

std::string_view to_string(PlanMode m) { return m == PlanMode::kStatic ? "static" : "dynamic"; }

PlanMode plan_mode_from_string(std::string_view s) {
    if (s == "static") return PlanMode::kStatic;
    if (s == "dynamic") return PlanMode::kDynamic;
    throw ConfigError("unknown plan '" + std::string(s) + "'");
}

std::vector<Split> default_splits(PlanMode mode) {
    if (mode == PlanMode::kStatic) return {{0.55, 0.30, 0.15}};
    return {{0.40, 0.30, 0.30}, {0.30, 0.60, 0.10}, {0.70, 0.20, 0.10}};
}

namespace {

SliceSet make_slice_set(const Split& split, const CarrierConfig& carrier, std::size_t interval) {
    const std::string where = "interval " + std::to_string(interval + 1);
    double sum = 0.0;
    for (double f : split) {
        if (!(f > 0.0)) throw ConfigError("fractions must be positive", where);
        sum += f;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw ConfigError("fractions sum to " + std::to_string(sum) + ", expected 1", where);
    }
    SliceSet set;
    for (auto p : kProfiles) {
        const auto i = static_cast<std::size_t>(p);
        SliceConfig& s = set[i];
        s.profile = p;
        s.bandwidth_fraction = split[i];
        s.numerology = Numerology(carrier.numerology[i]);
        s.direction = p == Profile::kMmtc ? Direction::kUplink : Direction::kDownlink;
        s.bandwidth_hz = split[i] * carrier.bandwidth_hz;
        s.prbs = prb_count(s.bandwidth_hz, s.numerology, carrier.guard_fraction);
        if (s.prbs == 0) {
            throw SliceTooNarrow("slice too narrow: " + std::string(to_string(p)) + " gets 0 PRBs", where);
        }
    }
    return set;
}

}  // namespace

SlicePlan build_slice_plan(PlanMode mode, std::span<const Split> splits, const CarrierConfig& carrier) {
    SlicePlan plan;
    plan.mode = mode;
    plan.interval_duration = carrier.interval_duration;
    if (carrier.intervals == 0) throw ConfigError("at least one interval required", "intervals");
    if (mode == PlanMode::kStatic) {
        if (splits.size() != 1) throw ConfigError("static plan takes exactly one split", "slices.static");
        const SliceSet set = make_slice_set(splits[0], carrier, 0);
        plan.intervals.assign(carrier.intervals, set);
    } else {
        if (splits.size() != carrier.intervals) {
            throw ConfigError("dynamic plan needs one split per interval", "slices.dynamic");
        }
        for (std::size_t i = 0; i < splits.size(); ++i) plan.intervals.push_back(make_slice_set(splits[i], carrier, i));
    }
    return plan;
}

SlicePlan build_slice_plan(PlanMode mode, const CarrierConfig& carrier) {
    auto splits = default_splits(mode);
    if (mode == PlanMode::kDynamic && splits.size() != carrier.intervals) {
        throw ConfigError("default dynamic splits cover 3 intervals", "slices.dynamic");
    }
    return build_slice_plan(mode, splits, carrier);
}

std::optional<std::size_t> interval_at(const SlicePlan& plan, SimTime t) {
    if (t.ns < 0) return std::nullopt;
    const auto idx = static_cast<std::size_t>(t.ns / plan.interval_duration.ns);
    if (idx >= plan.intervals.size()) return std::nullopt;
    return idx;
}

std::optional<SliceSet> slices_at(const SlicePlan& plan, SimTime t) {
    const auto idx = interval_at(plan, t);
    if (!idx) return std::nullopt;
    return plan.intervals[*idx];
}

std::vector<Grant> RoundRobinScheduler::allocate(std::span<const int> demand_prbs, int capacity_prbs) {
    std::vector<Grant> grants;
    const std::size_t n = std::min(num_devices_, demand_prbs.size());
    order_.clear();
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t d = (cursor_ + k) % n;
        if (demand_prbs[d] > 0) order_.push_back(d);
    }
    if (num_devices_ > 0) cursor_ = (cursor_ + 1) % num_devices_;
    if (order_.empty() || capacity_prbs <= 0) return grants;

    granted_.assign(n, 0);
    int remaining = capacity_prbs;
    std::vector<std::size_t> open = order_;
    while (!open.empty() && remaining > 0) {
        const int share = remaining / static_cast<int>(open.size());
        if (share == 0) {
            for (std::size_t k = 0; k < open.size() && remaining > 0; ++k, --remaining) granted_[open[k]] += 1;
            break;
        }
        bool capped = false;
        std::vector<std::size_t> still_open;
        for (auto d : open) {
            if (demand_prbs[d] - granted_[d] <= share) {
                remaining -= demand_prbs[d] - granted_[d];
                granted_[d] = demand_prbs[d];
                capped = true;
            } else {
                still_open.push_back(d);
            }
        }
        open.swap(still_open);
        if (capped) continue;
        int extra = remaining - share * static_cast<int>(open.size());
        for (auto d : open) {
            granted_[d] += share + (extra > 0 ? 1 : 0);
            if (extra > 0) --extra;
        }
        remaining = 0;
    }
    for (auto d : order_) {
        if (granted_[d] > 0) grants.push_back({d, granted_[d]});
    }
    return grants;
}

std::int64_t tb_bits(int prbs, double se_bps_hz) {
    if (prbs <= 0 || se_bps_hz <= 0.0) return 0;
    return static_cast<std::int64_t>(std::floor(prbs * bits_per_prb(se_bps_hz) + 1e-9));
}

double BlerModel::bler(double sinr_db, double mcs_sinr_db) const {
    const double threshold = mcs_sinr_db - margin_db;
    return std::clamp(0.5 * std::exp(-(sinr_db - threshold)), floor, ceiling);
}

}  // namespace nrslice
