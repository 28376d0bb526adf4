#pragma once

// Exhaustive outcome distribution of the preamble-level RA procedure for tiny
// instances. Written independently of simulate_rach: every preamble assignment
// is enumerated, and each collided UE's continuous backoff is integrated into
// the probability of landing on each later RA slot.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "nrslice/rach.hpp"

namespace nrslice::oracle {

/// Per-UE result: attempts used, and the RAR time in ns or -1 when blocked.
struct UeOutcome {
    int attempts = 0;
    std::int64_t success_ns = -1;
    auto operator<=>(const UeOutcome&) const = default;
};

/// Outcome of a whole run: UE results sorted, so UEs are exchangeable.
using Outcome = std::vector<UeOutcome>;
using Distribution = std::map<Outcome, double>;

struct Instance {
    int n = 1;
    int preambles = 1;
    int max_attempts = 1;
    RaSlotPattern pattern{1, {1}};
    std::int64_t feedback_ns = 2'000'000;   // collision learned this long after the slot
    std::int64_t rar_delay_ns = 2'000'000;  // RAR reception after the slot
    std::int64_t backoff_ns = 20'000'000;
};

namespace detail {

struct Ue {
    int attempts = 0;
    std::int64_t next_slot = 0;  // RA slot of the next attempt
    UeOutcome out;
    bool done = false;
};

inline std::int64_t next_slot(const RaSlotPattern& p, std::int64_t t) { return next_ra_slot(p, SimTime{t}).ns; }

/// P(next RA slot at or after f + U[0, B] is r) for each reachable r.
inline std::vector<std::pair<std::int64_t, double>> landing(const Instance& in, std::int64_t f) {
    std::vector<std::pair<std::int64_t, double>> out;
    if (in.backoff_ns == 0) {
        out.emplace_back(next_slot(in.pattern, f), 1.0);
        return out;
    }
    std::int64_t lo = f;  // eligible times in (lo, r] land on r; the first slot also takes t = f
    std::int64_t r = next_slot(in.pattern, f);
    while (lo < f + in.backoff_ns) {
        const std::int64_t hi = std::min(r, f + in.backoff_ns);
        out.emplace_back(r, static_cast<double>(hi - lo) / static_cast<double>(in.backoff_ns));
        lo = r;
        r = next_slot(in.pattern, r + 1);
    }
    return out;
}

inline void recurse(const Instance& in, std::vector<Ue> ues, double prob, Distribution& dist);

inline void land(const Instance& in, std::vector<Ue>& ues, const std::vector<std::size_t>& backoff, std::size_t k,
                 const std::vector<std::pair<std::int64_t, double>>& opts, double prob, Distribution& dist) {
    if (k == backoff.size()) {
        recurse(in, ues, prob, dist);
        return;
    }
    for (const auto& [slot, p] : opts) {
        ues[backoff[k]].next_slot = slot;
        land(in, ues, backoff, k + 1, opts, prob * p, dist);
    }
}

inline void recurse(const Instance& in, std::vector<Ue> ues, double prob, Distribution& dist) {
    std::int64_t t = INT64_MAX;
    for (const auto& u : ues)
        if (!u.done) t = std::min(t, u.next_slot);
    if (t == INT64_MAX) {
        Outcome o;
        for (const auto& u : ues) o.push_back(u.out);
        std::sort(o.begin(), o.end());
        dist[o] += prob;
        return;
    }
    std::vector<std::size_t> group;
    for (std::size_t i = 0; i < ues.size(); ++i)
        if (!ues[i].done && ues[i].next_slot == t) group.push_back(i);

    std::int64_t combos = 1;
    for (std::size_t i = 0; i < group.size(); ++i) combos *= in.preambles;
    const double p_assign = prob / static_cast<double>(combos);
    std::vector<int> choice(group.size());
    for (std::int64_t c = 0; c < combos; ++c) {
        std::int64_t x = c;
        for (auto& ch : choice) {
            ch = static_cast<int>(x % in.preambles);
            x /= in.preambles;
        }
        std::vector<Ue> next = ues;
        std::vector<std::size_t> backoff;
        for (std::size_t k = 0; k < group.size(); ++k) {
            Ue& u = next[group[k]];
            ++u.attempts;
            u.out.attempts = u.attempts;
            const auto same = std::count(choice.begin(), choice.end(), choice[k]);
            if (same == 1) {
                u.done = true;
                u.out.success_ns = t + in.rar_delay_ns;
            } else if (u.attempts >= in.max_attempts) {
                u.done = true;
            } else {
                backoff.push_back(group[k]);
            }
        }
        land(in, next, backoff, 0, landing(in, t + in.feedback_ns), p_assign, dist);
    }
}

}  // namespace detail

/// All UEs arrive at t = 0.
inline Distribution enumerate(const Instance& in) {
    std::vector<detail::Ue> ues(static_cast<std::size_t>(in.n));
    for (auto& u : ues) u.next_slot = detail::next_slot(in.pattern, 0);
    Distribution dist;
    detail::recurse(in, ues, 1.0, dist);
    return dist;
}

/// Same outcome encoding for a simulated run.
inline Outcome outcome_of(const RaResults& r) {
    Outcome o;
    for (const auto& ue : r.ues)
        o.push_back({ue.attempts, ue.success_time ? ue.success_time->ns : -1});
    std::sort(o.begin(), o.end());
    return o;
}

struct Comparison {
    std::size_t categories = 0;    // categories tested on their own
    std::size_t worst_index = 0;
    double worst_z = 0.0;          // largest |observed - expected| / standard error
    double unexpected = 0.0;       // empirical mass on outcomes the oracle says are impossible
};

/// Compares empirical frequencies with `dist`. Categories with an expected
/// count below `min_expected` are pooled into one bucket.
inline Comparison compare(const Distribution& dist, const std::map<Outcome, int>& counts, int trials,
                          double min_expected = 5.0) {
    Comparison c;
    double pooled_p = 0.0;
    int pooled_n = 0;
    auto check = [&](double p, int n) {
        const double se = std::sqrt(p * (1.0 - p) / trials);
        const double diff = std::abs(static_cast<double>(n) / trials - p);
        const double z = se > 0 ? diff / se : (diff < 1e-12 ? 0.0 : 1e9);
        if (z > c.worst_z) {
            c.worst_z = z;
            c.worst_index = c.categories;
        }
        ++c.categories;
    };
    for (const auto& [o, p] : dist) {
        auto it = counts.find(o);
        const int n = it == counts.end() ? 0 : it->second;
        if (p * trials < min_expected) {
            pooled_p += p;
            pooled_n += n;
        } else {
            check(p, n);
        }
    }
    for (const auto& [o, n] : counts)
        if (!dist.contains(o)) c.unexpected += static_cast<double>(n) / trials;
    if (pooled_p > 0.0) check(pooled_p, pooled_n);
    return c;
}

}  // namespace nrslice::oracle
