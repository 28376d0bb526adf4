#include "nrslice/mobility.hpp"

#include <algorithm>
#include <cmath>

namespace nrslice {

Mobile::Mobile(const Floorplan& floorplan, const RouteClass& route, double speed_mps, double height_m, Rng rng)
    : floorplan_(&floorplan), route_(route), speed_(speed_mps), height_(height_m), rng_(rng) {
    pos_ = pick(route_.from);
    enter(Phase::kOutbound);
}

Position3D Mobile::pick(Site site) {
    const auto& pts = floorplan_->points(site);
    Position3D p = pts[rng_.uniform_index(pts.size())];
    p.z = height_;
    return p;
}

SimTime Mobile::travel_time(const Position3D& a, const Position3D& b) const {
    return SimTime::from_s(distance_3d(a, b) / speed_);
}

void Mobile::enter(Phase phase) {
    phase_ = phase;
    const SimTime period = SimTime::from_s(route_.period_s);
    switch (phase) {
        case Phase::kOutbound:
            cycle_elapsed_ = SimTime{0};
            leg_start_ = pos_;
            leg_end_ = pick(route_.to);
            leg_duration_ = travel_time(leg_start_, leg_end_);
            remaining_ = leg_duration_;
            break;
        case Phase::kDwellTo: {
            // half of the slack now, the rest is settled at the far end once the return leg is known
            const SimTime slack = period - leg_duration_ * 2;
            remaining_ = slack.ns > 0 ? SimTime{slack.ns / 2} : SimTime{0};
            break;
        }
        case Phase::kReturn:
            leg_start_ = pos_;
            leg_end_ = pick(route_.from);
            leg_duration_ = travel_time(leg_start_, leg_end_);
            remaining_ = leg_duration_;
            break;
        case Phase::kDwellFrom: {
            const SimTime left = period - cycle_elapsed_;
            remaining_ = left.ns > 0 ? left : SimTime{0};
            break;
        }
    }
}

Position3D Mobile::advance(SimTime dt) {
    while (dt.ns > 0 || remaining_.ns == 0) {
        const SimTime step = std::min(dt, remaining_);
        dt -= step;
        remaining_ -= step;
        cycle_elapsed_ += step;
        const bool moving = phase_ == Phase::kOutbound || phase_ == Phase::kReturn;
        if (moving && leg_duration_.ns > 0) {
            const double f = 1.0 - static_cast<double>(remaining_.ns) / static_cast<double>(leg_duration_.ns);
            pos_ = {leg_start_.x + f * (leg_end_.x - leg_start_.x), leg_start_.y + f * (leg_end_.y - leg_start_.y),
                    leg_start_.z + f * (leg_end_.z - leg_start_.z)};
        }
        if (remaining_.ns > 0) break;
        switch (phase_) {
            case Phase::kOutbound: pos_ = leg_end_; enter(Phase::kDwellTo); break;
            case Phase::kDwellTo: enter(Phase::kReturn); break;
            case Phase::kReturn: pos_ = leg_end_; ++round_trips_; enter(Phase::kDwellFrom); break;
            case Phase::kDwellFrom: enter(Phase::kOutbound); break;
        }
        if (dt.ns == 0 && remaining_.ns > 0) break;
    }
    return pos_;
}

Position3D Trajectory::at(SimTime t) const {
    if (points_.empty()) return {};
    if (t <= points_.front().t) return points_.front().p;
    if (t >= points_.back().t) return points_.back().p;
    auto it = std::upper_bound(points_.begin(), points_.end(), t,
                               [](SimTime v, const Waypoint& w) { return v < w.t; });
    const Waypoint& b = *it;
    const Waypoint& a = *(it - 1);
    const double f = static_cast<double>((t - a.t).ns) / static_cast<double>((b.t - a.t).ns);
    return {a.p.x + f * (b.p.x - a.p.x), a.p.y + f * (b.p.y - a.p.y), a.p.z + f * (b.p.z - a.p.z)};
}

Trajectory record_trajectory(Mobile mobile, SimTime start, SimTime end) {
    std::vector<Trajectory::Waypoint> pts;
    SimTime t = start;
    pts.push_back({t, mobile.position()});
    while (t < end) {
        const SimTime step = std::min(mobile.time_to_next_event(), end - t);
        t += step;
        pts.push_back({t, mobile.advance(step)});
    }
    return Trajectory(std::move(pts));
}

}  // namespace nrslice
