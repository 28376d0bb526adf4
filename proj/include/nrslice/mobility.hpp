#pragma once

#include <vector>

#include "nrslice/channel.hpp"
#include "nrslice/rng.hpp"
#include "nrslice/scenario.hpp"
#include "nrslice/timebase.hpp"

namespace nrslice {

/// Device moving round trips from a `from` site point to a random `to` site
/// point and back to a random `from` point, at constant speed. Dwell times at
/// both ends are stretched so each round trip takes `route.period_s` whenever
/// travel alone is shorter than that.
class Mobile {
public:
    Mobile(const Floorplan& floorplan, const RouteClass& route, double speed_mps, double height_m, Rng rng);

    const Position3D& position() const { return pos_; }
    int round_trips() const { return round_trips_; }

    /// Moves the device forward by `dt`, walking through any arrivals and
    /// target selections on the way. Returns the new position.
    Position3D advance(SimTime dt);

    /// Time until the next arrival or end of dwell.
    SimTime time_to_next_event() const { return remaining_; }

private:
    enum class Phase { kOutbound, kDwellTo, kReturn, kDwellFrom };

    Position3D pick(Site site);
    void enter(Phase phase);
    SimTime travel_time(const Position3D& a, const Position3D& b) const;

    const Floorplan* floorplan_;
    RouteClass route_;
    double speed_;
    double height_;
    Rng rng_;
    Phase phase_ = Phase::kDwellFrom;
    Position3D pos_;
    Position3D leg_start_;
    Position3D leg_end_;
    SimTime leg_duration_{};
    SimTime remaining_{};
    SimTime cycle_elapsed_{};
    int round_trips_ = 0;
};

/// Piecewise-linear path sampled at every mobility event.
class Trajectory {
public:
    struct Waypoint {
        SimTime t;
        Position3D p;
    };

    Trajectory() = default;
    explicit Trajectory(std::vector<Waypoint> points) : points_(std::move(points)) {}
    /// A device that never moves.
    static Trajectory fixed(const Position3D& p) { return Trajectory({{SimTime{0}, p}}); }

    Position3D at(SimTime t) const;
    const std::vector<Waypoint>& points() const { return points_; }

private:
    std::vector<Waypoint> points_;
};

/// Runs `mobile` over [start, end) and records its path.
Trajectory record_trajectory(Mobile mobile, SimTime start, SimTime end);

}  // namespace nrslice
