#include "apsel/world.hpp"

#include <algorithm>
#include <cmath>

#include "apsel/errors.hpp"

namespace apsel {

namespace {

// Smallest spacing between neighbouring entities on a generated layout.
constexpr double kMinSpacing = 0.5;

bool inside(const Pose& p, double size)
{
    return std::isfinite(p.x) && std::isfinite(p.y) && p.x >= 0.0 && p.x <= size && p.y >= 0.0 && p.y <= size;
}

Pose clamp_to_world(Pose p, double size)
{
    return {std::clamp(p.x, 0.0, size), std::clamp(p.y, 0.0, size)};
}

// Moves `from` toward `to` by at most `step`; lands exactly on `to` when in reach.
Pose advance(const Pose& from, const Pose& to, double step, bool& reached)
{
    double d = distance(from, to);
    if (d <= step) {
        reached = true;
        return to;
    }
    reached = false;
    double f = step / d;
    return {from.x + (to.x - from.x) * f, from.y + (to.y - from.y) * f};
}

void place_vehicles(Scenario& s)
{
    double spacing = s.world_size_m / static_cast<double>(s.n_vehicles + 1);
    if (spacing < kMinSpacing)
        throw DomainError("scenario: too many vehicles for the world size");
    for (std::size_t i = 0; i < s.n_vehicles; ++i) {
        double y = spacing * static_cast<double>(i + 1);
        s.vehicle_starts.push_back({0.0, y});
        s.vehicle_targets.push_back({s.world_size_m, y});
    }
}

void check_counts(std::size_t n_vehicles, std::size_t n_aps, double world_size)
{
    if (n_vehicles == 0 || n_aps == 0)
        throw DomainError("scenario: need at least one vehicle and one AP");
    if (!(world_size > 0.0))
        throw DomainError("scenario: world size must be positive");
}

}  // namespace

double distance(const Pose& a, const Pose& b)
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

std::string to_string(ScenarioName name)
{
    switch (name) {
    case ScenarioName::Scenario1: return "scenario1";
    case ScenarioName::Scenario2: return "scenario2";
    case ScenarioName::Custom: return "custom";
    }
    return "custom";
}

void Scenario::validate() const
{
    if (!(world_size_m > 0.0))
        throw DomainError("scenario: world size must be positive");
    if (n_vehicles == 0 || n_aps == 0)
        throw DomainError("scenario: need at least one vehicle and one AP");
    if (vehicle_starts.size() != n_vehicles || vehicle_targets.size() != n_vehicles)
        throw DomainError("scenario: vehicle start/target lists must have n_vehicles entries");
    if (ap_starts.size() != n_aps)
        throw DomainError("scenario: ap_starts must have n_aps entries");
    for (const auto* list : {&vehicle_starts, &vehicle_targets, &ap_starts})
        for (const Pose& p : *list)
            if (!inside(p, world_size_m))
                throw DomainError("scenario: pose outside the world");
    if (max_steps == 0)
        throw DomainError("scenario: max_steps must be positive");
    if (!(dt_s > 0.0))
        throw DomainError("scenario: dt must be positive");
    if (!(vehicle_speed_mps > 0.0))
        throw DomainError("scenario: vehicle speed must be positive");
    if (!(ap_speed_mps >= 0.0))
        throw DomainError("scenario: AP speed must be non-negative");
    if (!(goal_radius_m >= 0.0))
        throw DomainError("scenario: goal radius must be non-negative");
}

Scenario make_scenario1(std::size_t n_vehicles, std::size_t n_aps, double world_size)
{
    check_counts(n_vehicles, n_aps, world_size);
    Scenario s;
    s.name = ScenarioName::Scenario1;
    s.world_size_m = world_size;
    s.n_vehicles = n_vehicles;
    s.n_aps = n_aps;
    double spacing = world_size / static_cast<double>(n_aps + 1);
    if (spacing < kMinSpacing)
        throw DomainError("scenario: too many APs for the world size");
    for (std::size_t j = 0; j < n_aps; ++j)
        s.ap_starts.push_back({world_size / 2.0, spacing * static_cast<double>(j + 1)});
    place_vehicles(s);
    return s;
}

Scenario make_scenario2(std::size_t n_vehicles, std::size_t n_aps, double world_size)
{
    check_counts(n_vehicles, n_aps, world_size);
    Scenario s;
    s.name = ScenarioName::Scenario2;
    s.world_size_m = world_size;
    s.n_vehicles = n_vehicles;
    s.n_aps = n_aps;

    double inset = world_size / 10.0;
    double side = world_size - 2.0 * inset;
    double perimeter = 4.0 * side;
    if (perimeter / static_cast<double>(n_aps) < kMinSpacing)
        throw DomainError("scenario: too many APs for the world size");
    // Walk the inset square from the lower-left corner: up, right, down, left.
    for (std::size_t j = 0; j < n_aps; ++j) {
        double arc = perimeter * static_cast<double>(j) / static_cast<double>(n_aps);
        int edge = std::min(static_cast<int>(arc / side), 3);
        double t = arc - side * edge;
        Pose p;
        switch (edge) {
        case 0: p = {inset, inset + t}; break;
        case 1: p = {inset + t, inset + side}; break;
        case 2: p = {inset + side, inset + side - t}; break;
        default: p = {inset + side - t, inset}; break;
        }
        s.ap_starts.push_back(p);
    }
    place_vehicles(s);
    return s;
}

bool WorldState::all_arrived() const
{
    return std::all_of(vehicles.begin(), vehicles.end(), [](const VehicleState& v) { return v.arrived; });
}

WorldState make_world(const Scenario& scenario, RandomStream& rng)
{
    scenario.validate();
    WorldState w;
    w.world_size_m = scenario.world_size_m;
    w.goal_radius_m = scenario.goal_radius_m;
    for (std::size_t i = 0; i < scenario.n_vehicles; ++i) {
        VehicleState v;
        v.id = i;
        v.pose = scenario.vehicle_starts[i];
        v.target = scenario.vehicle_targets[i];
        v.speed_mps = scenario.vehicle_speed_mps;
        v.arrived = distance(v.pose, v.target) <= w.goal_radius_m;
        w.vehicles.push_back(v);
    }
    for (std::size_t j = 0; j < scenario.n_aps; ++j) {
        ApState a;
        a.id = j;
        a.pose = scenario.ap_starts[j];
        a.speed_mps = scenario.ap_speed_mps;
        // Drawn even for static APs so the stream position is layout-independent.
        a.waypoint = {rng.uniform(0.0, w.world_size_m), rng.uniform(0.0, w.world_size_m)};
        w.aps.push_back(a);
    }
    return w;
}

WorldState step_vehicles(WorldState world, double dt)
{
    if (!(dt > 0.0))
        throw DomainError("step_vehicles: dt must be positive");
    for (VehicleState& v : world.vehicles) {
        if (v.arrived)
            continue;
        bool reached = false;
        v.pose = clamp_to_world(advance(v.pose, v.target, v.speed_mps * dt, reached), world.world_size_m);
        v.arrived = reached || distance(v.pose, v.target) <= world.goal_radius_m;
    }
    world.time_s += dt;
    return world;
}

WorldState step_aps(WorldState world, double dt, RandomStream& rng)
{
    if (!(dt > 0.0))
        throw DomainError("step_aps: dt must be positive");
    for (ApState& a : world.aps) {
        if (a.speed_mps <= 0.0)
            continue;
        bool reached = false;
        a.pose = clamp_to_world(advance(a.pose, a.waypoint, a.speed_mps * dt, reached), world.world_size_m);
        if (reached)
            a.waypoint = {rng.uniform(0.0, world.world_size_m), rng.uniform(0.0, world.world_size_m)};
    }
    return world;
}

Eigen::MatrixXd distance_matrix(const WorldState& world)
{
    Eigen::MatrixXd d(world.vehicles.size(), world.aps.size());
    for (std::size_t i = 0; i < world.vehicles.size(); ++i)
        for (std::size_t j = 0; j < world.aps.size(); ++j)
            d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                distance(world.vehicles[i].pose, world.aps[j].pose);
    return d;
}

}  // namespace apsel
