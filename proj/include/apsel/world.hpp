#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "apsel/random.hpp"

namespace apsel {

struct Pose {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Pose&, const Pose&) = default;
};

double distance(const Pose& a, const Pose& b);

struct VehicleState {
    std::size_t id = 0;
    Pose pose;
    Pose target;
    double speed_mps = 0.9;
    bool arrived = false;
};

/// AP with random-waypoint motion; speed zero means static.
struct ApState {
    std::size_t id = 0;
    Pose pose;
    double speed_mps = 0.05;
    Pose waypoint;
};

enum class ScenarioName { Scenario1, Scenario2, Custom };

std::string to_string(ScenarioName name);

struct Scenario {
    ScenarioName name = ScenarioName::Custom;
    double world_size_m = 20.0;
    std::vector<Pose> vehicle_starts;
    std::vector<Pose> vehicle_targets;
    std::vector<Pose> ap_starts;
    std::size_t n_vehicles = 6;
    std::size_t n_aps = 4;
    double goal_radius_m = 0.5;
    double dt_s = 1.0;
    std::size_t max_steps = 100;
    double vehicle_speed_mps = 0.9;
    double ap_speed_mps = 0.05;

    /// Throws DomainError when list sizes, bounds or timing are inconsistent.
    void validate() const;
};

/// APs in a single column on the vertical mid-line; vehicles cross from the
/// left edge to the right edge.
Scenario make_scenario1(std::size_t n_vehicles, std::size_t n_aps, double world_size);

/// APs on a square inset by a tenth of the world size (the four corners for
/// n_aps = 4); vehicles as in make_scenario1.
Scenario make_scenario2(std::size_t n_vehicles, std::size_t n_aps, double world_size);

struct WorldState {
    double world_size_m = 20.0;
    double goal_radius_m = 0.5;
    double time_s = 0.0;
    std::vector<VehicleState> vehicles;
    std::vector<ApState> aps;

    bool all_arrived() const;
};

/// Places every entity at its scenario start and draws the first AP waypoints.
WorldState make_world(const Scenario& scenario, RandomStream& rng);

WorldState step_vehicles(WorldState world, double dt);
WorldState step_aps(WorldState world, double dt, RandomStream& rng);

/// Vehicle-to-AP Euclidean distances, rows are vehicles.
Eigen::MatrixXd distance_matrix(const WorldState& world);

}  // namespace apsel
