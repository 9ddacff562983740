#include <gtest/gtest.h>

#include <cmath>

#include "apsel/errors.hpp"
#include "apsel/world.hpp"

using namespace apsel;

TEST(Scenario1, ApColumn)
{
    const Scenario s = make_scenario1(6, 4, 20.0);
    ASSERT_EQ(s.ap_starts.size(), 4u);
    for (const Pose& p : s.ap_starts)
        EXPECT_DOUBLE_EQ(p.x, 10.0);
    for (std::size_t j = 0; j < 4; ++j) {
        EXPECT_GT(s.ap_starts[j].y, 0.0);
        EXPECT_LT(s.ap_starts[j].y, 20.0);
        EXPECT_NEAR(s.ap_starts[j].y + s.ap_starts[3 - j].y, 20.0, 1e-12);
    }
    EXPECT_NEAR(s.ap_starts[1].y - s.ap_starts[0].y, s.ap_starts[2].y - s.ap_starts[1].y, 1e-12);
}

TEST(Scenario1, SingleApAtCentre)
{
    const Scenario s = make_scenario1(1, 1, 20.0);
    EXPECT_EQ(s.ap_starts[0], (Pose{10.0, 10.0}));
}

TEST(Scenario1, VehiclesCrossLeftToRight)
{
    const Scenario s = make_scenario1(6, 4, 20.0);
    for (std::size_t i = 0; i < 6; ++i) {
        EXPECT_DOUBLE_EQ(s.vehicle_starts[i].x, 0.0);
        EXPECT_DOUBLE_EQ(s.vehicle_targets[i].x, 20.0);
        EXPECT_DOUBLE_EQ(s.vehicle_starts[i].y, s.vehicle_targets[i].y);
    }
}

TEST(Scenario1, TooDenseThrows)
{
    EXPECT_THROW(make_scenario1(100, 4, 20.0), DomainError);
}

TEST(Scenario2, Corners)
{
    const Scenario s = make_scenario2(6, 4, 20.0);
    std::vector<Pose> want{{2, 2}, {2, 18}, {18, 2}, {18, 18}};
    for (const Pose& w : want)
        EXPECT_NE(std::find(s.ap_starts.begin(), s.ap_starts.end(), w), s.ap_starts.end()) << w.x << "," << w.y;
}

TEST(Scenario2, ScalesWithWorld)
{
    const Scenario s = make_scenario2(6, 4, 40.0);
    EXPECT_EQ(s.ap_starts[0], (Pose{4.0, 4.0}));
}

TEST(StepVehicles, AxisAlignedMove)
{
    WorldState w;
    w.vehicles.push_back({0, {0, 0}, {0, 9}, 0.9, false});
    w = step_vehicles(w, 1.0);
    EXPECT_NEAR(w.vehicles[0].pose.x, 0.0, 1e-12);
    EXPECT_NEAR(w.vehicles[0].pose.y, 0.9, 1e-12);
    EXPECT_FALSE(w.vehicles[0].arrived);
}

TEST(StepVehicles, LandsOnTargetWithoutOvershoot)
{
    WorldState w;
    w.vehicles.push_back({0, {5, 5}, {5, 5.3}, 0.9, false});
    w = step_vehicles(w, 1.0);
    EXPECT_EQ(w.vehicles[0].pose, (Pose{5, 5.3}));
    EXPECT_TRUE(w.vehicles[0].arrived);
    const Pose before = w.vehicles[0].pose;
    w = step_vehicles(w, 1.0);
    EXPECT_EQ(w.vehicles[0].pose, before);
}

TEST(StepVehicles, DisplacementAndProgress)
{
    const Scenario s = make_scenario1(6, 4, 20.0);
    RandomStream rng(1);
    WorldState w = make_world(s, rng);
    for (int t = 0; t < 40; ++t) {
        const WorldState next = step_vehicles(w, 1.0);
        for (std::size_t i = 0; i < w.vehicles.size(); ++i) {
            EXPECT_LE(distance(w.vehicles[i].pose, next.vehicles[i].pose), 0.9 + 1e-12);
            EXPECT_LE(distance(next.vehicles[i].pose, next.vehicles[i].target),
                      distance(w.vehicles[i].pose, w.vehicles[i].target) + 1e-12);
        }
        w = next;
    }
    EXPECT_TRUE(w.all_arrived());
}

TEST(StepAps, StaticWhenSpeedZero)
{
    Scenario s = make_scenario1(6, 4, 20.0);
    s.ap_speed_mps = 0.0;
    RandomStream rng(2);
    WorldState w = make_world(s, rng);
    const WorldState after = step_aps(w, 1.0, rng);
    for (std::size_t j = 0; j < 4; ++j)
        EXPECT_EQ(after.aps[j].pose, w.aps[j].pose);
}

TEST(StepAps, StaysInsideAndReproducible)
{
    Scenario s = make_scenario2(6, 4, 20.0);
    s.ap_speed_mps = 2.0;  // fast, so waypoints are reached often
    RandomStream r1(3), r2(3);
    WorldState a = make_world(s, r1), b = make_world(s, r2);
    for (int t = 0; t < 10000; ++t) {
        a = step_aps(a, 1.0, r1);
        b = step_aps(b, 1.0, r2);
        for (std::size_t j = 0; j < 4; ++j) {
            ASSERT_EQ(a.aps[j].pose, b.aps[j].pose);
            ASSERT_GE(a.aps[j].pose.x, 0.0);
            ASSERT_LE(a.aps[j].pose.x, 20.0);
            ASSERT_GE(a.aps[j].pose.y, 0.0);
            ASSERT_LE(a.aps[j].pose.y, 20.0);
        }
    }
}

TEST(DistanceMatrix, Examples)
{
    WorldState w;
    w.vehicles.push_back({0, {0, 0}, {1, 1}, 0.9, false});
    w.vehicles.push_back({1, {3, 4}, {1, 1}, 0.9, false});
    w.aps.push_back({0, {3, 4}, 0.0, {3, 4}});
    w.aps.push_back({1, {0, 0}, 0.0, {0, 0}});
    const Eigen::MatrixXd d = distance_matrix(w);
    EXPECT_DOUBLE_EQ(d(0, 0), 5.0);
    EXPECT_DOUBLE_EQ(d(1, 0), 0.0);
    EXPECT_DOUBLE_EQ(d(0, 0), d(1, 1));
}

TEST(ScenarioValidate, RejectsMismatchedLists)
{
    Scenario s = make_scenario1(6, 4, 20.0);
    s.vehicle_targets.pop_back();
    EXPECT_THROW(s.validate(), DomainError);
    s = make_scenario1(6, 4, 20.0);
    s.ap_starts[0] = {25.0, 1.0};
    EXPECT_THROW(s.validate(), DomainError);
}
