#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "coevo/errors.hpp"
#include "coevo/species.hpp"

namespace coevo {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

/// Normalizes an angle to [0, 2*pi).
double normalize_angle(double radians);

/// Normalizes an angle to (-pi, pi].
double normalize_angle_signed(double radians);

/// Closed square arena and trial timing. Units: cm and seconds.
struct ArenaConfig {
  double side_length = 75.0;
  double trial_time_limit = 100.0;
  double timestep = 0.1;

  /// Number of simulation steps in a full-length trial.
  int step_count() const;
  void validate() const;
};

/// Physical agent parameters, shared by predator and prey. The predator is
/// the only agent with vision sensors.
struct AgentBodyConfig {
  double body_radius = 2.75;
  double max_wheel_speed = 5.0;
  int proximity_count = 8;
  double proximity_range = 5.0;  // measured from the body surface
  int vision_count = 5;
  double vision_total_angle_deg = 40.0;

  double axle_length() const { return 2.0 * body_radius; }
  void validate(const ArenaConfig& arena) const;
};

/// Pose of one agent. The body disc is always fully inside the arena.
struct AgentState {
  Vec2 position;
  double heading = 0.0;  // radians, [0, 2*pi)

  friend bool operator==(const AgentState&, const AgentState&) = default;
};

/// Four behavioural traits, each normalized to [0, 1].
struct BehaviorDescriptor {
  double sim_length = 0.0;
  double mean_opponent_distance = 0.0;
  double mean_speed = 0.0;
  double mean_wall_distance = 0.0;

  std::array<double, 4> values() const {
    return {sim_length, mean_opponent_distance, mean_speed,
            mean_wall_distance};
  }
  static BehaviorDescriptor from_values(const std::array<double, 4>& v) {
    return {v[0], v[1], v[2], v[3]};
  }
  friend bool operator==(const BehaviorDescriptor&,
                         const BehaviorDescriptor&) = default;
};

struct StepPoses {
  AgentState predator;
  AgentState prey;
};

/// Poses of both agents over one trial: the fixed initial poses plus the
/// pose after every executed step (steps.size() == duration / timestep).
struct TrialTrace {
  AgentState initial_predator;
  AgentState initial_prey;
  std::vector<StepPoses> steps;
};

struct TrialOutcome {
  bool captured = false;
  double duration = 0.0;  // seconds, in (0, trial_time_limit]
  BehaviorDescriptor predator_descriptor;
  BehaviorDescriptor prey_descriptor;
  std::optional<TrialTrace> trace;
};

/// Maps one sensor frame to the two wheel commands, each in [0, 1].
/// Implementations must be deterministic and stateless across calls.
class Controller {
 public:
  virtual ~Controller() = default;
  virtual int input_count() const = 0;
  virtual std::array<double, 2> act(std::span<const double> inputs) const = 0;
};

/// Emits the same two outputs regardless of input; handy in tests.
class ConstantController final : public Controller {
 public:
  ConstantController(int inputs, std::array<double, 2> outputs)
      : inputs_(inputs), outputs_(outputs) {}
  int input_count() const override { return inputs_; }
  std::array<double, 2> act(std::span<const double>) const override {
    return outputs_;
  }

 private:
  int inputs_;
  std::array<double, 2> outputs_;
};

/// One Euler step of the differential drive: linear speed (vl+vr)/2 along the
/// current heading, angular speed (vr-vl)/axle. Wheel speeds are clamped to
/// the legal range, the resulting position is clamped so the body stays
/// inside the arena (sliding along walls), and the heading is normalized.
AgentState step_agent(const AgentState& state, double left_wheel,
                      double right_wheel, const AgentBodyConfig& body,
                      const ArenaConfig& arena);

/// Binary proximity sensors. Sensor i casts a single ray from the body
/// surface at angle heading + i * (360/count) degrees and reports 1 iff the
/// ray hits a wall or the opponent's body disc within proximity_range.
/// Writes 0.0/1.0 into `out`, which must have proximity_count elements.
void read_proximity(const AgentState& self, const AgentState& opponent,
                    const AgentBodyConfig& body, const ArenaConfig& arena,
                    std::span<double> out);

/// Binary vision sensors (predator only, unlimited range). The total view
/// cone is centered on the heading and split into vision_count contiguous
/// sectors; the sensor whose sector contains the bearing to the prey center
/// reads 1. At most one sensor is active. `out` must have vision_count
/// elements.
void read_vision(const AgentState& predator, const AgentState& prey,
                 const AgentBodyConfig& body, std::span<double> out);

/// True iff the two body discs touch or overlap (center distance <= 2r).
bool check_capture(const AgentState& predator, const AgentState& prey,
                   const AgentBodyConfig& body);

/// Canonical start pose: both agents on the horizontal midline at the
/// quarter points, facing away from each other (predator heading pi at
/// side/4, prey heading 0 at 3*side/4).
AgentState canonical_start(Species species, const ArenaConfig& arena);

/// Runs one encounter from the canonical start poses. Each step both agents
/// sense, both controllers produce outputs o mapped to wheel speeds
/// (2o-1)*max_wheel_speed, the predator moves, then the prey moves, then
/// capture is checked. Ends on capture or when the time limit elapses.
/// Pure: identical inputs give bit-identical outcomes.
TrialOutcome run_trial(const Controller& predator_controller,
                       const Controller& prey_controller,
                       const ArenaConfig& arena, const AgentBodyConfig& body,
                       bool record_trace);

/// Same contract as run_trial but with explicit initial poses.
TrialOutcome run_trial_from(const AgentState& predator_start,
                            const AgentState& prey_start,
                            const Controller& predator_controller,
                            const Controller& prey_controller,
                            const ArenaConfig& arena,
                            const AgentBodyConfig& body, bool record_trace);

/// Behaviour characterization of one agent over a trial:
///   sim_length            duration / trial_time_limit
///   mean_opponent_distance  mean center distance / arena diagonal
///   mean_speed            mean per-step displacement / (timestep * max speed)
///   mean_wall_distance    mean center-to-nearest-wall distance / (side/2)
/// All elements clamped to [0, 1]. Throws InvalidInput on an empty trace.
BehaviorDescriptor characterize(const TrialTrace& trace, Species which,
                                const ArenaConfig& arena,
                                const AgentBodyConfig& body);

}  // namespace coevo
