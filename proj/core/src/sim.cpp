#include "coevo/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace coevo {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

/// Distance along a unit ray to the first arena wall.
double ray_wall_distance(Vec2 origin, Vec2 dir, double side) {
  double t = kInf;
  if (dir.x > 0.0) {
    t = std::min(t, (side - origin.x) / dir.x);
  } else if (dir.x < 0.0) {
    t = std::min(t, -origin.x / dir.x);
  }
  if (dir.y > 0.0) {
    t = std::min(t, (side - origin.y) / dir.y);
  } else if (dir.y < 0.0) {
    t = std::min(t, -origin.y / dir.y);
  }
  return std::max(t, 0.0);
}

/// Distance along a unit ray to a disc of radius r centered at c, or
/// infinity if the ray misses. An origin inside the disc reports 0.
double ray_disc_distance(Vec2 origin, Vec2 dir, Vec2 c, double r) {
  const Vec2 oc = c - origin;
  const double oc2 = dot(oc, oc);
  const double r2 = r * r;
  if (oc2 <= r2) return 0.0;
  const double proj = dot(oc, dir);
  if (proj <= 0.0) return kInf;
  const double perp2 = oc2 - proj * proj;
  if (perp2 > r2) return kInf;
  return proj - std::sqrt(r2 - perp2);
}

double wall_clearance(Vec2 p, double side) {
  return std::min(std::min(p.x, side - p.x), std::min(p.y, side - p.y));
}

}  // namespace

double normalize_angle(double radians) {
  double a = std::fmod(radians, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a -= kTwoPi;  // fmod edge when a was a tiny negative
  return a;
}

double normalize_angle_signed(double radians) {
  double a = std::fmod(radians + std::numbers::pi, kTwoPi);
  if (a <= 0.0) a += kTwoPi;
  return a - std::numbers::pi;
}

int ArenaConfig::step_count() const {
  return static_cast<int>(std::llround(trial_time_limit / timestep));
}

void ArenaConfig::validate() const {
  if (!(side_length > 0.0)) throw ConfigError("arena.side_length must be > 0");
  if (!(trial_time_limit > 0.0))
    throw ConfigError("arena.trial_time_limit must be > 0");
  if (!(timestep > 0.0)) throw ConfigError("arena.timestep must be > 0");
  const double steps = trial_time_limit / timestep;
  if (std::abs(steps - std::llround(steps)) > 1e-9 * steps ||
      std::llround(steps) < 1) {
    throw ConfigError(
        "arena.timestep must divide arena.trial_time_limit evenly");
  }
}

void AgentBodyConfig::validate(const ArenaConfig& arena) const {
  if (!(body_radius > 0.0)) throw ConfigError("body.body_radius must be > 0");
  if (!(2.0 * body_radius < arena.side_length))
    throw ConfigError("body.body_radius too large for the arena");
  if (!(max_wheel_speed > 0.0))
    throw ConfigError("body.max_wheel_speed must be > 0");
  if (proximity_count < 1 || proximity_count > 16)
    throw ConfigError("body.proximity_count out of range [1, 16]");
  if (!(proximity_range > 0.0))
    throw ConfigError("body.proximity_range must be > 0");
  if (vision_count < 1 || vision_count > 16)
    throw ConfigError("body.vision_count out of range [1, 16]");
  if (!(vision_total_angle_deg > 0.0) || vision_total_angle_deg > 360.0)
    throw ConfigError("body.vision_total_angle out of range (0, 360]");
}

AgentState step_agent(const AgentState& state, double left_wheel,
                      double right_wheel, const AgentBodyConfig& body,
                      const ArenaConfig& arena) {
  const double vmax = body.max_wheel_speed;
  const double vl = std::clamp(left_wheel, -vmax, vmax);
  const double vr = std::clamp(right_wheel, -vmax, vmax);
  const double linear = 0.5 * (vl + vr);
  const double angular = (vr - vl) / body.axle_length();
  const double dt = arena.timestep;

  // Displacement along the heading at the start of the step, then rotate.
  AgentState next;
  next.position.x = state.position.x + linear * dt * std::cos(state.heading);
  next.position.y = state.position.y + linear * dt * std::sin(state.heading);
  const double r = body.body_radius;
  next.position.x = std::clamp(next.position.x, r, arena.side_length - r);
  next.position.y = std::clamp(next.position.y, r, arena.side_length - r);
  next.heading = normalize_angle(state.heading + angular * dt);
  return next;
}

void read_proximity(const AgentState& self, const AgentState& opponent,
                    const AgentBodyConfig& body, const ArenaConfig& arena,
                    std::span<double> out) {
  if (out.size() != static_cast<std::size_t>(body.proximity_count))
    throw InvalidInput("proximity output span has wrong size");
  const double spacing = kTwoPi / body.proximity_count;
  for (int i = 0; i < body.proximity_count; ++i) {
    const double angle = self.heading + i * spacing;
    const Vec2 dir{std::cos(angle), std::sin(angle)};
    const Vec2 origin = self.position + body.body_radius * dir;
    double hit = ray_wall_distance(origin, dir, arena.side_length);
    hit = std::min(hit, ray_disc_distance(origin, dir, opponent.position,
                                          body.body_radius));
    out[i] = hit <= body.proximity_range ? 1.0 : 0.0;
  }
}

void read_vision(const AgentState& predator, const AgentState& prey,
                 const AgentBodyConfig& body, std::span<double> out) {
  if (out.size() != static_cast<std::size_t>(body.vision_count))
    throw InvalidInput("vision output span has wrong size");
  const Vec2 to_prey = prey.position - predator.position;
  const double bearing = normalize_angle_signed(
      std::atan2(to_prey.y, to_prey.x) - predator.heading);
  const double bearing_deg = bearing * (180.0 / std::numbers::pi);
  const double half = 0.5 * body.vision_total_angle_deg;
  const double sector = body.vision_total_angle_deg / body.vision_count;
  for (int j = 0; j < body.vision_count; ++j) {
    const double lo = -half + j * sector;
    out[j] = (bearing_deg >= lo && bearing_deg < lo + sector) ? 1.0 : 0.0;
  }
}

bool check_capture(const AgentState& predator, const AgentState& prey,
                   const AgentBodyConfig& body) {
  return distance(predator.position, prey.position) <= 2.0 * body.body_radius;
}

AgentState canonical_start(Species species, const ArenaConfig& arena) {
  const double mid = arena.side_length / 2.0;
  if (species == Species::predator)
    return {{arena.side_length / 4.0, mid}, std::numbers::pi};
  return {{3.0 * arena.side_length / 4.0, mid}, 0.0};
}

TrialOutcome run_trial(const Controller& predator_controller,
                       const Controller& prey_controller,
                       const ArenaConfig& arena, const AgentBodyConfig& body,
                       bool record_trace) {
  return run_trial_from(canonical_start(Species::predator, arena),
                        canonical_start(Species::prey, arena),
                        predator_controller, prey_controller, arena, body,
                        record_trace);
}

TrialOutcome run_trial_from(const AgentState& predator_start,
                            const AgentState& prey_start,
                            const Controller& predator_controller,
                            const Controller& prey_controller,
                            const ArenaConfig& arena,
                            const AgentBodyConfig& body, bool record_trace) {
  arena.validate();
  body.validate(arena);
  const int prox = body.proximity_count;
  const int pred_inputs = prox + body.vision_count;
  if (predator_controller.input_count() != pred_inputs)
    throw ConfigError("predator controller expects " +
                      std::to_string(predator_controller.input_count()) +
                      " inputs, task provides " + std::to_string(pred_inputs));
  if (prey_controller.input_count() != prox)
    throw ConfigError("prey controller expects " +
                      std::to_string(prey_controller.input_count()) +
                      " inputs, task provides " + std::to_string(prox));

  const int max_steps = arena.step_count();
  TrialTrace trace;
  trace.initial_predator = predator_start;
  trace.initial_prey = prey_start;
  trace.steps.reserve(max_steps);

  std::array<double, 32> pred_in{};
  std::array<double, 32> prey_in{};
  const auto wheel = [&](double o) {
    return (2.0 * o - 1.0) * body.max_wheel_speed;
  };

  AgentState pred = predator_start;
  AgentState prey = prey_start;
  bool captured = false;
  int steps = 0;
  while (steps < max_steps) {
    read_proximity(pred, prey, body, arena, std::span(pred_in.data(), prox));
    read_vision(pred, prey, body,
                std::span(pred_in.data() + prox, body.vision_count));
    read_proximity(prey, pred, body, arena, std::span(prey_in.data(), prox));
    const auto po =
        predator_controller.act(std::span(pred_in.data(), pred_inputs));
    const auto qo = prey_controller.act(std::span(prey_in.data(), prox));
    pred = step_agent(pred, wheel(po[0]), wheel(po[1]), body, arena);
    prey = step_agent(prey, wheel(qo[0]), wheel(qo[1]), body, arena);
    trace.steps.push_back({pred, prey});
    ++steps;
    if (check_capture(pred, prey, body)) {
      captured = true;
      break;
    }
  }

  TrialOutcome outcome;
  outcome.captured = captured;
  outcome.duration = std::min(steps * arena.timestep, arena.trial_time_limit);
  outcome.predator_descriptor =
      characterize(trace, Species::predator, arena, body);
  outcome.prey_descriptor = characterize(trace, Species::prey, arena, body);
  if (record_trace) outcome.trace = std::move(trace);
  return outcome;
}

BehaviorDescriptor characterize(const TrialTrace& trace, Species which,
                                const ArenaConfig& arena,
                                const AgentBodyConfig& body) {
  if (trace.steps.empty()) throw InvalidInput("cannot characterize an empty trace");
  const std::size_t n = trace.steps.size();

  double sum_opponent = 0.0;
  double sum_wall = 0.0;
  double sum_displacement = 0.0;
  Vec2 prev = which == Species::predator ? trace.initial_predator.position
                                         : trace.initial_prey.position;
  for (const StepPoses& poses : trace.steps) {
    const Vec2 self = which == Species::predator ? poses.predator.position
                                                 : poses.prey.position;
    sum_opponent += distance(poses.predator.position, poses.prey.position);
    sum_wall += wall_clearance(self, arena.side_length);
    sum_displacement += distance(prev, self);
    prev = self;
  }

  const double duration =
      std::min(static_cast<double>(n) * arena.timestep, arena.trial_time_limit);
  const double diagonal = arena.side_length * std::numbers::sqrt2;

  BehaviorDescriptor d;
  d.sim_length = clamp01(duration / arena.trial_time_limit);
  d.mean_opponent_distance = clamp01(sum_opponent / double(n) / diagonal);
  d.mean_speed = clamp01(sum_displacement / double(n) /
                         (arena.timestep * body.max_wheel_speed));
  d.mean_wall_distance =
      clamp01(sum_wall / double(n) / (arena.side_length / 2.0));
  return d;
}

}  // namespace coevo
