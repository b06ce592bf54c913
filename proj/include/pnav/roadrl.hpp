#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "pnav/nn.hpp"
#include "pnav/world.hpp"

namespace pnav {

/// Binary road mask over a forward ground window, standing in for the
/// camera + segmentation stage: 8 m deep x 8 m wide, 16x16 cells of 0.5 m,
/// anchored at the robot. Row 0 is farthest ahead, column 0 leftmost.
struct Observation {
    static constexpr int kRows = 16;
    static constexpr int kCols = 16;
    static constexpr double kDepthM = 8.0;
    static constexpr double kWidthM = 8.0;

    std::array<std::uint8_t, kRows * kCols> mask{};

    std::uint8_t at(int row, int col) const { return mask[row * kCols + col]; }
    void to_input(std::vector<double>& out) const;
};

enum class ActionId : int {
    SharpLeft = 0,
    SlightLeft = 1,
    Straight = 2,
    SlightRight = 3,
    SharpRight = 4,
};

inline constexpr int kNumActions = 5;
inline constexpr std::array<double, kNumActions> kActionRateDps = {-45.0, -15.0, 0.0,
                                                                   15.0, 45.0};

struct Transition {
    Observation state;
    std::uint8_t action = 0;
    double reward = 0.0; // +1 on road, -1 off road
    Observation next_state;
    bool terminal = false;
};

/// FIFO ring buffer with uniform sampling from a dedicated stream.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity = 10'000);

    void push(Transition t);
    std::size_t size() const { return size_; }
    std::size_t capacity() const { return capacity_; }
    const Transition& at(std::size_t logical) const; // 0 = oldest

    std::vector<const Transition*> sample(std::size_t batch, Rng& stream) const;

private:
    std::size_t capacity_;
    std::vector<Transition> buf_;
    std::size_t head_ = 0; // next write slot
    std::size_t size_ = 0;
};

struct AgentConfig {
    double gamma = 0.95;
    int batch_size = 32;
    int target_sync_every = 200; // training steps
    double epsilon_start = 1.0;
    double epsilon_end = 0.05;
    int epsilon_decay_steps = 5'000; // environment steps
    double control_dt_s = 0.4;
    int max_episode_steps = 500;
    double offroad_margin_m = 1.0; // termination beyond the road edge
    std::size_t buffer_capacity = 10'000;
    double huber_delta = 1.0;
    double learning_rate = 1e-3;
    std::vector<int> hidden = {128, 64};

    void validate() const;
};

/// Piecewise-linear epsilon: 1.0 at step 0, epsilon_end at >= decay steps.
double epsilon_at(long env_step, const AgentConfig& config);

/// A drivable track: one road polyline with a start pose on the centerline.
struct Track {
    RoadNetwork road;
    Pose start;
    double length_m = 0.0;
    double end_margin_m = 2.0; // done when projected arc >= length - margin
};

Observation render_observation(const Pose& pose, const RoadNetwork& roads);

struct EnvStep {
    Pose pose;
    Observation observation;
    double reward = 0.0;
    bool terminal = false; // off_track or reached_end (training semantics)
    bool on_road = false;
    bool off_track = false; // beyond the road edge plus the grace margin
    bool reached_end = false;
};

/// Apply one action for control_dt at the track's speed; reward +1/-1 by the
/// resulting on-road state; terminal on leaving the road beyond the margin or
/// reaching the end of the track.
EnvStep env_step(const Pose& pose, ActionId action, const Track& track,
                 const AgentConfig& config, double speed_mps,
                 double turn_rate_deg_per_s);

/// Epsilon-greedy with explicit draws: u gates exploration, u2 picks the
/// random action; ties in the greedy branch break to the lowest index.
ActionId select_action(const DenseNet& net, const Observation& obs, double epsilon,
                       double u, double u2);

ActionId greedy_action(const DenseNet& net, const Observation& obs);

/// Mask-centroid follower used as the independent steering oracle.
ActionId mask_centroid_action(const Observation& obs);

struct TrainStepResult {
    bool applied = false;
    double loss = 0.0;
};

/// One minibatch DQN update: y = r + gamma * max_a' Q_target(s', a') for
/// non-terminal transitions, y = r for terminal; Huber loss on the taken
/// action only. Copies net into target every target_sync_every applied steps.
TrainStepResult train_step(DenseNet& net, DenseNet& target, const ReplayBuffer& buffer,
                           AdamState& opt, const AgentConfig& config,
                           Rng& replay_stream, long& train_steps);

struct EpisodeStats {
    int steps = 0;
    double reward_sum = 0.0;
    double on_road_fraction = 0.0;
    double epsilon = 0.0;
};

struct TrainResult {
    std::vector<EpisodeStats> curve;
    DenseNet net;
    AdamState opt;
};

/// Online training: act, store, train on every environment step.
/// Deterministic given (track, config, seed).
TrainResult train_road(const Track& track, const AgentConfig& config, int episodes,
                       std::uint64_t seed, double speed_mps = 1.4,
                       double turn_rate_deg_per_s = 45.0);

struct EvalResult {
    double mean_on_road_fraction = 0.0;
    double mean_episode_steps = 0.0;
    double mean_reward = 0.0;
};

/// Greedy rollouts (epsilon = 0), no learning. Start poses get a small
/// deterministic per-episode jitter from the seed. Evaluation episodes run the
/// whole attempt window (track end or the step cap): leaving the road does not
/// end them, so a policy that crashes early scores a near-zero fraction
/// instead of a flattering one over a handful of steps.
EvalResult eval_road(const DenseNet& net, const Track& track,
                     const AgentConfig& config, int episodes, std::uint64_t seed,
                     double speed_mps = 1.4, double turn_rate_deg_per_s = 45.0);

/// Same rollouts driven by the mask-centroid oracle instead of a network.
EvalResult eval_road_oracle(const Track& track, const AgentConfig& config,
                            int episodes, std::uint64_t seed,
                            double speed_mps = 1.4,
                            double turn_rate_deg_per_s = 45.0);

/// Start pose with the per-episode jitter used by training and evaluation.
Pose jittered_start(const Track& track, Rng& env_stream);

} // namespace pnav
