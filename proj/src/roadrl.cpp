#include "pnav/roadrl.hpp"

#include <cmath>
#include <stdexcept>

namespace pnav {

namespace {
constexpr double kDegToRad = M_PI / 180.0;
} // namespace

void Observation::to_input(std::vector<double>& out) const {
    out.resize(mask.size());
    for (std::size_t i = 0; i < mask.size(); ++i) out[i] = mask[i] ? 1.0 : 0.0;
}

void AgentConfig::validate() const {
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw std::invalid_argument("gamma must be in [0, 1)");
    if (!(epsilon_start >= 0.0 && epsilon_start <= 1.0 && epsilon_end >= 0.0 &&
          epsilon_end <= 1.0))
        throw std::invalid_argument("epsilon bounds must be in [0, 1]");
    if (batch_size <= 0 || target_sync_every <= 0 || max_episode_steps <= 0)
        throw std::invalid_argument("agent counters must be positive");
    if (!(control_dt_s > 0.0))
        throw std::invalid_argument("control period must be > 0");
}

double epsilon_at(long env_step, const AgentConfig& config) {
    if (env_step <= 0) return config.epsilon_start;
    if (env_step >= config.epsilon_decay_steps) return config.epsilon_end;
    const double f = static_cast<double>(env_step) / config.epsilon_decay_steps;
    return config.epsilon_start + f * (config.epsilon_end - config.epsilon_start);
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0) throw std::invalid_argument("replay capacity must be > 0");
    buf_.reserve(capacity_);
}

void ReplayBuffer::push(Transition t) {
    if (buf_.size() < capacity_) {
        buf_.push_back(std::move(t));
    } else {
        buf_[head_] = std::move(t);
    }
    head_ = (head_ + 1) % capacity_;
    if (size_ < capacity_) ++size_;
}

const Transition& ReplayBuffer::at(std::size_t logical) const {
    if (logical >= size_) throw std::out_of_range("replay index");
    if (size_ < capacity_) return buf_[logical];
    return buf_[(head_ + logical) % capacity_];
}

std::vector<const Transition*> ReplayBuffer::sample(std::size_t batch,
                                                    Rng& stream) const {
    if (size_ < batch)
        throw std::logic_error("replay buffer smaller than batch");
    std::vector<const Transition*> out;
    out.reserve(batch);
    for (std::size_t i = 0; i < batch; ++i)
        out.push_back(&at(static_cast<std::size_t>(stream.uniform_int(static_cast<int>(size_)))));
    return out;
}

Observation render_observation(const Pose& pose, const RoadNetwork& roads) {
    Observation obs;
    if (roads.empty()) return obs;
    const double h = pose.heading_deg * kDegToRad;
    const double fwd_e = std::sin(h), fwd_n = std::cos(h);
    const double left_e = -std::cos(h), left_n = std::sin(h);
    const double cell = Observation::kDepthM / Observation::kRows;
    const double half_w = roads.width_m / 2.0;
    for (int r = 0; r < Observation::kRows; ++r) {
        const double ahead = Observation::kDepthM - (r + 0.5) * cell;
        for (int c = 0; c < Observation::kCols; ++c) {
            const double left = Observation::kWidthM / 2.0 - (c + 0.5) * cell;
            const double e = pose.east_m + ahead * fwd_e + left * left_e;
            const double n = pose.north_m + ahead * fwd_n + left * left_n;
            const auto proj = project_onto_road(e, n, roads);
            obs.mask[r * Observation::kCols + c] = proj.distance_m <= half_w ? 1 : 0;
        }
    }
    return obs;
}

EnvStep env_step(const Pose& pose, ActionId action, const Track& track,
                 const AgentConfig& config, double speed_mps,
                 double turn_rate_deg_per_s) {
    const double rate = kActionRateDps[static_cast<int>(action)];
    SteeringCommand steer;
    steer.magnitude_deg = std::fabs(rate) * config.control_dt_s;
    steer.direction = rate > 0.0 ? SteerDirection::Right
                    : rate < 0.0 ? SteerDirection::Left
                                 : SteerDirection::Straight;

    EnvStep out;
    out.pose = kinematics_step(pose, steer, speed_mps, turn_rate_deg_per_s,
                               config.control_dt_s);
    const auto proj = project_onto_road(out.pose.east_m, out.pose.north_m, track.road);
    const double half_w = track.road.width_m / 2.0;
    out.on_road = proj.distance_m <= half_w;
    out.reward = out.on_road ? 1.0 : -1.0;
    out.reached_end = proj.arc_m >= track.length_m - track.end_margin_m;
    out.off_track = proj.distance_m > half_w + config.offroad_margin_m;
    out.terminal = out.off_track || out.reached_end;
    out.observation = render_observation(out.pose, track.road);
    return out;
}

namespace {

int argmax_q(const std::vector<double>& q) {
    int best = 0;
    for (int a = 1; a < static_cast<int>(q.size()); ++a)
        if (q[a] > q[best]) best = a; // strict: ties keep the lowest index
    return best;
}

} // namespace

ActionId select_action(const DenseNet& net, const Observation& obs, double epsilon,
                       double u, double u2) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw std::invalid_argument("epsilon must be in [0, 1]");
    if (u < epsilon) {
        int a = static_cast<int>(u2 * kNumActions);
        if (a >= kNumActions) a = kNumActions - 1;
        return static_cast<ActionId>(a);
    }
    return greedy_action(net, obs);
}

ActionId greedy_action(const DenseNet& net, const Observation& obs) {
    std::vector<double> x;
    obs.to_input(x);
    return static_cast<ActionId>(argmax_q(forward(net, x)));
}

ActionId mask_centroid_action(const Observation& obs) {
    // Steer proportionally to the road centroid's lateral offset (in cells,
    // positive = road lies to the left).
    double sum = 0.0, weighted = 0.0;
    for (int r = 0; r < Observation::kRows; ++r) {
        for (int c = 0; c < Observation::kCols; ++c) {
            if (!obs.at(r, c)) continue;
            const double left_cells = (Observation::kCols - 1) / 2.0 - c;
            sum += 1.0;
            weighted += left_cells;
        }
    }
    if (sum == 0.0) return ActionId::Straight; // blind: hold course
    const double offset = weighted / sum;
    if (offset > 2.0) return ActionId::SharpLeft;
    if (offset > 0.5) return ActionId::SlightLeft;
    if (offset < -2.0) return ActionId::SharpRight;
    if (offset < -0.5) return ActionId::SlightRight;
    return ActionId::Straight;
}

TrainStepResult train_step(DenseNet& net, DenseNet& target, const ReplayBuffer& buffer,
                           AdamState& opt, const AgentConfig& config,
                           Rng& replay_stream, long& train_steps) {
    TrainStepResult res;
    if (buffer.size() < static_cast<std::size_t>(config.batch_size))
        return res; // not enough experience yet

    const auto batch = buffer.sample(config.batch_size, replay_stream);
    Gradients total = make_zero_gradients(net);
    double loss_sum = 0.0;
    std::vector<double> x;
    for (const Transition* tr : batch) {
        double y = tr->reward;
        if (!tr->terminal) {
            tr->next_state.to_input(x);
            const auto q_next = forward(target, x);
            double best = q_next[0];
            for (double q : q_next) best = std::fmax(best, q);
            y += config.gamma * best;
        }
        tr->state.to_input(x);
        const auto cache = forward_cached(net, x);
        const double q = cache.output[tr->action];
        const double err = q - y;

        // Huber loss and its derivative w.r.t. q
        const double d = config.huber_delta;
        double dloss;
        if (std::fabs(err) <= d) {
            loss_sum += 0.5 * err * err;
            dloss = err;
        } else {
            loss_sum += d * (std::fabs(err) - 0.5 * d);
            dloss = err > 0.0 ? d : -d;
        }
        std::vector<double> grad_out(net.output_dim(), 0.0);
        grad_out[tr->action] = dloss;
        total.accumulate(backward(net, cache, grad_out));
    }
    total.scale(1.0 / config.batch_size);
    optimizer_step(net, total, opt);
    ++train_steps;
    if (train_steps % config.target_sync_every == 0) target = net;

    res.applied = true;
    res.loss = loss_sum / config.batch_size;
    return res;
}

Pose jittered_start(const Track& track, Rng& env_stream) {
    Pose p = track.start;
    const double h = p.heading_deg * kDegToRad;
    const double lateral = env_stream.uniform(-0.5, 0.5);
    p.east_m += lateral * -std::cos(h);
    p.north_m += lateral * std::sin(h);
    p.heading_deg = normalize_compass(p.heading_deg + env_stream.uniform(-10.0, 10.0));
    return p;
}

namespace {

template <typename PolicyFn>
EvalResult run_eval(PolicyFn&& policy, const Track& track, const AgentConfig& config,
                    int episodes, std::uint64_t seed, double speed_mps,
                    double turn_rate) {
    Rng env_stream = make_stream(seed, StreamId::Env);
    EvalResult out;
    for (int ep = 0; ep < episodes; ++ep) {
        Pose pose = jittered_start(track, env_stream);
        Observation obs = render_observation(pose, track.road);
        int steps = 0, on_road_steps = 0;
        double reward_sum = 0.0;
        for (; steps < config.max_episode_steps;) {
            const ActionId a = policy(obs);
            const EnvStep st = env_step(pose, a, track, config, speed_mps, turn_rate);
            ++steps;
            reward_sum += st.reward;
            if (st.on_road) ++on_road_steps;
            pose = st.pose;
            obs = st.observation;
            if (st.reached_end) break; // off-track does not end an evaluation
        }
        out.mean_on_road_fraction += steps > 0 ? static_cast<double>(on_road_steps) / steps : 0.0;
        out.mean_episode_steps += steps;
        out.mean_reward += reward_sum;
    }
    if (episodes > 0) {
        out.mean_on_road_fraction /= episodes;
        out.mean_episode_steps /= episodes;
        out.mean_reward /= episodes;
    }
    return out;
}

} // namespace

TrainResult train_road(const Track& track, const AgentConfig& config, int episodes,
                       std::uint64_t seed, double speed_mps,
                       double turn_rate_deg_per_s) {
    config.validate();
    Rng init_stream = make_stream(seed, StreamId::NetInit);
    Rng action_stream = make_stream(seed, StreamId::Action);
    Rng replay_stream = make_stream(seed, StreamId::Replay);
    Rng env_stream = make_stream(seed, StreamId::Env);

    std::vector<int> dims;
    dims.push_back(Observation::kRows * Observation::kCols);
    for (int h : config.hidden) dims.push_back(h);
    dims.push_back(kNumActions);
    std::vector<Activation> acts(config.hidden.size(), Activation::ReLU);
    acts.push_back(Activation::Identity);

    TrainResult result;
    result.net = make_dense_net(dims, acts, init_stream);
    result.opt = make_adam_state(result.net, config.learning_rate);
    DenseNet target = result.net;
    ReplayBuffer buffer(config.buffer_capacity);

    long env_steps = 0;
    long train_steps = 0;
    for (int ep = 0; ep < episodes; ++ep) {
        Pose pose = jittered_start(track, env_stream);
        Observation obs = render_observation(pose, track.road);
        EpisodeStats stats;
        int on_road_steps = 0;
        for (int s = 0; s < config.max_episode_steps; ++s) {
            const double eps = epsilon_at(env_steps, config);
            const double u = action_stream.uniform();
            const double u2 = action_stream.uniform();
            const ActionId a = select_action(result.net, obs, eps, u, u2);
            const EnvStep st =
                env_step(pose, a, track, config, speed_mps, turn_rate_deg_per_s);

            Transition tr;
            tr.state = obs;
            tr.action = static_cast<std::uint8_t>(a);
            tr.reward = st.reward;
            tr.next_state = st.observation;
            tr.terminal = st.terminal;
            buffer.push(std::move(tr));

            train_step(result.net, target, buffer, result.opt, config, replay_stream,
                       train_steps);

            ++env_steps;
            ++stats.steps;
            stats.reward_sum += st.reward;
            if (st.on_road) ++on_road_steps;
            pose = st.pose;
            obs = st.observation;
            if (st.terminal) break;
        }
        stats.on_road_fraction =
            stats.steps > 0 ? static_cast<double>(on_road_steps) / stats.steps : 0.0;
        stats.epsilon = epsilon_at(env_steps, config);
        result.curve.push_back(stats);
    }
    return result;
}

EvalResult eval_road(const DenseNet& net, const Track& track,
                     const AgentConfig& config, int episodes, std::uint64_t seed,
                     double speed_mps, double turn_rate_deg_per_s) {
    return run_eval([&](const Observation& obs) { return greedy_action(net, obs); },
                    track, config, episodes, seed, speed_mps, turn_rate_deg_per_s);
}

EvalResult eval_road_oracle(const Track& track, const AgentConfig& config,
                            int episodes, std::uint64_t seed, double speed_mps,
                            double turn_rate_deg_per_s) {
    return run_eval([](const Observation& obs) { return mask_centroid_action(obs); },
                    track, config, episodes, seed, speed_mps, turn_rate_deg_per_s);
}

} // namespace pnav
