// Copyright 2026 The Demoforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DEMOFORGE_IL_MDP_H_
#define DEMOFORGE_IL_MDP_H_

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace demoforge::il {

// Finite MDP with dense transitions T[(s*A + a)*S + s'].
struct GridMdp {
  int n_states = 0;
  int n_actions = 0;
  std::vector<double> transitions;
  double gamma = 0.9;
  // R[s*A + a]; absent for IRL inputs.
  std::optional<std::vector<double>> reward;

  double t(int s, int a, int s2) const {
    return transitions[(static_cast<size_t>(s) * n_actions + a) * n_states + s2];
  }
  double& t(int s, int a, int s2) {
    return transitions[(static_cast<size_t>(s) * n_actions + a) * n_states + s2];
  }
  // InvalidArgumentError unless rows sum to 1 within 1e-9 and gamma in [0,1).
  void validate() const;
};

// Discrete trajectory of (state, action) pairs.
using DiscreteTrajectory = std::vector<std::pair<int, int>>;

struct ValueIterationResult {
  std::vector<double> values;  // V(s)
  std::vector<double> q;       // Q[s*A + a]
  std::vector<int> policy;     // greedy, lowest index on ties
  int iterations = 0;
};

// Runs to sup-norm change < tol. InvalidArgumentError if R is missing.
ValueIterationResult value_iteration(const GridMdp& mdp, double tol = 1e-8,
                                     int max_iterations = 100000);

// max over s of |V(s) - max_a (R + gamma T V)(s, a)|.
double bellman_residual(const GridMdp& mdp, std::span<const double> values);

// Soft (log-sum-exp) value iteration for a reward R[s*A + a]; returns the
// stochastic policy pi[s*A + a] = exp(Q - V).
std::vector<double> soft_policy(const GridMdp& mdp,
                                std::span<const double> reward,
                                double tol = 1e-10,
                                int max_iterations = 100000);

// Expected state visitation frequencies (summing to 1) of `policy` for
// starts drawn from `start`. alive[t] weights time step t (the share of
// episodes still running), so the horizon is alive.size().
std::vector<double> visitation_frequencies(const GridMdp& mdp,
                                           std::span<const double> policy,
                                           std::span<const double> start,
                                           std::span<const double> alive);

struct IrlResult {
  std::vector<double> theta;                     // reward per state
  std::vector<std::vector<double>> theta_trace;  // after each iteration
  std::vector<double> expert_features;
  std::vector<double> model_features;  // under the final theta
  double max_feature_gap = 0.0;
};

// Gradient ascent on theta with one-hot state features; the gradient is the
// gap between expert and soft-optimal feature frequencies.
IrlResult maxent_irl(const GridMdp& mdp,
                     std::span<const DiscreteTrajectory> expert,
                     int iterations, double lr);

// Expected feature frequencies of the soft-optimal policy for `theta`,
// started and truncated like the expert trajectories.
std::vector<double> maxent_model_features(
    const GridMdp& mdp, std::span<const DiscreteTrajectory> expert,
    std::span<const double> theta);
std::vector<double> empirical_state_frequencies(
    int n_states, std::span<const DiscreteTrajectory> trajectories);

// Deterministic width x height gridworld, actions {up, down, left, right,
// stay}; moves into walls stay put. State index = y*width + x.
GridMdp make_gridworld(int width, int height, double gamma);

// Samples trajectories from a stochastic policy.
std::vector<DiscreteTrajectory> sample_trajectories(
    const GridMdp& mdp, std::span<const double> policy,
    std::span<const int> start_states, int length, uint64_t seed);

// R[s*A + a] = theta[s].
std::vector<double> state_reward(const GridMdp& mdp,
                                 std::span<const double> theta);

// Greedy actions whose Q lies within `tol` of the best, per state.
std::vector<std::vector<int>> optimal_action_sets(const GridMdp& mdp,
                                                  double tol = 1e-6);

// Share of states where the greedy action under the state reward `theta`
// (lowest index on ties) is optimal for `truth`, which must carry a reward.
double greedy_match_rate(const GridMdp& truth, std::span<const double> theta);

// size x size world, gamma 0.9, reward 1 in the far corner (state S-1), and
// `episodes` soft-optimal demonstrations of `length` steps whose starts
// cycle through all states.
struct IrlBenchmark {
  GridMdp mdp;
  std::vector<DiscreteTrajectory> demonstrations;
};
IrlBenchmark corner_goal_benchmark(int size = 5, int episodes = 2500,
                                   int length = 20, uint64_t seed = 7);

}  // namespace demoforge::il

#endif  // DEMOFORGE_IL_MDP_H_
