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

#include "demoforge/il/mdp.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "demoforge/common/error.h"
#include "demoforge/common/random.h"

namespace demoforge::il {

void GridMdp::validate() const {
  if (n_states < 1 || n_actions < 1) {
    throw InvalidArgumentError("MDP needs states and actions");
  }
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw InvalidArgumentError("gamma must lie in [0, 1)");
  }
  const size_t sa = static_cast<size_t>(n_states) * n_actions;
  if (transitions.size() != sa * n_states) {
    throw DimensionError("transition tensor has the wrong size");
  }
  for (size_t row = 0; row < sa; ++row) {
    double sum = 0.0;
    for (int s2 = 0; s2 < n_states; ++s2) {
      const double p = transitions[row * n_states + s2];
      if (p < 0.0) throw InvalidArgumentError("negative transition probability");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw InvalidArgumentError("transition row is not stochastic");
    }
  }
  if (reward && reward->size() != sa) {
    throw DimensionError("reward must have one entry per (state, action)");
  }
}

namespace {

double expected_next(const GridMdp& mdp, int s, int a,
                     std::span<const double> v) {
  const double* row =
      mdp.transitions.data() +
      (static_cast<size_t>(s) * mdp.n_actions + a) * mdp.n_states;
  double e = 0.0;
  for (int s2 = 0; s2 < mdp.n_states; ++s2) e += row[s2] * v[s2];
  return e;
}

}  // namespace

ValueIterationResult value_iteration(const GridMdp& mdp, double tol,
                                     int max_iterations) {
  mdp.validate();
  if (!mdp.reward) throw InvalidArgumentError("value iteration needs a reward");
  const auto& r = *mdp.reward;
  const int S = mdp.n_states;
  const int A = mdp.n_actions;
  ValueIterationResult out;
  out.values.assign(S, 0.0);
  out.q.assign(static_cast<size_t>(S) * A, 0.0);
  std::vector<double> next(S);
  for (int it = 0; it < max_iterations; ++it) {
    double change = 0.0;
    for (int s = 0; s < S; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < A; ++a) {
        const double q =
            r[s * A + a] + mdp.gamma * expected_next(mdp, s, a, out.values);
        best = std::max(best, q);
      }
      next[s] = best;
      change = std::max(change, std::abs(best - out.values[s]));
    }
    out.values.swap(next);
    out.iterations = it + 1;
    if (change < tol) break;
  }
  out.policy.assign(S, 0);
  for (int s = 0; s < S; ++s) {
    int best_a = 0;
    for (int a = 0; a < A; ++a) {
      out.q[s * A + a] =
          r[s * A + a] + mdp.gamma * expected_next(mdp, s, a, out.values);
      if (out.q[s * A + a] > out.q[s * A + best_a]) best_a = a;
    }
    out.policy[s] = best_a;
  }
  return out;
}

double bellman_residual(const GridMdp& mdp, std::span<const double> values) {
  const auto& r = *mdp.reward;
  double worst = 0.0;
  for (int s = 0; s < mdp.n_states; ++s) {
    double best = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < mdp.n_actions; ++a) {
      best = std::max(best, r[s * mdp.n_actions + a] +
                                mdp.gamma * expected_next(mdp, s, a, values));
    }
    worst = std::max(worst, std::abs(values[s] - best));
  }
  return worst;
}

std::vector<double> soft_policy(const GridMdp& mdp,
                                std::span<const double> reward, double tol,
                                int max_iterations) {
  const int S = mdp.n_states;
  const int A = mdp.n_actions;
  std::vector<double> v(S, 0.0), next(S), q(static_cast<size_t>(S) * A);
  for (int it = 0; it < max_iterations; ++it) {
    double change = 0.0;
    for (int s = 0; s < S; ++s) {
      double m = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < A; ++a) {
        q[s * A + a] = reward[s * A + a] + mdp.gamma * expected_next(mdp, s, a, v);
        m = std::max(m, q[s * A + a]);
      }
      double z = 0.0;
      for (int a = 0; a < A; ++a) z += std::exp(q[s * A + a] - m);
      next[s] = m + std::log(z);
      change = std::max(change, std::abs(next[s] - v[s]));
    }
    v.swap(next);
    if (change < tol) break;
  }
  std::vector<double> pi(static_cast<size_t>(S) * A);
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a) {
      pi[s * A + a] = std::exp(reward[s * A + a] +
                               mdp.gamma * expected_next(mdp, s, a, v) - v[s]);
    }
  }
  return pi;
}

std::vector<double> visitation_frequencies(const GridMdp& mdp,
                                           std::span<const double> policy,
                                           std::span<const double> start,
                                           std::span<const double> alive) {
  const int S = mdp.n_states;
  const int A = mdp.n_actions;
  std::vector<double> d(start.begin(), start.end()), next(S), total(S, 0.0);
  double weight = 0.0;
  for (size_t t = 0; t < alive.size(); ++t) {
    for (int s = 0; s < S; ++s) total[s] += alive[t] * d[s];
    weight += alive[t];
    std::fill(next.begin(), next.end(), 0.0);
    for (int s = 0; s < S; ++s) {
      if (d[s] == 0.0) continue;
      for (int a = 0; a < A; ++a) {
        const double p = d[s] * policy[s * A + a];
        if (p == 0.0) continue;
        const double* row =
            mdp.transitions.data() + (static_cast<size_t>(s) * A + a) * S;
        for (int s2 = 0; s2 < S; ++s2) next[s2] += p * row[s2];
      }
    }
    d.swap(next);
  }
  for (auto& x : total) x /= weight;
  return total;
}

std::vector<double> empirical_state_frequencies(
    int n_states, std::span<const DiscreteTrajectory> trajectories) {
  std::vector<double> f(n_states, 0.0);
  double n = 0.0;
  for (const auto& tr : trajectories) {
    for (const auto& [s, a] : tr) {
      f.at(s) += 1.0;
      n += 1.0;
    }
  }
  for (auto& x : f) x /= n;
  return f;
}

std::vector<double> maxent_model_features(
    const GridMdp& mdp, std::span<const DiscreteTrajectory> expert,
    std::span<const double> theta) {
  const int S = mdp.n_states;
  const int A = mdp.n_actions;
  std::vector<double> reward(static_cast<size_t>(S) * A);
  for (int s = 0; s < S; ++s) {
    for (int a = 0; a < A; ++a) reward[s * A + a] = theta[s];
  }
  const auto pi = soft_policy(mdp, reward);
  std::vector<double> start(S, 0.0);
  size_t horizon = 0;
  for (const auto& tr : expert) {
    start[tr.front().first] += 1.0 / expert.size();
    horizon = std::max(horizon, tr.size());
  }
  std::vector<double> alive(horizon, 0.0);
  for (const auto& tr : expert) {
    for (size_t t = 0; t < tr.size(); ++t) alive[t] += 1.0;
  }
  return visitation_frequencies(mdp, pi, start, alive);
}

IrlResult maxent_irl(const GridMdp& mdp,
                     std::span<const DiscreteTrajectory> expert,
                     int iterations, double lr) {
  mdp.validate();
  if (expert.empty()) throw InvalidArgumentError("no expert trajectories");
  for (const auto& tr : expert) {
    if (tr.empty()) throw InvalidArgumentError("empty expert trajectory");
    for (const auto& [s, a] : tr) {
      if (s < 0 || s >= mdp.n_states || a < 0 || a >= mdp.n_actions) {
        throw InvalidArgumentError("trajectory leaves the MDP");
      }
    }
  }
  IrlResult out;
  out.theta.assign(mdp.n_states, 0.0);
  out.expert_features = empirical_state_frequencies(mdp.n_states, expert);
  for (int it = 0; it < iterations; ++it) {
    const auto model = maxent_model_features(mdp, expert, out.theta);
    for (int s = 0; s < mdp.n_states; ++s) {
      out.theta[s] += lr * (out.expert_features[s] - model[s]);
    }
    out.theta_trace.push_back(out.theta);
  }
  out.model_features = maxent_model_features(mdp, expert, out.theta);
  for (int s = 0; s < mdp.n_states; ++s) {
    out.max_feature_gap =
        std::max(out.max_feature_gap,
                 std::abs(out.expert_features[s] - out.model_features[s]));
  }
  return out;
}

GridMdp make_gridworld(int width, int height, double gamma) {
  if (width < 1 || height < 1) throw InvalidArgumentError("empty gridworld");
  GridMdp m;
  m.n_states = width * height;
  m.n_actions = 5;
  m.gamma = gamma;
  m.transitions.assign(static_cast<size_t>(m.n_states) * 5 * m.n_states, 0.0);
  const int dx[5] = {0, 0, -1, 1, 0};
  const int dy[5] = {1, -1, 0, 0, 0};
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      for (int a = 0; a < 5; ++a) {
        const int nx = std::clamp(x + dx[a], 0, width - 1);
        const int ny = std::clamp(y + dy[a], 0, height - 1);
        m.t(y * width + x, a, ny * width + nx) = 1.0;
      }
    }
  }
  return m;
}

std::vector<DiscreteTrajectory> sample_trajectories(
    const GridMdp& mdp, std::span<const double> policy,
    std::span<const int> start_states, int length, uint64_t seed) {
  Rng rng(mix64(seed ^ 0x6d6470ULL));
  const int S = mdp.n_states;
  const int A = mdp.n_actions;
  auto draw = [&](const double* p, int n) {
    double u = rng.uniform();
    for (int i = 0; i < n - 1; ++i) {
      if ((u -= p[i]) < 0.0) return i;
    }
    return n - 1;
  };
  std::vector<DiscreteTrajectory> out;
  for (int s0 : start_states) {
    DiscreteTrajectory tr;
    int s = s0;
    for (int t = 0; t < length; ++t) {
      const int a = draw(policy.data() + static_cast<size_t>(s) * A, A);
      tr.emplace_back(s, a);
      s = draw(mdp.transitions.data() + (static_cast<size_t>(s) * A + a) * S, S);
    }
    out.push_back(std::move(tr));
  }
  return out;
}

std::vector<double> state_reward(const GridMdp& mdp,
                                 std::span<const double> theta) {
  if (static_cast<int>(theta.size()) != mdp.n_states) {
    throw DimensionError("theta needs one entry per state");
  }
  std::vector<double> r(static_cast<size_t>(mdp.n_states) * mdp.n_actions);
  for (int s = 0; s < mdp.n_states; ++s) {
    for (int a = 0; a < mdp.n_actions; ++a) r[s * mdp.n_actions + a] = theta[s];
  }
  return r;
}

std::vector<std::vector<int>> optimal_action_sets(const GridMdp& mdp,
                                                  double tol) {
  const ValueIterationResult vi = value_iteration(mdp);
  std::vector<std::vector<int>> out(mdp.n_states);
  for (int s = 0; s < mdp.n_states; ++s) {
    for (int a = 0; a < mdp.n_actions; ++a) {
      if (vi.q[s * mdp.n_actions + a] >= vi.values[s] - tol) out[s].push_back(a);
    }
  }
  return out;
}

double greedy_match_rate(const GridMdp& truth, std::span<const double> theta) {
  const auto optimal = optimal_action_sets(truth);
  GridMdp recovered = truth;
  recovered.reward = state_reward(truth, theta);
  const auto greedy = value_iteration(recovered).policy;
  int hits = 0;
  for (int s = 0; s < truth.n_states; ++s) {
    if (std::find(optimal[s].begin(), optimal[s].end(), greedy[s]) !=
        optimal[s].end()) {
      ++hits;
    }
  }
  return static_cast<double>(hits) / truth.n_states;
}

IrlBenchmark corner_goal_benchmark(int size, int episodes, int length,
                                   uint64_t seed) {
  IrlBenchmark b;
  b.mdp = make_gridworld(size, size, 0.9);
  std::vector<double> theta(b.mdp.n_states, 0.0);
  theta.back() = 1.0;
  b.mdp.reward = state_reward(b.mdp, theta);
  const auto pi = soft_policy(b.mdp, *b.mdp.reward);
  std::vector<int> starts;
  for (int k = 0; k < episodes; ++k) starts.push_back(k % b.mdp.n_states);
  b.demonstrations = sample_trajectories(b.mdp, pi, starts, length, seed);
  return b;
}

}  // namespace demoforge::il
