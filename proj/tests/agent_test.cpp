// Copyright 2026 The textrl Authors. All rights reserved.
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "support.hpp"
#include "textrl/agent/policy.hpp"
#include "textrl/agent/q_network.hpp"
#include "textrl/agent/replay_buffer.hpp"
#include "textrl/agent/targets.hpp"
#include "textrl/agent/trainer.hpp"
#include "textrl/errors.hpp"
#include "textrl/numeric/grad_check.hpp"

using namespace textrl;

namespace {

Parameter& Find(QNetwork& net, const std::string& name) {
  for (Parameter* p : net.Parameters()) {
    if (p->name == name) return *p;
  }
  throw std::runtime_error("no parameter " + name);
}

Observation RandomObservation(Rng& rng) {
  Observation obs;
  obs.feature_dim = architecture::kFeatureWidth;
  obs.window = testing::RandomVector<std::vector<double>>(rng, architecture::kObservationSize, 0.0, 1.0);
  return obs;
}

RecurrentState RandomState(Rng& rng) {
  return {testing::RandomVector<std::vector<double>>(rng, architecture::kRecurrentUnits, -0.5, 0.5),
          testing::RandomVector<std::vector<double>>(rng, architecture::kRecurrentUnits, -0.5, 0.5)};
}

std::vector<Transition> RandomTransitions(Rng& rng, std::size_t n, std::size_t actions) {
  std::vector<Transition> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(Transition{RandomObservation(rng), UniformIndex(rng, actions),
                             UniformReal(rng, -1.0, 1.0), RandomObservation(rng), i % 3 == 0,
                             RandomState(rng)});
  }
  return out;
}

std::vector<const Transition*> Pointers(const std::vector<Transition>& items) {
  std::vector<const Transition*> out;
  for (const auto& t : items) out.push_back(&t);
  return out;
}

QNetwork InitializedNetwork(int classes, std::uint64_t seed,
                            DuelingMode mode = DuelingMode::kMeanCentered) {
  QNetwork net(QNetworkConfig{classes, 1, mode});
  Rng rng(seed);
  net.Initialize(rng);
  return net;
}

}  // namespace

TEST_CASE("dueling aggregation examples") {
  std::array<double, 3> q{};
  const std::array<double, 1> v{2.0};
  const std::array<double, 3> a{1.0, 0.0, -1.0};
  AggregateDueling(DuelingMode::kMeanCentered, 1, 3, v, a, q);
  CHECK(q[0] == doctest::Approx(3.0));
  CHECK(q[1] == doctest::Approx(2.0));
  CHECK(q[2] == doctest::Approx(1.0));

  std::array<double, 2> q2{};
  const std::array<double, 1> v2{1.0};
  const std::array<double, 2> a2{0.5, -0.5};
  AggregateDueling(DuelingMode::kNaiveSum, 1, 2, v2, a2, q2);
  CHECK(q2[0] == doctest::Approx(1.5));
  CHECK(q2[1] == doctest::Approx(0.5));
}

TEST_CASE("mean-centered aggregation ignores a constant advantage shift") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto v = testing::RandomVector(rng, 2);
    auto a = testing::RandomVector(rng, 8);
    std::vector<double> q1(8), q2(8);
    AggregateDueling(DuelingMode::kMeanCentered, 2, 4, v, a, q1);
    const double shift = UniformReal(rng, -10.0, 10.0);
    for (double& x : a) x += shift;
    AggregateDueling(DuelingMode::kMeanCentered, 2, 4, v, a, q2);
    CHECK(testing::MaxAbsDiff(q1, q2) < 1e-12);
    // Mean of Q equals V.
    CHECK((q1[0] + q1[1] + q1[2] + q1[3]) / 4.0 == doctest::Approx(v[0]));
  }
}

TEST_CASE("dueling backward matches finite differences") {
  Rng rng(6);
  for (DuelingMode mode : {DuelingMode::kMeanCentered, DuelingMode::kNaiveSum}) {
    auto v = testing::RandomVector(rng, 3);
    auto a = testing::RandomVector(rng, 12);
    const auto w = testing::RandomVector(rng, 12);
    auto loss = [&] {
      std::vector<double> q(12);
      AggregateDueling(mode, 3, 4, v, a, q);
      double s = 0.0;
      for (std::size_t i = 0; i < 12; ++i) s += w[i] * q[i];
      return s;
    };
    std::vector<double> dv(3), da(12);
    AggregateDuelingBackward(mode, 3, 4, w, dv, da);
    for (std::size_t i = 0; i < 3; ++i) CHECK(dv[i] == doctest::Approx(testing::CentralDifference(loss, v[i])));
    for (std::size_t i = 0; i < 12; ++i) CHECK(da[i] == doctest::Approx(testing::CentralDifference(loss, a[i])));
  }
}

TEST_CASE("network output shapes") {
  Rng rng(1);
  for (int classes : {3, 5}) {
    const QNetwork net = InitializedNetwork(classes, 2);
    CHECK(net.num_actions() == static_cast<std::size_t>(classes) + 1);
    const QOutput out = ForwardQ(net, RandomObservation(rng), RecurrentState::Zero());
    CHECK(out.q.size() == static_cast<std::size_t>(classes) + 1);
    CHECK(out.next.h.size() == 525);
    CHECK(out.next.c.size() == 525);
  }
  const QNetwork both(QNetworkConfig{4, 2});
  CHECK(both.num_actions() == 6);
  CHECK_THROWS_AS(QNetwork(QNetworkConfig{1, 1}), UsageError);
  CHECK_THROWS_AS(QNetwork(QNetworkConfig{3, 3}), UsageError);
}

TEST_CASE("zero-initialised network gives zero Q-values") {
  const QNetwork net(QNetworkConfig{3, 1});
  Observation obs;
  obs.feature_dim = 105;
  obs.window.assign(525, 0.0);
  const QOutput out = ForwardQ(net, obs, RecurrentState::Zero());
  CHECK(testing::MaxAbs(out.q) == 0.0);
}

TEST_CASE("ForwardQ rejects malformed inputs") {
  const QNetwork net = InitializedNetwork(3, 3);
  Observation obs;
  obs.feature_dim = 104;
  obs.window.assign(5 * 104, 0.0);
  CHECK_THROWS_AS(ForwardQ(net, obs, RecurrentState::Zero()), ShapeError);
  obs.feature_dim = 105;
  obs.window.assign(525, 0.0);
  CHECK_THROWS_AS(ForwardQ(net, obs, RecurrentState::Zero(10)), ShapeError);
}

TEST_CASE("non-finite activations name the layer") {
  QNetwork net = InitializedNetwork(3, 4);
  Find(net, "conv2.bias").value[0] = std::nan("");
  Rng rng(1);
  try {
    ForwardQ(net, RandomObservation(rng), RecurrentState::Zero());
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("conv2") != std::string::npos);
  }
}

TEST_CASE("initialisation is seeded") {
  const QNetwork a = InitializedNetwork(3, 11), b = InitializedNetwork(3, 11),
                 c = InitializedNetwork(3, 12);
  const auto pa = a.Parameters(), pb = b.Parameters(), pc = c.Parameters();
  CHECK(pa[0]->value.data == pb[0]->value.data);
  CHECK(pa[0]->value.data != pc[0]->value.data);
  CHECK(testing::MaxAbs(pa[0]->value.data) > 0.0);
}

TEST_CASE("reference and parallel backends agree on the full network") {
  Rng rng(9);
  QNetwork fast = InitializedNetwork(4, 21);
  QNetwork slow = InitializedNetwork(4, 21);
  slow.set_backend(KernelBackend::kReference);
  const std::size_t batch = 3, actions = fast.num_actions();
  const auto obs = testing::RandomVector(rng, batch * 525, 0.0, 1.0);
  const auto h = testing::RandomVector(rng, batch * 525, -0.5, 0.5);
  const auto c = testing::RandomVector(rng, batch * 525, -0.5, 0.5);
  std::vector<double> q1(batch * actions), q2(batch * actions), h1(batch * 525), h2(batch * 525),
      c1(batch * 525), c2(batch * 525);
  QNetwork::Cache k1, k2;
  fast.Forward(batch, obs, h, c, q1, h1, c1, &k1);
  slow.Forward(batch, obs, h, c, q2, h2, c2, &k2);
  CHECK(testing::MaxAbsDiff(q1, q2) < 1e-10);
  CHECK(testing::MaxAbsDiff(h1, h2) < 1e-10);
  CHECK(testing::MaxAbsDiff(c1, c2) < 1e-10);

  const auto d_q = testing::RandomVector(rng, batch * actions);
  fast.ZeroGrad();
  slow.ZeroGrad();
  fast.Backward(k1, d_q);
  slow.Backward(k2, d_q);
  const auto pf = fast.Parameters(), ps = slow.Parameters();
  for (std::size_t i = 0; i < pf.size(); ++i) {
    CAPTURE(pf[i]->name);
    const double scale = std::max(1.0, testing::MaxAbs(ps[i]->grad.data));
    CHECK(testing::MaxAbsDiff(pf[i]->grad.data, ps[i]->grad.data) / scale < 1e-10);
  }
}

TEST_CASE("network gradients pass a sampled finite-difference check") {
  Rng rng(13);
  QNetwork net = InitializedNetwork(3, 31);
  const auto items = RandomTransitions(rng, 2, net.num_actions());
  const auto batch = Pointers(items);
  const std::vector<double> y{0.7, -0.3};
  QNetwork::Cache cache;
  auto params = net.Parameters();
  GradCheckOptions options;
  options.samples_per_parameter = 4;
  const auto report = CheckGradients(
      params,
      [&] {
        const double loss = TdLossAgainstTargets(net, batch, y, false, cache);
        return LossProbe{loss, cache.RegimeHash()};
      },
      [&] { TdLossAgainstTargets(net, batch, y, true, cache); }, options);
  CHECK_MESSAGE(report.passed, report.diagnostic);
  CHECK(report.max_relative_error() < 1e-4);
}

TEST_CASE("parameter sync") {
  QNetwork main = InitializedNetwork(3, 40);
  QNetwork target(main.config());
  target.CopyParametersFrom(main);
  Rng rng(2);
  const auto obs = RandomObservation(rng);
  CHECK(ForwardQ(main, obs, RecurrentState::Zero()).q ==
        ForwardQ(target, obs, RecurrentState::Zero()).q);
  Find(main, "value_out.bias").value[0] += 1.0;
  CHECK(ForwardQ(main, obs, RecurrentState::Zero()).q !=
        ForwardQ(target, obs, RecurrentState::Zero()).q);
  target.CopyParametersFrom(main);
  target.CopyParametersFrom(main);
  CHECK(ForwardQ(main, obs, RecurrentState::Zero()).q ==
        ForwardQ(target, obs, RecurrentState::Zero()).q);
  QNetwork other(QNetworkConfig{5, 1});
  CHECK_THROWS_AS(other.CopyParametersFrom(main), ShapeError);
}

TEST_CASE("greedy action selection") {
  Rng rng(0);
  const std::vector<double> q{0.1, 0.9, 0.3};
  CHECK(Argmax(q) == 1);
  CHECK(SelectAction(q, 0.0, rng) == 1);
  CHECK(Argmax(std::vector<double>{0.5, 0.5, 0.2}) == 0);
  CHECK_THROWS_AS(Argmax(std::vector<double>{}), UsageError);
}

TEST_CASE("fully random action selection is uniform") {
  Rng rng(77);
  const std::vector<double> q{0.1, 0.9, 0.3, -2.0};
  std::vector<std::size_t> counts(4, 0);
  for (int i = 0; i < 10000; ++i) ++counts[SelectAction(q, 1.0, rng)];
  CHECK(testing::ChiSquarePValue(counts) > 0.01);
}

TEST_CASE("epsilon schedule") {
  const EpsilonSchedule s{1.0, 0.1, 100};
  CHECK(s.At(0) == 1.0);
  CHECK(s.At(50) == doctest::Approx(0.55));
  CHECK(s.At(100) == doctest::Approx(0.1));
  CHECK(s.At(1000) == doctest::Approx(0.1));
  double last = 2.0;
  for (std::size_t e = 0; e <= 120; ++e) {
    CHECK(s.At(e) <= last);
    last = s.At(e);
  }
  Hyperparameters hp;
  hp.training_episodes = 300000;
  CHECK(hp.epsilon_schedule().anneal_span == 150000);
}

TEST_CASE("replay buffer") {
  auto make = [](double reward) {
    Transition t;
    t.reward = reward;
    return t;
  };
  Rng rng(3);
  SUBCASE("FIFO eviction") {
    ReplayBuffer buffer(3);
    for (int i = 1; i <= 4; ++i) buffer.Push(make(i));
    CHECK(buffer.size() == 3);
    CHECK(buffer.at(0).reward == 2.0);
    CHECK(buffer.at(2).reward == 4.0);
    for (int i = 5; i <= 7; ++i) buffer.Push(make(i));
    CHECK(buffer.at(0).reward == 5.0);
  }
  SUBCASE("sampling waits for a full batch") {
    ReplayBuffer buffer(10);
    buffer.Push(make(1));
    CHECK_FALSE(buffer.Sample(2, rng).has_value());
    buffer.Push(make(2));
    const auto s = buffer.Sample(2, rng);
    REQUIRE(s.has_value());
    CHECK(s->size() == 2);
    for (const Transition* t : *s) CHECK((t->reward == 1.0 || t->reward == 2.0));
  }
  SUBCASE("samples are uniform over the held items") {
    ReplayBuffer buffer(8);
    for (int i = 0; i < 12; ++i) buffer.Push(make(i));
    std::vector<std::size_t> counts(8, 0);
    for (int draw = 0; draw < 1250; ++draw) {
      const auto sample = buffer.Sample(8, rng);
      for (const Transition* t : *sample) ++counts[static_cast<std::size_t>(t->reward) - 4];
    }
    CHECK(testing::ChiSquarePValue(counts) > 0.01);
  }
  CHECK_THROWS_AS(ReplayBuffer(0), UsageError);
}

TEST_CASE("bootstrap targets") {
  const std::vector<double> q_next{2.0, 1.5};
  CHECK(BootstrapTarget(1.0, true, {}, {}, 0.99, TargetMode::kDouble) == 1.0);
  CHECK(BootstrapTarget(-0.05, false, q_next, q_next, 0.99, TargetMode::kDouble) ==
        doctest::Approx(1.93));
  CHECK(BootstrapTarget(-0.05, false, {}, q_next, 0.99, TargetMode::kVanilla) ==
        doctest::Approx(1.93));
  CHECK(BootstrapTarget(-0.05, false, q_next, q_next, 0.0, TargetMode::kDouble) == -0.05);
  // Main and target disagree on the best next action.
  const std::vector<double> main{1.0, 3.0, 2.0}, target{4.0, 0.5, 5.0};
  CHECK(BootstrapTarget(0.0, false, main, target, 1.0, TargetMode::kDouble) == 0.5);
  CHECK(BootstrapTarget(0.0, false, main, target, 1.0, TargetMode::kVanilla) == 5.0);
  // When both networks rank actions alike the modes coincide.
  Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    const auto t = testing::RandomVector(rng, 4);
    const double r = UniformReal(rng, -1, 1);
    CHECK(BootstrapTarget(r, false, t, t, 0.9, TargetMode::kDouble) ==
          BootstrapTarget(r, false, {}, t, 0.9, TargetMode::kVanilla));
  }
}

TEST_CASE("TD loss examples") {
  // Biases on the value head make Q constant over actions and inputs.
  QNetwork main(QNetworkConfig{3, 1}), target(QNetworkConfig{3, 1});
  Find(main, "value_out.bias").value[0] = 1.0;
  Find(target, "value_out.bias").value[0] = 2.0;
  Rng rng(4);
  Transition t{RandomObservation(rng), 0, -0.05, RandomObservation(rng), false,
               RecurrentState::Zero()};
  const std::vector<const Transition*> one{&t};
  CHECK(TdLoss(one, main, target, 0.99, TargetMode::kDouble) == doctest::Approx(0.8649));

  QNetwork zero(QNetworkConfig{3, 1});
  Transition a{RandomObservation(rng), 1, 0.4, RandomObservation(rng), true, RecurrentState::Zero()};
  Transition b{RandomObservation(rng), 2, 0.2, RandomObservation(rng), true, RecurrentState::Zero()};
  const std::vector<const Transition*> two{&a, &b};
  CHECK(TdLoss(two, zero, zero, 0.99, TargetMode::kDouble) == doctest::Approx(0.10));
  CHECK_THROWS_AS(TdLoss({}, zero, zero, 0.99, TargetMode::kDouble), UsageError);
}

TEST_CASE("batched targets and loss match the per-transition route") {
  Rng rng(17);
  for (TargetMode mode : {TargetMode::kDouble, TargetMode::kVanilla}) {
    const QNetwork main = InitializedNetwork(3, 50), target = InitializedNetwork(3, 51);
    QNetwork trainee = InitializedNetwork(3, 50);
    const auto items = RandomTransitions(rng, 7, main.num_actions());
    const auto batch = Pointers(items);
    const auto y = BatchTargets(batch, main, target, 0.99, mode);
    for (std::size_t i = 0; i < items.size(); ++i) {
      CHECK(y[i] == doctest::Approx(ComputeTarget(items[i], main, target, 0.99, mode)).epsilon(1e-10));
    }
    QNetwork::Cache cache;
    CHECK(TdLossAgainstTargets(trainee, batch, y, false, cache) ==
          doctest::Approx(TdLoss(batch, main, target, 0.99, mode)).epsilon(1e-10));
    // Reusing the loss pass's recurrent outputs changes nothing beyond the
    // rounding of a differently sized matrix product.
    const auto stepped = BatchTargets(batch, main, target, 0.99, mode, &cache);
    CHECK(testing::MaxAbsDiff(stepped, y) < 1e-12);
  }
}

TEST_CASE("trainer") {
  Rng rng(23);
  FeaturizedCorpus corpus;
  corpus.classes = 2;
  for (int i = 0; i < 6; ++i) {
    TokenFeatureSequence seq;
    const std::size_t n = 3 + UniformIndex(rng, 15);
    seq.tokens.assign(n, "w");
    seq.feature_dim = 105;
    seq.features = testing::RandomVector<std::vector<double>>(rng, n * 105, 0.0, 1.0);
    corpus.ids.push_back("t" + std::to_string(i));
    corpus.texts.push_back(std::move(seq));
    corpus.levels.push_back(1 + i % 2);
  }
  Hyperparameters hp;
  hp.training_episodes = 12;
  hp.batch_size = 4;
  hp.buffer_capacity = 16;
  const RewardConfig rewards;

  SUBCASE("identical seeds give identical runs") {
    Trainer a(hp, rewards, 2, 99), b(hp, rewards, 2, 99), c(hp, rewards, 2, 100);
    const auto la = a.Train(corpus), lb = b.Train(corpus), lc = c.Train(corpus);
    REQUIRE(la.size() == 12);
    bool differs = false;
    for (std::size_t i = 0; i < la.size(); ++i) {
      CHECK(la[i].total_reward == lb[i].total_reward);
      CHECK(la[i].mean_loss == lb[i].mean_loss);
      CHECK(la[i].moves == lb[i].moves);
      differs = differs || la[i].total_reward != lc[i].total_reward || la[i].moves != lc[i].moves;
    }
    const auto pa = a.main().Parameters(), pb = b.main().Parameters();
    for (std::size_t i = 0; i < pa.size(); ++i) CHECK(pa[i]->value.data == pb[i]->value.data);
    CHECK(differs);
  }
  SUBCASE("target network changes only at sync points") {
    Trainer t(hp, rewards, 2, 5);
    const auto initial = t.target().Parameters()[0]->value.data;
    for (int e = 1; e <= 4; ++e) {
      t.RunEpisode(corpus);
      CHECK(t.target().Parameters()[0]->value.data == initial);
    }
    t.RunEpisode(corpus);
    CHECK(t.target().Parameters()[0]->value.data == t.main().Parameters()[0]->value.data);
  }
  SUBCASE("updates start once a batch is available") {
    Trainer t(hp, rewards, 2, 6);
    CHECK_FALSE(t.UpdateStep().has_value());
    std::size_t updates = 0, steps = 0;
    for (const auto& log : t.Train(corpus)) {
      updates += log.updates;
      steps += log.moves + (log.outcome == Outcome::kClassified ? 1 : 0);
    }
    CHECK(t.buffer().size() == std::min<std::size_t>(steps, 16));
    CHECK(updates == (steps >= 4 ? steps - 3 : 0));
  }
  SUBCASE("invalid hyperparameters") {
    Hyperparameters bad = hp;
    bad.batch_size = 0;
    CHECK_THROWS_AS(Trainer(bad, rewards, 2, 1), UsageError);
    bad = hp;
    bad.epsilon_final = 0.9;
    bad.epsilon_initial = 0.5;
    CHECK_THROWS_AS(Trainer(bad, rewards, 2, 1), UsageError);
  }
}
