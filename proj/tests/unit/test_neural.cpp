#include <random>

#include "doctest.h"
#include "mutascan/error.hpp"
#include "mutascan/neural.hpp"
#include "mutascan/protein.hpp"
#include "mutascan/seqstats.hpp"
#include "oracles.hpp"

using namespace mutascan;

namespace {

Network random_net(const std::vector<std::size_t>& sizes, std::uint64_t seed, double range = 1.0) {
  return initialize(NetworkTopology{sizes}, seed, range);
}

std::vector<Sample> xor_data() {
  return {{{0, 0}, 0}, {{0, 1}, 1}, {{1, 0}, 1}, {{1, 1}, 0}};
}

}  // namespace

TEST_CASE("encode: silent transition") {
  std::string bases(100, 'A');
  // 21-base window around 50 covers 40..60; put 8 G/C bases there -> 8/21.
  for (std::size_t p : {40u, 42u, 44u, 46u, 54u, 56u, 58u, 60u}) bases[p - 1] = 'G';
  bases[49] = 'C';
  const DnaSequence ref("r", "", bases);
  Mutation m{50, MutationKind::Substitution, "C", "T", ProteinEffect{EffectKind::Silent, {}, {}}};
  const FeatureVector f = encode(m, ref);
  const std::array<double, 10> expected{0.5, 1, 0, 0, 1, 0, 0, 0, 9.0 / 21.0, 1};
  CHECK(f.values == expected);
}

TEST_CASE("encode: frameshift insertion") {
  const DnaSequence ref("r", "", std::string(100, 'A'));
  Mutation m{10, MutationKind::Insertion, "", "G", ProteinEffect{EffectKind::Frameshift, {}, {}}};
  const FeatureVector f = encode(m, ref);
  CHECK(f.values[0] == 0.1);
  CHECK(f.values[1] == 0.0);
  CHECK(f.values[2] == 1.0);
  CHECK(f.values[3] == 0.0);
  CHECK(f.values[4] == 0.0);
  CHECK(f.values[5] == 0.0);
  CHECK(f.values[6] == 0.0);
  CHECK(f.values[7] == 1.0);
  CHECK(f.values[9] == 0.5);
}

TEST_CASE("encode: transversion and window oracle") {
  std::mt19937_64 rng(900);
  const std::string bases = oracle::random_dna(rng, 400);
  const DnaSequence ref("r", "", bases);
  std::uniform_int_distribution<std::size_t> pos(1, 400);
  for (int i = 0; i < 100; ++i) {
    const std::size_t p = pos(rng);
    const char r = bases[p - 1];
    const char alt = (r == 'A' || r == 'G') ? 'C' : 'A';
    Mutation m{p, MutationKind::Substitution, std::string(1, r), std::string(1, alt), {}};
    m.effect = classify_effect(m, ref, 1, 399);
    const FeatureVector f = encode(m, ref);
    CHECK(f.values[8] == oracle::window_gc(bases, static_cast<long>(p), 21));
    CHECK(f.values[9] == 0.0);
    for (double v : f.values) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("forward: zero network gives one half") {
  const Network z = Network::zeros(NetworkTopology{});
  CHECK(forward(z, std::vector<double>(10, 0.3)) == 0.5);
  CHECK_THROWS_AS(forward(z, std::vector<double>(9, 0.3)), Error);
}

TEST_CASE("forward: hand-evaluated 1-1-1 net") {
  Network n = Network::zeros(NetworkTopology{{1, 1, 1}});
  n.weights[0][0] = 1.0;
  n.weights[1][0] = 1.0;
  const double out = forward(n, std::vector<double>{0.0});
  CHECK(out == doctest::Approx(0.622459).epsilon(1e-6));
  CHECK(out == 1.0 / (1.0 + std::exp(-0.5)));
}

TEST_CASE("forward: hidden permutation symmetry") {
  Network n = random_net({10, 4, 1}, 5);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> x(10);
  for (double& v : x) v = u(rng);
  const double before = forward(n, x);
  // Swap hidden units 0 and 3.
  Network p = n;
  for (std::size_t i = 0; i < 10; ++i) std::swap(p.weights[0][0 * 10 + i], p.weights[0][3 * 10 + i]);
  std::swap(p.biases[0][0], p.biases[0][3]);
  std::swap(p.weights[1][0], p.weights[1][3]);
  CHECK(forward(p, x) == doctest::Approx(before).epsilon(1e-15));
}

TEST_CASE("forward output strictly inside the unit interval") {
  Network n = Network::zeros(NetworkTopology{{1, 1, 1}});
  n.weights[0][0] = 1e6;
  n.weights[1][0] = 1e6;
  const double hi = forward(n, std::vector<double>{1.0});
  CHECK(hi < 1.0);
  n.weights[1][0] = -1e6;
  const double lo = forward(n, std::vector<double>{1.0});
  CHECK(lo > 0.0);
}

TEST_CASE("gradient: zero at a zero-error sample") {
  const Network z = Network::zeros(NetworkTopology{});
  const Gradient g = gradient(z, Sample{std::vector<double>(10, 0.7), 0.5});
  for (const auto& layer : g.weights)
    for (double v : layer) CHECK(v == 0.0);
  for (const auto& layer : g.biases)
    for (double v : layer) CHECK(v == 0.0);
}

TEST_CASE("gradient: hand-derived single weight partial") {
  Network n = Network::zeros(NetworkTopology{{1, 1, 1}});
  n.weights[0][0] = 0.3;
  n.weights[1][0] = -0.7;
  n.biases[0][0] = 0.1;
  n.biases[1][0] = 0.2;
  const double x = 0.9, t = 1.0;
  const double h = 1.0 / (1.0 + std::exp(-(0.3 * x + 0.1)));
  const double o = 1.0 / (1.0 + std::exp(-(-0.7 * h + 0.2)));
  const double delta = (o - t) * o * (1.0 - o);
  const Gradient g = gradient(n, Sample{{x}, t});
  // d(o-t)^2/dw = 2 * delta * h
  CHECK(g.weights[1][0] == doctest::Approx(2.0 * delta * h).epsilon(1e-14));
  CHECK(g.biases[1][0] == doctest::Approx(2.0 * delta).epsilon(1e-14));
}

TEST_CASE("gradient matches finite differences on assorted topologies") {
  std::mt19937_64 rng(31);
  const std::vector<std::vector<std::size_t>> shapes{
      {10, 4, 1}, {1, 1, 1}, {2, 4, 1}, {4, 2, 1}, {10, 10, 1}, {2, 2, 2, 1}, {4, 10, 4, 1}};
  std::uniform_real_distribution<double> u(0, 1);
  for (std::size_t c = 0; c < shapes.size(); ++c) {
    const Network n = random_net(shapes[c], 1000 + c);
    Sample s;
    s.x.resize(shapes[c][0]);
    for (double& v : s.x) v = u(rng);
    s.target = u(rng) < 0.5 ? 0.0 : 1.0;
    const Gradient g = gradient(n, s);
    for (std::size_t l = 0; l < n.weights.size(); ++l) {
      for (std::size_t i = 0; i < n.weights[l].size(); ++i) {
        const double fd = oracle::central_difference(shapes[c], n.weights, n.biases, s.x, s.target,
                                                     false, l, i);
        CHECK(g.weights[l][i] == doctest::Approx(fd).epsilon(1e-6).scale(1e-7));
      }
      for (std::size_t i = 0; i < n.biases[l].size(); ++i) {
        const double fd = oracle::central_difference(shapes[c], n.weights, n.biases, s.x, s.target,
                                                     true, l, i);
        CHECK(g.biases[l][i] == doctest::Approx(fd).epsilon(1e-6).scale(1e-7));
      }
    }
  }
}

TEST_CASE("training: zero-error fixed point converges at epoch 1") {
  const std::vector<Sample> one{{std::vector<double>(10, 0.2), 0.5}};
  TrainConfig cfg;
  cfg.targetMse = 1e-12;
  const TrainResult r = train_from(Network::zeros(NetworkTopology{}), one, cfg);
  CHECK(r.report.epochsRun == 1);
  CHECK(r.report.converged);
  CHECK(r.report.finalMse == 0.0);
}

TEST_CASE("training: monotone descent with small steps") {
  const std::vector<Sample> data{
      {{0.1, 0.9}, 1}, {{0.8, 0.2}, 0}, {{0.5, 0.5}, 1}, {{0.3, 0.3}, 0}};
  TrainConfig cfg;
  cfg.learningRate = 1e-3;
  cfg.momentum = 0.0;
  cfg.maxEpochs = 1000;
  const TrainResult r = train(NetworkTopology{{2, 4, 1}}, data, cfg);
  REQUIRE(r.report.history.size() == 1000);
  for (std::size_t i = 1; i < r.report.history.size(); ++i)
    CHECK(r.report.history[i] <= r.report.history[i - 1]);
}

TEST_CASE("training: XOR and determinism") {
  TrainConfig cfg;
  cfg.maxEpochs = 100000;
  cfg.targetMse = 1e-4;
  const auto data = xor_data();
  const TrainResult a = train(NetworkTopology{{2, 4, 1}}, data, cfg);
  const TrainResult b = train(NetworkTopology{{2, 4, 1}}, data, cfg);
  CHECK(a.report.finalMse < 1e-3);
  CHECK(a.report.history == b.report.history);
  CHECK(a.network == b.network);
  CHECK(a.report.history.size() == a.report.epochsRun);
  CHECK(a.report.finalMse == a.report.history.back());
  for (const Sample& s : data) CHECK(std::abs(forward(a.network, s.x) - s.target) < 0.05);
}

TEST_CASE("training errors") {
  CHECK_THROWS_AS(train(NetworkTopology{}, std::vector<Sample>{}), Error);
  const std::vector<Sample> bad{{{0.1, 0.2}, 1}};
  CHECK_THROWS_AS(train(NetworkTopology{}, bad), Error);
  const NetworkTopology twoLayers{{10, 1}};
  CHECK_THROWS_AS(twoLayers.validate(), Error);
  CHECK_THROWS_AS(to_samples({}), Error);
}

TEST_CASE("classification threshold") {
  CHECK(classify_score(0.9).label == Label::AtRisk);
  CHECK(classify_score(0.5).label == Label::AtRisk);
  CHECK(classify_score(0.4999999).label == Label::Normal);
  for (double s = 0.0; s <= 1.0; s += 0.01)
    CHECK((classify_score(s).label == Label::AtRisk) == (s >= 1.0 - s));
}

TEST_CASE("persistence round-trip") {
  const Network z = Network::zeros(NetworkTopology{});
  CHECK(load_net_string(save_net_string(z)) == z);
  const Network n = random_net({10, 4, 1}, 77);
  TrainConfig cfg;
  cfg.seed = 99;
  TrainConfig back;
  CHECK(load_net_string(save_net_string(n, cfg), &back) == n);
  CHECK(back == cfg);
}

TEST_CASE("persistence errors") {
  const std::string good = save_net_string(random_net({10, 4, 1}, 1));
  const auto code = [](const std::string& text) {
    try {
      load_net_string(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::IoFailure;
  };
  CHECK(code(good.substr(0, good.size() / 2)) == ErrorCode::CorruptFile);
  std::string shortWeights = good;
  const std::size_t at = shortWeights.find(',', shortWeights.find("\"weights\""));
  shortWeights.erase(at, shortWeights.find_first_of(",]", at + 1) - at);
  CHECK(code(shortWeights) == ErrorCode::CorruptFile);
  std::string v2 = good;
  v2.replace(v2.find("\"version\": 1"), 12, "\"version\": 2");
  CHECK(code(v2) == ErrorCode::VersionMismatch);
  CHECK(code("{}") == ErrorCode::CorruptFile);
}

TEST_CASE("training file parsing") {
  const std::string text =
      "{\"id\":\"a\",\"gene\":\"BRCA1\",\"features\":[0,0,0,0,0,0,0,0,0,1],\"label\":1}\n"
      "\n"
      "{\"id\":\"b\",\"gene\":\"BRCA2\",\"mutation\":{\"position\":2,\"kind\":\"Substitution\","
      "\"ref\":\"A\",\"alt\":\"G\"},\"label\":0}\n";
  const DnaSequence ref("r", "", "CAAGGGTTTCCC");
  const auto ex = parse_examples(text, ReferenceContext{&ref, 1, 12});
  REQUIRE(ex.size() == 2);
  CHECK(ex[0].features.values[9] == 1.0);
  CHECK(ex[1].label == 0);
  CHECK(ex[1].features.values[9] == 1.0);  // A->G transition
  CHECK(ex[1].features.values[5] == 1.0);  // CAA->CGA missense
  CHECK_THROWS_AS(parse_examples(text), Error);
  CHECK_THROWS_AS(parse_examples("{\"features\":[1,2]}\n"), Error);
  CHECK_THROWS_AS(parse_examples("not json\n"), Error);
  const auto samples = to_samples({ex[0]});
  CHECK(samples[0].target == 1.0);
}
