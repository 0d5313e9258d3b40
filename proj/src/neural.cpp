#include "mutascan/neural.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>

#include "mutascan/error.hpp"
#include "mutascan/rng.hpp"
#include "mutascan/seqstats.hpp"

namespace mutascan {

namespace {

bool is_transition(char a, char b) noexcept {
  return (a == 'A' && b == 'G') || (a == 'G' && b == 'A') || (a == 'C' && b == 'T') ||
         (a == 'T' && b == 'C');
}

// Preallocated per-thread buffers for forward/backward passes.
struct Workspace {
  std::vector<std::vector<double>> act;
  std::vector<std::vector<double>> delta;

  explicit Workspace(const Network& net) {
    for (std::size_t size : net.topology.layerSizes) {
      act.emplace_back(size, 0.0);
      delta.emplace_back(size, 0.0);
    }
  }
};

void check_input(const Network& net, std::size_t size) {
  if (size != net.input_size())
    throw Error(ErrorCode::DimensionMismatch,
                "input has " + std::to_string(size) + " values, network expects " +
                    std::to_string(net.input_size()));
}

void forward_into(const Network& net, std::span<const double> x, Workspace& ws) {
  std::copy(x.begin(), x.end(), ws.act[0].begin());
  const auto& sizes = net.topology.layerSizes;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const std::vector<double>& w = net.weights[l];
    const std::vector<double>& in = ws.act[l];
    std::vector<double>& out = ws.act[l + 1];
    const std::size_t from = sizes[l];
    for (std::size_t r = 0; r < sizes[l + 1]; ++r) {
      double z = net.biases[l][r];
      const double* row = &w[r * from];
      for (std::size_t c = 0; c < from; ++c) z += row[c] * in[c];
      out[r] = sigmoid(z);
    }
  }
}

// g += gradient of (o - t)^2 for one sample.
void accumulate_gradient(const Network& net, const Sample& s, Workspace& ws, Gradient& g) {
  forward_into(net, s.x, ws);
  const auto& sizes = net.topology.layerSizes;
  const std::size_t last = sizes.size() - 1;
  const double o = ws.act[last][0];
  ws.delta[last][0] = 2.0 * (o - s.target) * o * (1.0 - o);

  for (std::size_t l = last; l >= 1; --l) {
    const std::size_t from = sizes[l - 1];
    const std::vector<double>& in = ws.act[l - 1];
    const std::vector<double>& d = ws.delta[l];
    std::vector<double>& gw = g.weights[l - 1];
    std::vector<double>& gb = g.biases[l - 1];
    for (std::size_t r = 0; r < sizes[l]; ++r) {
      double* row = &gw[r * from];
      for (std::size_t c = 0; c < from; ++c) row[c] += d[r] * in[c];
      gb[r] += d[r];
    }
    if (l == 1) break;
    const std::vector<double>& w = net.weights[l - 1];
    std::vector<double>& prev = ws.delta[l - 1];
    for (std::size_t c = 0; c < from; ++c) {
      double sum = 0.0;
      for (std::size_t r = 0; r < sizes[l]; ++r) sum += w[r * from + c] * d[r];
      prev[c] = sum * in[c] * (1.0 - in[c]);
    }
  }
}

void check_samples(const Network& net, std::span<const Sample> data) {
  if (data.empty()) throw Error(ErrorCode::EmptyDataset, "training data is empty");
  for (const Sample& s : data) check_input(net, s.x.size());
}

}  // namespace

FeatureVector encode(const Mutation& mut, const DnaSequence& ref) {
  FeatureVector f;
  auto& v = f.values;
  const double len = static_cast<double>(ref.size());
  v[0] = std::clamp(static_cast<double>(mut.position) / len, 0.0, 1.0);
  v[1] = mut.kind == MutationKind::Substitution ? 1.0 : 0.0;
  v[2] = mut.kind == MutationKind::Insertion ? 1.0 : 0.0;
  v[3] = mut.kind == MutationKind::Deletion ? 1.0 : 0.0;
  if (mut.effect) {
    v[4] = mut.effect->kind == EffectKind::Silent ? 1.0 : 0.0;
    v[5] = mut.effect->kind == EffectKind::Missense ? 1.0 : 0.0;
    v[6] = mut.effect->kind == EffectKind::Nonsense ? 1.0 : 0.0;
    v[7] = mut.effect->kind == EffectKind::Frameshift ? 1.0 : 0.0;
  }
  // Insertions at position 0 take the window around base 1.
  const std::size_t centre = std::clamp<std::size_t>(mut.position, 1, ref.size());
  v[8] = windowed_gc(ref, centre, kDefaultGcWindow);
  if (mut.kind == MutationKind::Substitution) {
    // A merged multi-base substitution counts as a transition only if every base is one.
    bool allTransitions = !mut.refBases.empty();
    for (std::size_t i = 0; i < mut.refBases.size() && i < mut.altBases.size(); ++i)
      allTransitions = allTransitions && is_transition(mut.refBases[i], mut.altBases[i]);
    v[9] = allTransitions ? 1.0 : 0.0;
  } else {
    v[9] = 0.5;
  }
  return f;
}

void NetworkTopology::validate() const {
  if (layerSizes.size() < 3)
    throw Error(ErrorCode::InvalidArgument,
                "topology needs an input, at least one hidden and an output layer");
  if (std::any_of(layerSizes.begin(), layerSizes.end(), [](std::size_t s) { return s == 0; }))
    throw Error(ErrorCode::InvalidArgument, "layer sizes must be positive");
  if (layerSizes.back() != 1)
    throw Error(ErrorCode::InvalidArgument, "output layer must have exactly one node");
}

Network Network::zeros(const NetworkTopology& topology) {
  topology.validate();
  Network net;
  net.topology = topology;
  const auto& s = topology.layerSizes;
  for (std::size_t l = 0; l + 1 < s.size(); ++l) {
    net.weights.emplace_back(s[l + 1] * s[l], 0.0);
    net.biases.emplace_back(s[l + 1], 0.0);
  }
  return net;
}

std::size_t Network::parameter_count() const noexcept {
  std::size_t n = 0;
  for (const auto& w : weights) n += w.size();
  for (const auto& b : biases) n += b.size();
  return n;
}

double sigmoid(double z) noexcept {
  // Clamped so the output stays strictly inside (0, 1) in double precision.
  const double y = 1.0 / (1.0 + std::exp(-z));
  return std::clamp(y, DBL_MIN, 1.0 - DBL_EPSILON / 2);
}

double forward(const Network& net, std::span<const double> x) {
  check_input(net, x.size());
  Workspace ws(net);
  forward_into(net, x, ws);
  return ws.act.back()[0];
}

double forward(const Network& net, const FeatureVector& x) {
  return forward(net, std::span<const double>(x.values));
}

Gradient Gradient::zeros_like(const Network& net) {
  Gradient g;
  for (const auto& w : net.weights) g.weights.emplace_back(w.size(), 0.0);
  for (const auto& b : net.biases) g.biases.emplace_back(b.size(), 0.0);
  return g;
}

void Gradient::add(const Gradient& other) {
  for (std::size_t l = 0; l < weights.size(); ++l) {
    for (std::size_t i = 0; i < weights[l].size(); ++i) weights[l][i] += other.weights[l][i];
    for (std::size_t i = 0; i < biases[l].size(); ++i) biases[l][i] += other.biases[l][i];
  }
}

void Gradient::scale(double factor) {
  for (auto& w : weights)
    for (double& x : w) x *= factor;
  for (auto& b : biases)
    for (double& x : b) x *= factor;
}

Gradient gradient(const Network& net, const Sample& sample) {
  check_input(net, sample.x.size());
  Workspace ws(net);
  Gradient g = Gradient::zeros_like(net);
  accumulate_gradient(net, sample, ws, g);
  return g;
}

Gradient batch_gradient_serial(const Network& net, std::span<const Sample> data) {
  check_samples(net, data);
  Workspace ws(net);
  Gradient g = Gradient::zeros_like(net);
  for (const Sample& s : data) accumulate_gradient(net, s, ws, g);
  g.scale(1.0 / static_cast<double>(data.size()));
  return g;
}

Gradient batch_gradient_parallel(const Network& net, std::span<const Sample> data) {
  check_samples(net, data);
  std::vector<Gradient> parts(data.size(), Gradient::zeros_like(net));
  const auto n = static_cast<long>(data.size());
#pragma omp parallel
  {
    Workspace ws(net);
#pragma omp for schedule(static)
    for (long i = 0; i < n; ++i)
      accumulate_gradient(net, data[static_cast<std::size_t>(i)], ws, parts[static_cast<std::size_t>(i)]);
  }
  Gradient g = Gradient::zeros_like(net);
  for (const Gradient& p : parts) g.add(p);
  g.scale(1.0 / static_cast<double>(data.size()));
  return g;
}

double mean_squared_error(const Network& net, std::span<const Sample> data) {
  check_samples(net, data);
  Workspace ws(net);
  double sum = 0.0;
  for (const Sample& s : data) {
    forward_into(net, s.x, ws);
    const double e = ws.act.back()[0] - s.target;
    sum += e * e;
  }
  return sum / static_cast<double>(data.size());
}

void TrainConfig::validate() const {
  if (!(learningRate > 0.0)) throw Error(ErrorCode::InvalidArgument, "learning rate must be > 0");
  if (!(momentum >= 0.0 && momentum < 1.0))
    throw Error(ErrorCode::InvalidArgument, "momentum must lie in [0, 1)");
  if (!(targetMse > 0.0)) throw Error(ErrorCode::InvalidArgument, "target MSE must be > 0");
  if (maxEpochs < 1) throw Error(ErrorCode::InvalidArgument, "maxEpochs must be >= 1");
  if (!(initRange >= 0.0)) throw Error(ErrorCode::InvalidArgument, "init range must be >= 0");
}

Network initialize(const NetworkTopology& topology, std::uint64_t seed, double range) {
  Network net = Network::zeros(topology);
  Rng rng(seed);
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    for (double& w : net.weights[l]) w = rng.uniform(-range, range);
    for (double& b : net.biases[l]) b = rng.uniform(-range, range);
  }
  return net;
}

TrainResult train_from(Network net, std::span<const Sample> data, const TrainConfig& cfg) {
  cfg.validate();
  net.topology.validate();
  check_samples(net, data);

  Gradient velocity = Gradient::zeros_like(net);
  TrainReport report;
  const bool parallel = data.size() >= kParallelBatchThreshold;
  for (std::uint64_t epoch = 0; epoch < cfg.maxEpochs; ++epoch) {
    const Gradient g =
        parallel ? batch_gradient_parallel(net, data) : batch_gradient_serial(net, data);
    for (std::size_t l = 0; l < net.weights.size(); ++l) {
      for (std::size_t i = 0; i < net.weights[l].size(); ++i) {
        double& v = velocity.weights[l][i];
        v = cfg.momentum * v - cfg.learningRate * g.weights[l][i];
        net.weights[l][i] += v;
      }
      for (std::size_t i = 0; i < net.biases[l].size(); ++i) {
        double& v = velocity.biases[l][i];
        v = cfg.momentum * v - cfg.learningRate * g.biases[l][i];
        net.biases[l][i] += v;
      }
    }
    const double mse = mean_squared_error(net, data);
    report.history.push_back(mse);
    ++report.epochsRun;
    if (mse <= cfg.targetMse) break;
  }
  report.finalMse = report.history.back();
  report.converged = report.finalMse <= cfg.targetMse;
  return {std::move(net), std::move(report)};
}

TrainResult train(const NetworkTopology& topology, std::span<const Sample> data,
                  const TrainConfig& cfg) {
  cfg.validate();
  return train_from(initialize(topology, cfg.seed, cfg.initRange), data, cfg);
}

std::string_view to_string(Label label) noexcept {
  return label == Label::AtRisk ? "AtRisk" : "Normal";
}

Label parse_label(std::string_view text) {
  if (text == "AtRisk") return Label::AtRisk;
  if (text == "Normal") return Label::Normal;
  throw Error(ErrorCode::InvalidArgument, "unknown label '" + std::string(text) + "'");
}

Classification classify_score(double score, double threshold) noexcept {
  return {score, score >= threshold ? Label::AtRisk : Label::Normal};
}

Classification classify(const Network& net, const FeatureVector& x, double threshold) {
  return classify_score(forward(net, x), threshold);
}

}  // namespace mutascan
