#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mutascan/mutation.hpp"
#include "mutascan/seqio.hpp"

namespace mutascan {

inline constexpr std::size_t kFeatureCount = 10;

/// Ten features in [0,1], in this fixed order:
///  0 relative position, 1-3 one-hot kind (Sub, Ins, Del),
///  4-6 one-hot effect (Silent, Missense, Nonsense), 7 frameshift flag,
///  8 local GC fraction, 9 transition flag (0.5 for indels).
struct FeatureVector {
  std::array<double, kFeatureCount> values{};

  bool operator==(const FeatureVector&) const = default;
};

FeatureVector encode(const Mutation& mut, const DnaSequence& ref);

struct NetworkTopology {
  std::vector<std::size_t> layerSizes{10, 4, 1};

  void validate() const;
  bool operator==(const NetworkTopology&) const = default;
};

/// Fully connected feed-forward net with a logistic sigmoid on every
/// non-input layer. `weights[l]` maps layer l to l+1 and is row-major
/// (to x from); `biases[l]` belongs to layer l+1.
struct Network {
  NetworkTopology topology;
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;

  static Network zeros(const NetworkTopology& topology);

  std::size_t input_size() const noexcept { return topology.layerSizes.front(); }
  std::size_t layer_count() const noexcept { return topology.layerSizes.size(); }
  std::size_t parameter_count() const noexcept;
  bool operator==(const Network&) const = default;
};

double sigmoid(double z) noexcept;

double forward(const Network& net, std::span<const double> x);
double forward(const Network& net, const FeatureVector& x);

/// Partial derivatives with the same layout as the network's parameters.
struct Gradient {
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;

  static Gradient zeros_like(const Network& net);
  void add(const Gradient& other);
  void scale(double factor);
};

struct Sample {
  std::vector<double> x;
  double target = 0.0;
};

/// d(o - t)^2 / d(param) for one sample, by backpropagation of the layer
/// error terms. At the output the error term is 2(o - t) o (1 - o).
Gradient gradient(const Network& net, const Sample& sample);

// Mean of per-sample gradients. The parallel kernel computes samples
// concurrently but sums them in sample order, so both are bit-identical.
Gradient batch_gradient_serial(const Network& net, std::span<const Sample> data);
Gradient batch_gradient_parallel(const Network& net, std::span<const Sample> data);

inline constexpr std::size_t kParallelBatchThreshold = 256;

double mean_squared_error(const Network& net, std::span<const Sample> data);

struct TrainConfig {
  double learningRate = 0.5;
  double momentum = 0.9;
  double targetMse = 1e-9;
  std::uint64_t maxEpochs = 500'000;
  std::uint64_t seed = 42;
  double initRange = 0.5;  // weights start uniform in [-initRange, +initRange]

  void validate() const;
  bool operator==(const TrainConfig&) const = default;
};

struct TrainReport {
  std::uint64_t epochsRun = 0;
  double finalMse = 0.0;
  bool converged = false;
  std::vector<double> history;  // MSE after each epoch
};

struct TrainResult {
  Network network;
  TrainReport report;
};

// Seeded uniform initialisation, layer by layer, weights then biases.
Network initialize(const NetworkTopology& topology, std::uint64_t seed, double range);

/// Full-batch gradient descent with momentum on the mean squared error,
/// stopping at `targetMse` or `maxEpochs`.
TrainResult train(const NetworkTopology& topology, std::span<const Sample> data,
                  const TrainConfig& cfg = {});
// Continues from an explicit starting network.
TrainResult train_from(Network start, std::span<const Sample> data, const TrainConfig& cfg);

enum class Label { AtRisk, Normal };

std::string_view to_string(Label label) noexcept;
Label parse_label(std::string_view text);

struct Classification {
  double score = 0.0;
  Label label = Label::Normal;

  bool operator==(const Classification&) const = default;
};

// AtRisk iff score >= threshold.
Classification classify(const Network& net, const FeatureVector& x, double threshold = 0.5);
Classification classify_score(double score, double threshold = 0.5) noexcept;

// ---- persistence -------------------------------------------------------

inline constexpr int kModelFormatVersion = 1;

std::string save_net_string(const Network& net, const TrainConfig& cfg = {});
Network load_net_string(const std::string& text, TrainConfig* cfg = nullptr);
void save_net(const Network& net, const std::filesystem::path& path, const TrainConfig& cfg = {});
Network load_net(const std::filesystem::path& path, TrainConfig* cfg = nullptr);

// ---- training data -----------------------------------------------------

/// One line of a training/feature file. Either `features` is given
/// directly or it is derived from `mutation` against a reference.
struct LabeledExample {
  std::string id;
  std::string gene;
  FeatureVector features;
  std::optional<int> label;
};

struct ReferenceContext {
  const DnaSequence* reference = nullptr;
  std::size_t cdsStart = 0;
  std::size_t cdsEnd = 0;
};

std::vector<LabeledExample> parse_examples(const std::string& jsonl,
                                           const ReferenceContext& ctx = {});
std::vector<LabeledExample> load_examples(const std::filesystem::path& path,
                                          const ReferenceContext& ctx = {});
std::string example_to_jsonl(const LabeledExample& ex, const Mutation* mutation = nullptr);

// Labeled examples as training samples; unlabeled ones are rejected.
std::vector<Sample> to_samples(const std::vector<LabeledExample>& examples);

}  // namespace mutascan
