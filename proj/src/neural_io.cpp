#include <cmath>

#include "json.hpp"
#include "mutascan/error.hpp"
#include "mutascan/neural.hpp"
#include "mutascan/protein.hpp"

namespace mutascan {

using ojson = nlohmann::ordered_json;

namespace {

constexpr std::string_view kModelFormat = "mutascan-bpn";

[[noreturn]] void corrupt(const std::string& why) {
  throw Error(ErrorCode::CorruptFile, "model file: " + why);
}

std::vector<double> read_reals(const ojson& arr, std::size_t expected, const std::string& what) {
  if (!arr.is_array()) corrupt(what + " is not an array");
  if (arr.size() != expected)
    corrupt(what + " has " + std::to_string(arr.size()) + " values, expected " +
            std::to_string(expected));
  std::vector<double> out;
  out.reserve(expected);
  for (const auto& v : arr) {
    if (!v.is_number()) corrupt(what + " contains a non-number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) corrupt(what + " contains a non-finite value");
    out.push_back(d);
  }
  return out;
}

}  // namespace

std::string save_net_string(const Network& net, const TrainConfig& cfg) {
  ojson doc;
  doc["format"] = kModelFormat;
  doc["version"] = kModelFormatVersion;
  doc["activation"] = "logistic";
  doc["topology"] = net.topology.layerSizes;
  doc["weights"] = net.weights;
  doc["biases"] = net.biases;
  doc["train_config"] = {{"learning_rate", cfg.learningRate}, {"momentum", cfg.momentum},
                         {"target_mse", cfg.targetMse},       {"max_epochs", cfg.maxEpochs},
                         {"seed", cfg.seed},                  {"init_range", cfg.initRange}};
  return doc.dump(2) + "\n";
}

Network load_net_string(const std::string& text, TrainConfig* cfg) {
  ojson doc;
  try {
    doc = ojson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    corrupt(std::string("not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) corrupt("top level is not an object");
  if (!doc.contains("format") || doc["format"] != kModelFormat) corrupt("unknown format tag");
  if (!doc.contains("version") || !doc["version"].is_number_integer())
    corrupt("missing version");
  if (doc["version"].get<int>() != kModelFormatVersion)
    throw Error(ErrorCode::VersionMismatch,
                "model version " + doc["version"].dump() + " is not supported (expected " +
                    std::to_string(kModelFormatVersion) + ")");

  Network net;
  try {
    net.topology.layerSizes = doc.at("topology").get<std::vector<std::size_t>>();
    net.topology.validate();
  } catch (const nlohmann::json::exception& e) {
    corrupt(std::string("bad topology: ") + e.what());
  } catch (const Error& e) {
    corrupt(std::string("bad topology: ") + e.what());
  }
  const auto& sizes = net.topology.layerSizes;
  const std::size_t pairs = sizes.size() - 1;
  if (!doc.contains("weights") || !doc["weights"].is_array() || doc["weights"].size() != pairs)
    corrupt("weights do not match topology");
  if (!doc.contains("biases") || !doc["biases"].is_array() || doc["biases"].size() != pairs)
    corrupt("biases do not match topology");
  for (std::size_t l = 0; l < pairs; ++l) {
    const std::string tag = "layer " + std::to_string(l);
    net.weights.push_back(read_reals(doc["weights"][l], sizes[l + 1] * sizes[l], tag + " weights"));
    net.biases.push_back(read_reals(doc["biases"][l], sizes[l + 1], tag + " biases"));
  }

  if (cfg != nullptr && doc.contains("train_config")) {
    try {
      const auto& tc = doc["train_config"];
      cfg->learningRate = tc.at("learning_rate").get<double>();
      cfg->momentum = tc.at("momentum").get<double>();
      cfg->targetMse = tc.at("target_mse").get<double>();
      cfg->maxEpochs = tc.at("max_epochs").get<std::uint64_t>();
      cfg->seed = tc.at("seed").get<std::uint64_t>();
      cfg->initRange = tc.at("init_range").get<double>();
    } catch (const nlohmann::json::exception& e) {
      corrupt(std::string("bad train_config: ") + e.what());
    }
  }
  return net;
}

void save_net(const Network& net, const std::filesystem::path& path, const TrainConfig& cfg) {
  write_text_file(path, save_net_string(net, cfg));
}

Network load_net(const std::filesystem::path& path, TrainConfig* cfg) {
  return load_net_string(read_text_file(path), cfg);
}

std::vector<LabeledExample> parse_examples(const std::string& jsonl, const ReferenceContext& ctx) {
  std::vector<LabeledExample> out;
  std::size_t lineNo = 0;
  std::size_t start = 0;
  while (start < jsonl.size()) {
    std::size_t end = jsonl.find('\n', start);
    if (end == std::string::npos) end = jsonl.size();
    const std::string line = jsonl.substr(start, end - start);
    start = end + 1;
    ++lineNo;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

    const std::string where = "line " + std::to_string(lineNo);
    ojson obj;
    try {
      obj = ojson::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::CorruptFile, where + ": " + e.what());
    }
    if (!obj.is_object()) throw Error(ErrorCode::CorruptFile, where + ": not a JSON object");

    LabeledExample ex;
    try {
      ex.id = obj.value("id", "example" + std::to_string(lineNo));
      ex.gene = obj.value("gene", "");
      if (obj.contains("label") && !obj["label"].is_null()) {
        const int label = obj["label"].get<int>();
        if (label != 0 && label != 1)
          throw Error(ErrorCode::InvalidArgument, where + ": label must be 0 or 1");
        ex.label = label;
      }
      if (obj.contains("features")) {
        const auto values = obj["features"].get<std::vector<double>>();
        if (values.size() != kFeatureCount)
          throw Error(ErrorCode::DimensionMismatch,
                      where + ": expected " + std::to_string(kFeatureCount) + " features, got " +
                          std::to_string(values.size()));
        for (std::size_t i = 0; i < kFeatureCount; ++i) {
          if (!(values[i] >= 0.0 && values[i] <= 1.0))
            throw Error(ErrorCode::InvalidArgument, where + ": feature outside [0,1]");
          ex.features.values[i] = values[i];
        }
      } else if (obj.contains("mutation")) {
        if (ctx.reference == nullptr)
          throw Error(ErrorCode::InvalidArgument,
                      where + ": mutation descriptor needs a reference sequence");
        const auto& md = obj["mutation"];
        Mutation mu;
        mu.position = md.at("position").get<std::size_t>();
        mu.kind = parse_mutation_kind(md.at("kind").get<std::string>());
        mu.refBases = md.value("ref", "");
        mu.altBases = md.value("alt", "");
        mu.effect = classify_effect(mu, *ctx.reference, ctx.cdsStart, ctx.cdsEnd);
        ex.features = encode(mu, *ctx.reference);
      } else {
        throw Error(ErrorCode::CorruptFile, where + ": needs 'features' or 'mutation'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::CorruptFile, where + ": " + e.what());
    }
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<LabeledExample> load_examples(const std::filesystem::path& path,
                                          const ReferenceContext& ctx) {
  return parse_examples(read_text_file(path), ctx);
}

std::string example_to_jsonl(const LabeledExample& ex, const Mutation* mutation) {
  ojson obj;
  obj["id"] = ex.id;
  obj["gene"] = ex.gene;
  obj["features"] = ex.features.values;
  if (mutation != nullptr) {
    obj["mutation"] = {{"position", mutation->position},
                       {"kind", to_string(mutation->kind)},
                       {"ref", mutation->refBases},
                       {"alt", mutation->altBases}};
  }
  if (ex.label) obj["label"] = *ex.label;
  return obj.dump() + "\n";
}

std::vector<Sample> to_samples(const std::vector<LabeledExample>& examples) {
  if (examples.empty()) throw Error(ErrorCode::EmptyDataset, "no training examples");
  std::vector<Sample> out;
  out.reserve(examples.size());
  for (const LabeledExample& ex : examples) {
    if (!ex.label)
      throw Error(ErrorCode::InvalidArgument, "training example '" + ex.id + "' has no label");
    out.push_back({std::vector<double>(ex.features.values.begin(), ex.features.values.end()),
                   static_cast<double>(*ex.label)});
  }
  return out;
}

}  // namespace mutascan
