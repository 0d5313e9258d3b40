#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "mutascan/align.hpp"
#include "mutascan/error.hpp"
#include "mutascan/homology.hpp"
#include "mutascan/neural.hpp"
#include "mutascan/pipeline.hpp"
#include "mutascan/seqio.hpp"
#include "mutascan/seqstats.hpp"

namespace ms = mutascan;
namespace fs = std::filesystem;

namespace {

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

fs::path work_dir() {
  const char* env = std::getenv("MUTASCAN_WORKDIR");
  return env != nullptr && *env != '\0' ? fs::path(env) : fs::path("mutascan-work");
}

const ms::DnaSequence& single_record(const ms::FastaFile& f, const std::string& what) {
  if (f.records.size() != 1)
    throw ms::Error(ms::ErrorCode::InvalidArgument,
                    what + " must hold exactly one record, found " + std::to_string(f.records.size()));
  return f.records.front();
}

int cmd_stats(const std::string& path) {
  const ms::FastaFile file = ms::read_fasta(path);
  for (const ms::DnaSequence& seq : file.records) {
    const ms::CompositionStats st = ms::composition(seq);
    const ms::GateVerdict v = ms::gc_gate(st);
    std::cout << seq.id() << "\tlength=" << st.length << "\tA=" << st.counts.a
              << "\tC=" << st.counts.c << "\tG=" << st.counts.g << "\tT=" << st.counts.t
              << "\tN=" << st.counts.n << "\tGC%=" << fixed(st.gcPercent, 2)
              << "\tAT%=" << fixed(st.atPercent, 2)
              << "\tgate=" << (v.accepted ? "accepted" : "rejected")
              << (v.geneBandFlag ? "\tgene-band" : "") << "\n";
  }
  return 0;
}

int cmd_search(const std::string& dbPath, const std::string& queryPath, std::size_t k, bool json) {
  ms::SearchParams params;
  params.k = k;
  params.validate();
  const ms::KmerIndex index = ms::build_index(ms::read_fasta(dbPath), k);
  const ms::FastaFile queries = ms::read_fasta(queryPath);
  for (const ms::DnaSequence& q : queries.records) {
    const auto hits = ms::search(q, index, params);
    if (json) {
      for (const auto& h : hits) std::cout << ms::hit_to_json_line(h) << "\n";
      continue;
    }
    if (queries.records.size() > 1) std::cout << "query: " << q.id() << "\n";
    std::cout << ms::format_hit_table(hits);
  }
  return 0;
}

void print_alignment(const ms::AlignmentResult& aln, std::size_t width = 60) {
  std::string mid(aln.length(), ' ');
  for (std::size_t i = 0; i < aln.length(); ++i) {
    const char a = aln.alignedA[i], b = aln.alignedB[i];
    if (a == '-' || b == '-') continue;
    mid[i] = a == b ? '|' : '.';
  }
  std::size_t posA = 0, posB = 0;
  for (std::size_t off = 0; off < aln.length(); off += width) {
    const std::size_t n = std::min(width, aln.length() - off);
    const auto advance = [&](const std::string& row, std::size_t& pos) {
      for (std::size_t i = off; i < off + n; ++i) pos += row[i] != '-';
    };
    const std::size_t startA = posA + 1, startB = posB + 1;
    advance(aln.alignedA, posA);
    advance(aln.alignedB, posB);
    std::printf("ref %8zu %s %zu\n", startA, aln.alignedA.substr(off, n).c_str(), posA);
    std::printf("             %s\n", mid.substr(off, n).c_str());
    std::printf("alt %8zu %s %zu\n\n", startB, aln.alignedB.substr(off, n).c_str(), posB);
  }
}

int cmd_align(const std::string& refPath, const std::string& altPath, bool json) {
  const ms::FastaFile refFile = ms::read_fasta(refPath);
  const ms::FastaFile altFile = ms::read_fasta(altPath);
  const ms::DnaSequence& ref = single_record(refFile, "--ref");
  const ms::DnaSequence& alt = single_record(altFile, "--alt");
  const ms::AlignmentResult aln = ms::global_align(ref, alt);
  const auto muts = ms::call_mutations(aln);
  if (json) {
    for (const auto& m : muts) std::cout << ms::mutation_to_json_line(m) << "\n";
    return 0;
  }
  std::cout << "score " << aln.score << "  identity " << fixed(aln.identityPercent, 2)
            << "%  length " << aln.length() << "\n\n";
  print_alignment(aln);
  std::cout << "mutations: " << muts.size() << "\n";
  for (const auto& m : muts) {
    std::cout << "  " << m.position << "\t" << ms::to_string(m.kind) << "\t"
              << (m.refBases.empty() ? "-" : m.refBases) << ">"
              << (m.altBases.empty() ? "-" : m.altBases) << "\n";
  }
  return 0;
}

int cmd_train(const std::string& data, const std::string& out, const ms::TrainConfig& cfg) {
  cfg.validate();
  const auto samples = ms::to_samples(ms::load_examples(data));
  const ms::TrainResult r = ms::train(ms::NetworkTopology{}, samples, cfg);
  ms::save_net(r.network, out, cfg);
  std::cout << "epochs " << r.report.epochsRun << "  final MSE " << r.report.finalMse
            << (r.report.converged ? "  (target reached)" : "  (epoch cap reached)") << "\n";
  return 0;
}

int cmd_predict(const std::string& modelPath, const std::string& featuresPath) {
  const ms::Network net = ms::load_net(modelPath);
  for (const auto& ex : ms::load_examples(featuresPath)) {
    const ms::Classification c = ms::classify(net, ex.features);
    std::cout << ex.id << "\t" << fixed(c.score, 6) << "\t" << ms::to_string(c.label) << "\n";
  }
  return 0;
}

int cmd_diagnose(const std::string& patient, const std::string& manifestPath,
                 const std::string& model, bool json) {
  ms::DiagnosisConfig cfg;
  cfg.workDir = work_dir();
  if (!model.empty()) cfg.modelOverride = fs::path(model);
  const ms::DiagnosisReport report = ms::run_diagnosis(patient, ms::load_manifest(manifestPath), cfg);
  std::cout << (json ? ms::render_report_json(report) : ms::render_report_text(report));
  return 0;
}

int cmd_gen_corpus(std::uint64_t seed, const std::string& out) {
  const ms::CorpusPaths p = ms::make_synthetic_corpus(seed, out);
  std::cout << "manifest           " << p.manifest.generic_string() << "\n"
            << "fallback manifest  " << p.fallbackManifest.generic_string() << "\n"
            << "training data      " << p.trainingData.generic_string() << "\n"
            << "clean patient      " << p.cleanPatient.generic_string() << "\n"
            << "mutated patient    " << p.mutatedPatient.generic_string() << "\n"
            << "silent patient     " << p.silentPatient.generic_string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mutascan: reference-guided mutation screening for BRCA-like genes"};
  app.require_subcommand(1);

  std::string statsPath;
  auto* stats = app.add_subcommand("stats", "Base counts, GC%/AT% and gate verdict per record");
  stats->add_option("fasta", statsPath, "FASTA file")->required();

  std::string dbPath, queryPath;
  std::size_t k = ms::kDefaultK;
  bool searchJson = false;
  auto* search = app.add_subcommand("search", "Seed-and-extend homology search");
  search->add_option("--db", dbPath, "Database FASTA")->required();
  search->add_option("--query", queryPath, "Query FASTA")->required();
  search->add_option("--k", k, "Seed length")->capture_default_str();
  search->add_flag("--json", searchJson, "One JSON object per hit");

  std::string refPath, altPath;
  bool alignJson = false;
  auto* align = app.add_subcommand("align", "Global alignment and mutation calling");
  align->add_option("--ref", refPath, "Reference FASTA (one record)")->required();
  align->add_option("--alt", altPath, "Alternate FASTA (one record)")->required();
  align->add_flag("--json", alignJson, "One JSON object per mutation");

  std::string dataPath, outPath;
  ms::TrainConfig cfg;
  auto* train = app.add_subcommand("train", "Train the 10-4-1 classifier");
  train->add_option("--data", dataPath, "Training JSONL")->required();
  train->add_option("--out", outPath, "Model output path")->required();
  train->add_option("--lr", cfg.learningRate)->capture_default_str();
  train->add_option("--momentum", cfg.momentum)->capture_default_str();
  train->add_option("--target-mse", cfg.targetMse)->capture_default_str();
  train->add_option("--max-epochs", cfg.maxEpochs)->capture_default_str();
  train->add_option("--seed", cfg.seed)->capture_default_str();

  std::string modelPath, featuresPath;
  auto* predict = app.add_subcommand("predict", "Score feature vectors with a trained model");
  predict->add_option("--model", modelPath, "Model JSON")->required();
  predict->add_option("--features", featuresPath, "Feature JSONL")->required();

  std::string patientPath, manifestPath, diagModel;
  bool diagJson = false;
  auto* diagnose = app.add_subcommand("diagnose", "Full pipeline for one patient sequence");
  diagnose->add_option("--patient", patientPath, "Patient FASTA (one record)")->required();
  diagnose->add_option("--manifest", manifestPath, "Database manifest JSON")->required();
  diagnose->add_option("--model", diagModel, "Trained model (overrides the manifest)");
  diagnose->add_flag("--json", diagJson, "Print the JSON report");

  std::uint64_t seed = 42;
  std::string corpusOut;
  auto* gen = app.add_subcommand("gen-corpus", "Write the synthetic demonstration corpus");
  gen->add_option("--seed", seed)->capture_default_str();
  gen->add_option("--out", corpusOut, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*stats) return cmd_stats(statsPath);
    if (*search) return cmd_search(dbPath, queryPath, k, searchJson);
    if (*align) return cmd_align(refPath, altPath, alignJson);
    if (*train) return cmd_train(dataPath, outPath, cfg);
    if (*predict) return cmd_predict(modelPath, featuresPath);
    if (*diagnose) return cmd_diagnose(patientPath, manifestPath, diagModel, diagJson);
    if (*gen) return cmd_gen_corpus(seed, corpusOut);
  } catch (const ms::Error& e) {
    std::cerr << "error: " << ms::to_string(e.code()) << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
