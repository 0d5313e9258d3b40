#include "mutascan/pipeline.hpp"

#include <algorithm>
#include <cstdio>

#include "json.hpp"
#include "mutascan/protein.hpp"

namespace mutascan {

using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string_view display_text(Label label) noexcept {
  return label == Label::AtRisk ? kAtRiskDisplay : kNormalDisplay;
}

CdsRange DatabaseManifest::cds_for(std::size_t database, const DnaSequence& record) const {
  const auto& cds = databases.at(database).cds;
  const auto it = cds.find(record.id());
  if (it == cds.end()) return {1, record.size()};
  return it->second;
}

DatabaseManifest parse_manifest(const std::string& json, const fs::path& baseDir) {
  const auto resolve = [&](const std::string& p) -> fs::path {
    const fs::path path(p);
    return path.is_absolute() ? path : baseDir / path;
  };
  DatabaseManifest m;
  try {
    const ojson doc = ojson::parse(json);
    for (const auto& db : doc.at("databases")) {
      DatabaseEntry e;
      e.name = db.at("name").get<std::string>();
      e.fastaPath = resolve(db.at("fasta").get<std::string>());
      if (db.contains("cds")) {
        for (const auto& [id, range] : db["cds"].items())
          e.cds[id] = {range.at("start").get<std::size_t>(), range.at("end").get<std::size_t>()};
      }
      m.databases.push_back(std::move(e));
    }
    if (doc.contains("training_data") && !doc["training_data"].is_null())
      m.trainingDataPath = resolve(doc["training_data"].get<std::string>());
    if (doc.contains("model") && !doc["model"].is_null())
      m.modelPath = resolve(doc["model"].get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::CorruptFile, std::string("manifest: ") + e.what());
  }
  if (m.databases.empty())
    throw Error(ErrorCode::InvalidArgument, "manifest lists no databases");
  return m;
}

DatabaseManifest load_manifest(const fs::path& path) {
  DatabaseManifest m = parse_manifest(read_text_file(path), path.parent_path());
  for (const DatabaseEntry& db : m.databases) {
    if (!fs::is_regular_file(db.fastaPath))
      throw Error(ErrorCode::IoFailure,
                  "database '" + db.name + "' FASTA not readable: " + db.fastaPath.string());
  }
  return m;
}

std::string manifest_to_json(const DatabaseManifest& manifest, const fs::path& relativeTo) {
  const auto rel = [&](const fs::path& p) { return p.lexically_relative(relativeTo).generic_string(); };
  ojson doc;
  doc["databases"] = ojson::array();
  for (const DatabaseEntry& db : manifest.databases) {
    ojson e;
    e["name"] = db.name;
    e["fasta"] = rel(db.fastaPath);
    e["cds"] = ojson::object();
    for (const auto& [id, r] : db.cds) e["cds"][id] = {{"start", r.start}, {"end", r.end}};
    doc["databases"].push_back(std::move(e));
  }
  doc["training_data"] = manifest.trainingDataPath ? ojson(rel(*manifest.trainingDataPath)) : ojson();
  doc["model"] = manifest.modelPath ? ojson(rel(*manifest.modelPath)) : ojson();
  return doc.dump(2) + "\n";
}

namespace {

std::string percent1(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

std::string describe_rejections(const std::vector<RejectedReference>& rejected) {
  std::string msg = "no database supplied an acceptable reference:";
  for (const RejectedReference& r : rejected) {
    msg += " [" + r.databaseName + ": ";
    if (r.verdict)
      msg += r.subjectId + " GC " + percent1(r.verdict->measuredGc) + "%]";
    else
      msg += "no hits]";
  }
  return msg;
}

}  // namespace

NoDatabaseAcceptedError::NoDatabaseAcceptedError(std::vector<RejectedReference> rejected)
    : Error(ErrorCode::NoDatabaseAccepted, describe_rejections(rejected)),
      rejected_(std::move(rejected)) {}

Adoption adopt_reference(const DnaSequence& patient, const DatabaseManifest& manifest,
                         const SearchParams& params, const GateParams& gate) {
  if (manifest.databases.empty())
    throw Error(ErrorCode::InvalidArgument, "manifest lists no databases");
  std::vector<RejectedReference> rejected;
  std::vector<std::string> consulted;
  for (std::size_t di = 0; di < manifest.databases.size(); ++di) {
    const DatabaseEntry& db = manifest.databases[di];
    consulted.push_back(db.name);
    const FastaFile records = read_fasta(db.fastaPath);
    const KmerIndex index = build_index(records, params.k);
    const std::vector<HomologyHit> hits = search(patient, index, params);
    if (hits.empty()) {
      rejected.push_back({db.name, {}, std::nullopt, "no-hits"});
      continue;
    }
    const HomologyHit& top = hits.front();
    const auto subject = std::find_if(records.records.begin(), records.records.end(),
                                      [&](const DnaSequence& r) { return r.id() == top.subjectId; });
    const GateVerdict verdict = gc_gate(composition(*subject), gate);
    if (!verdict.accepted) {
      rejected.push_back({db.name, top.subjectId, verdict, "gc-gate"});
      continue;
    }
    AdoptedReference adopted{db.name, top.subjectId, verdict, top, manifest.cds_for(di, *subject)};
    return {*subject, std::move(adopted), std::move(rejected), std::move(consulted)};
  }
  throw NoDatabaseAcceptedError(std::move(rejected));
}

namespace {

DiagnosisReport diagnose_adopted(const DnaSequence& patient, Adoption adoption,
                                 const Network& model, const std::string& modelSource,
                                 const DiagnosisConfig& config) {
  DiagnosisReport report;
  report.patientId = patient.id();
  report.patientLength = patient.size();

  const DnaSequence& ref = adoption.reference;
  const CdsRange cds = adoption.adopted.cds;
  const AlignmentResult aln = global_align(ref, patient, config.alignScoring, config.cellCap);
  report.alignment = {aln.score, aln.identityPercent, aln.length()};

  report.mutations = call_mutations(aln);
  for (Mutation& mu : report.mutations) mu.effect = classify_effect(mu, ref, cds.start, cds.end);

  report.overallLabel = Label::Normal;
  for (std::size_t i = 0; i < report.mutations.size(); ++i) {
    const Mutation& mu = report.mutations[i];
    if (!is_malignant_candidate(mu)) continue;
    report.malignantCandidates.push_back(mu);
    CandidateResult c;
    c.mutationIndex = i;
    c.features = encode(mu, ref);
    c.classification = classify(model, c.features, config.threshold);
    if (c.classification.label == Label::AtRisk) report.overallLabel = Label::AtRisk;
    report.classifications.push_back(c);
  }
  report.displayText = std::string(display_text(report.overallLabel));

  report.adoptedReference = std::move(adoption.adopted);
  report.rejectedReferences = std::move(adoption.rejected);
  report.toolVersions = {{"mutascan", std::string(kToolVersion)}};
  report.config = {config.gate.target, config.gate.tolerance, config.search.k, config.threshold,
                   modelSource};
  report.notes = {
      "malignant candidate = mutation whose protein effect is neither Silent nor NonCoding",
      "reference adopted from the rank-1 homology hit of the first database passing the GC gate"};
  return report;
}

}  // namespace

DiagnosisReport diagnose(const DnaSequence& patient, const DatabaseManifest& manifest,
                         const Network& model, const std::string& modelSource,
                         const DiagnosisConfig& config) {
  Adoption adoption = adopt_reference(patient, manifest, config.search, config.gate);
  return diagnose_adopted(patient, std::move(adoption), model, modelSource, config);
}

Network obtain_model(const DatabaseManifest& manifest, const DiagnosisConfig& config,
                     std::string& source) {
  if (config.modelOverride) {
    source = "file:" + config.modelOverride->generic_string();
    return load_net(*config.modelOverride);
  }
  if (manifest.modelPath) {
    source = "file:" + manifest.modelPath->generic_string();
    return load_net(*manifest.modelPath);
  }
  if (manifest.trainingDataPath) {
    const auto samples = to_samples(load_examples(*manifest.trainingDataPath));
    const TrainResult trained = train(NetworkTopology{}, samples, config.train);
    source = "trained:" + manifest.trainingDataPath->generic_string();
    return trained.network;
  }
  throw Error(ErrorCode::MissingModelAndTrainingData,
              "no model given and the manifest names no training data");
}

DiagnosisReport run_diagnosis(const fs::path& patientFasta, const DatabaseManifest& manifest,
                              const DiagnosisConfig& config) {
  const FastaFile input = read_fasta(patientFasta);
  if (input.records.size() != 1)
    throw Error(ErrorCode::MultiRecordPatientFile,
                "patient file must hold exactly one record, found " +
                    std::to_string(input.records.size()));
  const DnaSequence& patient = input.records.front();

  std::string modelSource;
  const Network model = obtain_model(manifest, config, modelSource);

  Adoption adoption = adopt_reference(patient, manifest, config.search, config.gate);

  std::error_code ec;
  fs::create_directories(config.workDir, ec);
  if (ec)
    throw Error(ErrorCode::IoFailure,
                "cannot create work directory '" + config.workDir.string() + "': " + ec.message());

  // Normal and patient records side by side; the patient id is suffixed if
  // it collides with the reference id.
  FastaFile combined;
  combined.records.push_back(adoption.reference);
  std::string patientId = patient.id();
  if (patientId == adoption.reference.id()) patientId += "_patient";
  combined.records.emplace_back(patientId, patient.description(), patient.bases());
  write_fasta(combined, config.workDir / "combined.fasta");
  save_net(model, config.workDir / "model.json", config.train);

  DiagnosisReport report = diagnose_adopted(patient, std::move(adoption), model, modelSource, config);
  write_text_file(config.workDir / "report.json", render_report_json(report));
  write_text_file(config.workDir / "report.txt", render_report_text(report));
  return report;
}

}  // namespace mutascan
