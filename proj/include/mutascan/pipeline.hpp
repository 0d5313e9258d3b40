#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mutascan/align.hpp"
#include "mutascan/error.hpp"
#include "mutascan/homology.hpp"
#include "mutascan/neural.hpp"
#include "mutascan/seqio.hpp"
#include "mutascan/seqstats.hpp"

namespace mutascan {

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr std::string_view kAtRiskDisplay = "highly risk of breast cancer";
inline constexpr std::string_view kNormalDisplay = "Normal";

std::string_view display_text(Label label) noexcept;

// ---- manifest ----------------------------------------------------------

struct CdsRange {
  std::size_t start = 0;  // 1-based, inclusive
  std::size_t end = 0;

  bool operator==(const CdsRange&) const = default;
};

struct DatabaseEntry {
  std::string name;
  std::filesystem::path fastaPath;
  // Per-record CDS; a record without an entry is coding end to end.
  std::map<std::string, CdsRange> cds;
};

/// Priority-ordered reference databases plus classifier inputs. Relative
/// paths in the manifest file resolve against the manifest's directory.
struct DatabaseManifest {
  std::vector<DatabaseEntry> databases;
  std::optional<std::filesystem::path> trainingDataPath;
  std::optional<std::filesystem::path> modelPath;

  CdsRange cds_for(std::size_t database, const DnaSequence& record) const;
};

DatabaseManifest parse_manifest(const std::string& json, const std::filesystem::path& baseDir);
DatabaseManifest load_manifest(const std::filesystem::path& path);
std::string manifest_to_json(const DatabaseManifest& manifest,
                             const std::filesystem::path& relativeTo);

// ---- reference adoption ------------------------------------------------

struct AdoptedReference {
  std::string databaseName;
  std::string subjectId;
  GateVerdict verdict;
  HomologyHit topHit;
  CdsRange cds;

  bool operator==(const AdoptedReference&) const = default;
};

struct RejectedReference {
  std::string databaseName;
  std::string subjectId;               // empty when the database had no hit
  std::optional<GateVerdict> verdict;  // unset when the database had no hit
  std::string reason;                  // "gc-gate" or "no-hits"

  bool operator==(const RejectedReference&) const = default;
};

struct Adoption {
  DnaSequence reference;
  AdoptedReference adopted;
  std::vector<RejectedReference> rejected;
  std::vector<std::string> consulted;  // database names in the order searched
};

class NoDatabaseAcceptedError : public Error {
 public:
  explicit NoDatabaseAcceptedError(std::vector<RejectedReference> rejected);
  const std::vector<RejectedReference>& rejected() const noexcept { return rejected_; }

 private:
  std::vector<RejectedReference> rejected_;
};

/// Walks the databases in manifest order: search with the patient as
/// query, take the rank-1 subject, gate its GC%, adopt the first subject
/// that passes. Throws NoDatabaseAcceptedError when every database fails.
Adoption adopt_reference(const DnaSequence& patient, const DatabaseManifest& manifest,
                         const SearchParams& params = {}, const GateParams& gate = {});

// ---- diagnosis ---------------------------------------------------------

struct DiagnosisConfig {
  GateParams gate;
  SearchParams search;
  Scoring alignScoring;
  std::size_t cellCap = kDefaultCellCap;
  double threshold = 0.5;
  TrainConfig train;
  std::optional<std::filesystem::path> modelOverride;
  std::filesystem::path workDir = "mutascan-work";
};

struct AlignmentSummary {
  long score = 0;
  double identityPercent = 0.0;
  std::size_t length = 0;

  bool operator==(const AlignmentSummary&) const = default;
};

struct CandidateResult {
  std::size_t mutationIndex = 0;  // into DiagnosisReport::mutations
  FeatureVector features;
  Classification classification;

  bool operator==(const CandidateResult&) const = default;
};

struct ConfigEcho {
  double gcTarget = 38.0;
  double gcTolerance = 2.0;
  std::size_t k = kDefaultK;
  double threshold = 0.5;
  std::string modelSource;

  bool operator==(const ConfigEcho&) const = default;
};

struct DiagnosisReport {
  std::string patientId;
  std::size_t patientLength = 0;
  AdoptedReference adoptedReference;
  std::vector<RejectedReference> rejectedReferences;
  AlignmentSummary alignment;
  std::vector<Mutation> mutations;
  std::vector<Mutation> malignantCandidates;
  std::vector<CandidateResult> classifications;
  Label overallLabel = Label::Normal;
  std::string displayText;
  std::map<std::string, std::string> toolVersions;
  ConfigEcho config;
  std::vector<std::string> notes;

  bool operator==(const DiagnosisReport&) const = default;
};

/// Runs the whole pipeline for a single-record patient FASTA: adopt a
/// reference, write the combined FASTA, align, call and classify
/// mutations, score malignant candidates. Writes combined.fasta,
/// model.json, report.json and report.txt into `config.workDir`.
DiagnosisReport run_diagnosis(const std::filesystem::path& patientFasta,
                              const DatabaseManifest& manifest, const DiagnosisConfig& config = {});

// In-memory core of run_diagnosis; no files are written.
DiagnosisReport diagnose(const DnaSequence& patient, const DatabaseManifest& manifest,
                         const Network& model, const std::string& modelSource,
                         const DiagnosisConfig& config = {});

// Loads the model named by the config or manifest, or trains one from the
// manifest's training data. `source` describes where it came from.
Network obtain_model(const DatabaseManifest& manifest, const DiagnosisConfig& config,
                     std::string& source);

std::string render_report_text(const DiagnosisReport& report);
std::string render_report_json(const DiagnosisReport& report);
DiagnosisReport parse_report_json(const std::string& json);

// JSON text for one hit, single line.
std::string hit_to_json_line(const HomologyHit& hit);
std::string mutation_to_json_line(const Mutation& mutation);

// ---- synthetic corpus --------------------------------------------------

struct CorpusPaths {
  std::filesystem::path manifest;
  std::filesystem::path fallbackManifest;
  std::filesystem::path trainingData;
  std::filesystem::path cleanPatient;
  std::filesystem::path mutatedPatient;
  std::filesystem::path silentPatient;
};

inline constexpr std::size_t kMalignantBrca1 = 5;
inline constexpr std::size_t kMalignantBrca2 = 4;
inline constexpr std::size_t kBenignExemplars = 9;

/// Writes a deterministic desk-scale corpus into `outDir`: three reference
/// databases (ncbi ~38% GC, ebi ~50% GC, ensembl ~37% GC), two manifests
/// (default order and one that leads with ebi), an 18-line training file
/// and three patient FASTAs.
CorpusPaths make_synthetic_corpus(std::uint64_t seed, const std::filesystem::path& outDir);

}  // namespace mutascan
