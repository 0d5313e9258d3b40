#include <algorithm>
#include <functional>
#include <stdexcept>

#include "json.hpp"
#include "mutascan/pipeline.hpp"
#include "mutascan/protein.hpp"
#include "mutascan/rng.hpp"

namespace mutascan {

namespace fs = std::filesystem;

namespace {

struct Gene {
  DnaSequence seq;
  CdsRange cds;
};

char random_base(Rng& rng, double gcProbability) {
  if (rng.chance(gcProbability)) return rng.chance(0.5) ? 'G' : 'C';
  return rng.chance(0.5) ? 'A' : 'T';
}

// Exactly `gcCount` G/C bases in random order.
std::string bases_with_gc(Rng& rng, std::size_t length, std::size_t gcCount) {
  std::string s;
  s.reserve(length);
  for (std::size_t i = 0; i < length; ++i) {
    if (i < gcCount)
      s.push_back(rng.chance(0.5) ? 'G' : 'C');
    else
      s.push_back(rng.chance(0.5) ? 'A' : 'T');
  }
  for (std::size_t i = length; i > 1; --i) std::swap(s[i - 1], s[rng.below(i)]);
  return s;
}

std::size_t gc_count(const std::string& s) {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) { return c == 'G' || c == 'C'; }));
}

// utr5 + ATG + sense codons + TAA + utr3, with exactly `totalGc` G/C bases.
Gene make_gene(Rng& rng, const std::string& id, const std::string& description, std::size_t utr5,
               std::size_t codons, std::size_t utr3, std::size_t totalGc) {
  const CodonTable& code = CodonTable::standard();
  std::string cds = "ATG";
  for (std::size_t i = 2; i < codons; ++i) {
    std::string codon(3, 'A');
    do {
      for (char& c : codon) c = random_base(rng, 0.38);
    } while (code.is_stop(codon));
    cds += codon;
  }
  cds += "TAA";
  const std::size_t cdsGc = gc_count(cds);
  const std::size_t utrLen = utr5 + utr3;
  if (totalGc < cdsGc || totalGc - cdsGc > utrLen)
    throw std::logic_error("corpus: GC target unreachable for " + id);
  const std::string utr = bases_with_gc(rng, utrLen, totalGc - cdsGc);
  std::string bases = utr.substr(0, utr5) + cds + utr.substr(utr5);
  return {DnaSequence(id, description, std::move(bases)), {utr5 + 1, utr5 + 3 * codons}};
}

DnaSequence random_record(Rng& rng, const std::string& id, std::size_t length, std::size_t gc) {
  return DnaSequence(id, "unrelated synthetic contig", bases_with_gc(rng, length, gc));
}

// Single-base substitution inside the CDS (codons 2..n-1) whose effect
// satisfies `want`, excluding positions in `used`.
Mutation pick_substitution(Rng& rng, const Gene& g, EffectKind want,
                           const std::vector<std::size_t>& used) {
  static constexpr char kBases[] = {'A', 'C', 'G', 'T'};
  const std::size_t codons = (g.cds.end - g.cds.start + 1) / 3;
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const std::size_t codon = 1 + rng.below(codons - 2);
    const std::size_t pos = g.cds.start + 3 * codon + rng.below(3);
    if (std::find(used.begin(), used.end(), pos) != used.end()) continue;
    const char refBase = g.seq.at(pos);
    const char alt = kBases[rng.below(4)];
    if (alt == refBase) continue;
    Mutation m{pos, MutationKind::Substitution, std::string(1, refBase), std::string(1, alt), {}};
    m.effect = classify_effect(m, g.seq, g.cds.start, g.cds.end);
    if (m.effect->kind == want) return m;
  }
  throw std::logic_error("corpus: no substitution with requested effect");
}

Mutation pick_utr_substitution(Rng& rng, const Gene& g) {
  const std::size_t pos = 1 + rng.below(g.cds.start - 1);
  const char refBase = g.seq.at(pos);
  const char alt = refBase == 'A' ? 'G' : refBase == 'G' ? 'A' : refBase == 'C' ? 'T' : 'C';
  Mutation m{pos, MutationKind::Substitution, std::string(1, refBase), std::string(1, alt), {}};
  m.effect = classify_effect(m, g.seq, g.cds.start, g.cds.end);
  return m;
}

Mutation pick_frameshift(Rng& rng, const Gene& g, MutationKind kind) {
  const std::size_t pos = g.cds.start + 3 + rng.below(g.cds.end - g.cds.start - 6);
  Mutation m;
  m.kind = kind;
  m.position = pos;
  if (kind == MutationKind::Insertion) {
    m.altBases = std::string(1, random_base(rng, 0.5));
  } else {
    m.refBases = g.seq.bases().substr(pos - 1, 1 + rng.below(2));
  }
  m.effect = classify_effect(m, g.seq, g.cds.start, g.cds.end);
  if (m.effect->kind != EffectKind::Frameshift) throw std::logic_error("corpus: expected frameshift");
  return m;
}

struct Exemplar {
  std::string id;
  std::string gene;
  int label;
  Mutation mutation;
  const Gene* source;
};

std::string db_manifest_entry_json(const std::string& name, const std::string& file,
                                   const std::vector<const Gene*>& genes) {
  nlohmann::ordered_json e;
  e["name"] = name;
  e["fasta"] = file;
  e["cds"] = nlohmann::ordered_json::object();
  for (const Gene* g : genes) e["cds"][g->seq.id()] = {{"start", g->cds.start}, {"end", g->cds.end}};
  return e.dump();
}

}  // namespace

CorpusPaths make_synthetic_corpus(std::uint64_t seed, const fs::path& outDir) {
  std::error_code ec;
  fs::create_directories(outDir, ec);
  if (ec) throw Error(ErrorCode::IoFailure, "cannot create '" + outDir.string() + "': " + ec.message());

  Rng rng(seed);

  // 1500 bp, 570 G/C = 38.0%.
  const Gene brca1 = make_gene(rng, "SYN_BRCA1", "synthetic BRCA1-like reference gene", 120, 400,
                               180, 570);
  // 1200 bp, 480 G/C = 40.0%.
  const Gene brca2 = make_gene(rng, "SYN_BRCA2", "synthetic BRCA2-like reference gene", 90, 330,
                               120, 480);

  // ebi: GC-rich 5' flank, 1500 + 1500 bp with 1503 G/C = 50.1%.
  const std::string ebiFlank = bases_with_gc(rng, 1500, 1503 - 570);
  const Gene brca1Ebi{DnaSequence("SYN_BRCA1_EBI", "BRCA1-like reference, GC-rich assembly",
                                  ebiFlank + brca1.seq.bases()),
                      {brca1.cds.start + 1500, brca1.cds.end + 1500}};
  // ensembl: AT-rich 3' flank, 1500 + 500 bp with 744 G/C = 37.2%.
  const std::string ensFlank = bases_with_gc(rng, 500, 744 - 570);
  const Gene brca1Ens{DnaSequence("SYN_BRCA1_ENS", "BRCA1-like reference, extended 3' region",
                                  brca1.seq.bases() + ensFlank),
                      brca1.cds};

  FastaFile ncbi{{brca1.seq, brca2.seq, random_record(rng, "NCBI_CONTIG_1", 800, 360)}};
  FastaFile ebi{{brca1Ebi.seq, random_record(rng, "EBI_CONTIG_1", 800, 400)}};
  FastaFile ensembl{{brca1Ens.seq, random_record(rng, "ENS_CONTIG_1", 800, 300)}};
  write_fasta(ncbi, outDir / "ncbi.fasta");
  write_fasta(ebi, outDir / "ebi.fasta");
  write_fasta(ensembl, outDir / "ensembl.fasta");

  const std::string ncbiEntry = db_manifest_entry_json("ncbi", "ncbi.fasta", {&brca1, &brca2});
  const std::string ebiEntry = db_manifest_entry_json("ebi", "ebi.fasta", {&brca1Ebi});
  const std::string ensEntry = db_manifest_entry_json("ensembl", "ensembl.fasta", {&brca1Ens});
  const auto manifest_text = [](const std::vector<std::string>& entries) {
    nlohmann::ordered_json doc;
    doc["databases"] = nlohmann::ordered_json::array();
    for (const std::string& e : entries) doc["databases"].push_back(nlohmann::ordered_json::parse(e));
    doc["training_data"] = "training.jsonl";
    doc["model"] = nullptr;
    return doc.dump(2) + "\n";
  };
  write_text_file(outDir / "manifest.json", manifest_text({ncbiEntry, ebiEntry, ensEntry}));
  write_text_file(outDir / "manifest_fallback.json", manifest_text({ebiEntry, ensEntry, ncbiEntry}));

  // Training exemplars: 5 + 4 malignant, 9 benign.
  std::vector<std::size_t> used1, used2;
  std::vector<Exemplar> exemplars;
  const auto add = [&](const Gene& g, const std::string& gene, int label, Mutation m) {
    (gene == "BRCA1" ? used1 : used2).push_back(m.position);
    const std::size_t n = static_cast<std::size_t>(std::count_if(
        exemplars.begin(), exemplars.end(),
        [&](const Exemplar& e) { return e.gene == gene && e.label == label; }));
    const std::string id = gene + (label == 1 ? "_MAL_" : "_BEN_") + std::to_string(n + 1);
    exemplars.push_back({id, gene, label, std::move(m), &g});
  };

  add(brca1, "BRCA1", 1, pick_substitution(rng, brca1, EffectKind::Nonsense, used1));
  add(brca1, "BRCA1", 1, pick_frameshift(rng, brca1, MutationKind::Insertion));
  add(brca1, "BRCA1", 1, pick_substitution(rng, brca1, EffectKind::Nonsense, used1));
  add(brca1, "BRCA1", 1, pick_frameshift(rng, brca1, MutationKind::Deletion));
  add(brca1, "BRCA1", 1, pick_substitution(rng, brca1, EffectKind::Nonsense, used1));
  add(brca2, "BRCA2", 1, pick_substitution(rng, brca2, EffectKind::Nonsense, used2));
  add(brca2, "BRCA2", 1, pick_frameshift(rng, brca2, MutationKind::Deletion));
  add(brca2, "BRCA2", 1, pick_substitution(rng, brca2, EffectKind::Nonsense, used2));
  add(brca2, "BRCA2", 1, pick_frameshift(rng, brca2, MutationKind::Insertion));

  add(brca1, "BRCA1", 0, pick_substitution(rng, brca1, EffectKind::Silent, used1));
  add(brca1, "BRCA1", 0, pick_substitution(rng, brca1, EffectKind::Missense, used1));
  add(brca1, "BRCA1", 0, pick_utr_substitution(rng, brca1));
  add(brca1, "BRCA1", 0, pick_substitution(rng, brca1, EffectKind::Silent, used1));
  add(brca1, "BRCA1", 0, pick_substitution(rng, brca1, EffectKind::Missense, used1));
  add(brca2, "BRCA2", 0, pick_substitution(rng, brca2, EffectKind::Silent, used2));
  add(brca2, "BRCA2", 0, pick_substitution(rng, brca2, EffectKind::Missense, used2));
  add(brca2, "BRCA2", 0, pick_utr_substitution(rng, brca2));
  add(brca2, "BRCA2", 0, pick_substitution(rng, brca2, EffectKind::Missense, used2));

  std::string training;
  for (const Exemplar& e : exemplars) {
    LabeledExample ex{e.id, e.gene, encode(e.mutation, e.source->seq), e.label};
    training += example_to_jsonl(ex, &e.mutation);
  }
  write_text_file(outDir / "training.jsonl", training);

  // Patients derive from the ncbi reference gene.
  const Mutation nonsense = pick_substitution(rng, brca1, EffectKind::Nonsense, used1);
  used1.push_back(nonsense.position);
  const Mutation silent = pick_substitution(rng, brca1, EffectKind::Silent, used1);

  const auto write_patient = [&](const std::string& file, const std::string& id,
                                 const std::string& description, const std::vector<Mutation>& muts) {
    DnaSequence p(id, description, apply_mutations(std::string_view(brca1.seq.bases()), muts));
    write_fasta(FastaFile{{p}}, outDir / file);
    return outDir / file;
  };

  CorpusPaths paths;
  paths.manifest = outDir / "manifest.json";
  paths.fallbackManifest = outDir / "manifest_fallback.json";
  paths.trainingData = outDir / "training.jsonl";
  paths.cleanPatient = write_patient("patient_clean.fasta", "PATIENT_CLEAN",
                                     "no engineered mutations", {});
  paths.mutatedPatient = write_patient("patient_mutated.fasta", "PATIENT_MUTATED",
                                       "engineered nonsense substitution", {nonsense});
  paths.silentPatient = write_patient("patient_silent.fasta", "PATIENT_SILENT",
                                      "engineered silent substitution", {silent});
  return paths;
}

}  // namespace mutascan
