// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: acceptance <path-to-mutascan-cli> <scratch-dir>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "json.hpp"
#include "mutascan/align.hpp"
#include "mutascan/error.hpp"
#include "mutascan/homology.hpp"
#include "mutascan/neural.hpp"
#include "mutascan/pipeline.hpp"
#include "mutascan/protein.hpp"
#include "mutascan/seqstats.hpp"
#include "oracles.hpp"

using namespace mutascan;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Check = std::function<Outcome()>;

int failures = 0;

void run(const char* id, const char* title, double budgetSeconds, const Check& check) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > budgetSeconds) {
    o.pass = false;
    o.detail += " (over the " + std::to_string(static_cast<int>(budgetSeconds)) + " s budget)";
  }
  if (!o.pass) ++failures;
  std::printf("%s %-5s %-28s %7.2fs  %s\n", o.pass ? "PASS" : "FAIL", id, title, secs,
              o.detail.c_str());
  std::fflush(stdout);
}

Outcome fail(const std::string& why) { return {false, why}; }

std::string num(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

// ---- 1 ---------------------------------------------------------------------

Outcome composition_exactness() {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::size_t> len(1, 10000);
  std::uniform_int_distribution<int> coin(0, 1);
  int nFree = 0;
  for (int i = 0; i < 1000; ++i) {
    const bool withN = coin(rng) == 1;
    const std::string s = oracle::random_dna(rng, len(rng), withN ? "ACGTN" : "ACGT");
    const oracle::Counts k = oracle::count(s);
    if (k.a + k.c + k.g + k.t == 0) {
      try {
        composition(std::string_view(s));
        return fail("all-N sequence accepted");
      } catch (const Error& e) {
        if (e.code() != ErrorCode::AllAmbiguous) return fail("wrong error for all-N");
      }
      continue;
    }
    const CompositionStats st = composition(std::string_view(s));
    if (st.counts.a != k.a || st.counts.c != k.c || st.counts.g != k.g || st.counts.t != k.t ||
        st.counts.n != k.n || st.length != s.size())
      return fail("count mismatch at case " + std::to_string(i));
    if (st.gcPercent != oracle::gc_percent(k) || st.atPercent != oracle::at_percent(k))
      return fail("percent mismatch at case " + std::to_string(i));
    if (k.n == 0) {
      ++nFree;
      if (std::abs(st.gcPercent + st.atPercent - 100.0) > 1e-9)
        return fail("GC+AT != 100 at case " + std::to_string(i));
    }
  }
  return {true, "1000 sequences exact; " + std::to_string(nFree) + " N-free sum to 100"};
}

// ---- 2 ---------------------------------------------------------------------

Outcome gate_verdicts() {
  const GateVerdict a = gc_gate(38.0), b = gc_gate(40.0), c = gc_gate(47.0);
  if (!a.accepted) return fail("38.0 rejected");
  if (!b.accepted) return fail("40.0 rejected");
  if (c.accepted || !c.geneBandFlag) return fail("47.0 verdict wrong");
  return {true, "38.0 accept, 40.0 accept, 47.0 reject+gene-band"};
}

// ---- 3 ---------------------------------------------------------------------

Outcome alignment_optimality() {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> len(1, 6);
  const oracle::Params p{2, -1, -5, -1};
  for (int i = 0; i < 500; ++i) {
    const std::string a = oracle::random_dna(rng, len(rng));
    const std::string b = oracle::random_dna(rng, len(rng));
    const long got = global_align(std::string_view(a), std::string_view(b)).score;
    const long want = oracle::brute_force_global(a, b, p);
    if (got != want)
      return fail(a + " vs " + b + ": " + std::to_string(got) + " != " + std::to_string(want));
  }
  return {true, "500 pairs equal exhaustive enumeration"};
}

// ---- 4 ---------------------------------------------------------------------

Outcome mutation_round_trip() {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::size_t> len(1, 2000);
  std::uniform_int_distribution<int> nEdits(0, 10), kind(0, 2), insLen(1, 6), delLen(1, 6);
  for (int i = 0; i < 200; ++i) {
    const std::string r = oracle::random_dna(rng, len(rng));
    std::string p = r;
    for (int e = nEdits(rng); e > 0; --e) {
      std::uniform_int_distribution<std::size_t> at(0, p.size() - 1);
      const std::size_t x = at(rng);
      switch (kind(rng)) {
        case 0:
          p[x] = "ACGT"[(std::string("ACGT").find(p[x]) + 1 + x % 3) % 4];
          break;
        case 1:
          p.insert(x, oracle::random_dna(rng, static_cast<std::size_t>(insLen(rng))));
          break;
        default:
          if (p.size() > 1) p.erase(x, std::min<std::size_t>(p.size() - 1, delLen(rng)));
      }
    }
    const auto muts = call_mutations(global_align(std::string_view(r), std::string_view(p)));
    if (apply_mutations(std::string_view(r), muts) != p)
      return fail("round-trip mismatch at case " + std::to_string(i));
  }
  return {true, "200 pairs reconstructed byte-exactly"};
}

// ---- 5 ---------------------------------------------------------------------

Outcome homology_soundness() {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::size_t> len(300, 2000);
  FastaFile db;
  std::vector<std::string> seqs;
  for (int i = 0; i < 20; ++i) {
    seqs.push_back(oracle::random_dna(rng, len(rng)));
    db.records.emplace_back("subj" + std::to_string(100 + i), "", seqs.back());
  }
  const KmerIndex index = build_index(db);
  const SearchParams sp;
  const oracle::Params op{sp.matchScore, sp.mismatchScore, sp.gapOpen, sp.gapExtend};
  std::uniform_int_distribution<std::size_t> pick(0, 19), qlen(sp.k, 400), coin(0, 24);

  for (int i = 0; i < 100; ++i) {
    const std::size_t s = pick(rng);
    const std::size_t n = std::min(qlen(rng), seqs[s].size());
    std::uniform_int_distribution<std::size_t> start(0, seqs[s].size() - n);
    const std::string q = seqs[s].substr(start(rng), n);
    const auto hits = search(DnaSequence("q", "", q), index, sp);
    const auto it = std::find_if(hits.begin(), hits.end(),
                                 [&](const HomologyHit& h) { return h.subjectId == db.records[s].id(); });
    if (it == hits.end()) return fail("exact substring " + std::to_string(i) + " not found");
    if (it->maxIdent != 100.0 || it->queryCover != 100.0)
      return fail("exact substring " + std::to_string(i) + " ident/cover " + num(it->maxIdent) +
                  "/" + num(it->queryCover));
    const long sw = oracle::smith_waterman(q, seqs[s], op);
    if (it->maxScore != sw)
      return fail("exact substring " + std::to_string(i) + " score " +
                  std::to_string(it->maxScore) + " != SW " + std::to_string(sw));
  }

  int withHits = 0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t s = pick(rng);
    const std::size_t n = std::min<std::size_t>(300, seqs[s].size());
    std::uniform_int_distribution<std::size_t> start(0, seqs[s].size() - n);
    const std::string base = seqs[s].substr(start(rng), n);
    std::string q;
    for (char c : base) {
      const std::size_t r = coin(rng);
      if (r == 0) continue;
      if (r == 1) q.push_back('T');
      q.push_back(r == 2 ? (c == 'G' ? 'C' : 'G') : c);
    }
    if (q.size() < sp.k) continue;
    const auto hits = search(DnaSequence("q", "", q), index, sp);
    withHits += hits.empty() ? 0 : 1;
    for (const HomologyHit& h : hits) {
      const std::size_t si = static_cast<std::size_t>(std::stoi(h.subjectId.substr(4)) - 100);
      const long sw = oracle::smith_waterman(q, seqs[si], op);
      if (h.maxScore > sw)
        return fail("mutated query " + std::to_string(i) + " score " + std::to_string(h.maxScore) +
                    " exceeds SW " + std::to_string(sw));
      for (const LocalAlignment& a : h.alignments)
        if (oracle::rescore(a.alignment.alignedA, a.alignment.alignedB, op) != a.score())
          return fail("alignment rescoring mismatch");
    }
  }
  return {true, "100 exact substrings = SW oracle; 100 mutated <= oracle (" +
                    std::to_string(withHits) + " with hits)"};
}

// ---- 6 ---------------------------------------------------------------------

Outcome genetic_code() {
  const CodonTable& t = CodonTable::standard();
  int stops = 0;
  for (const auto& [codon, aa] : oracle::standard_code()) {
    if (t.translate(codon) != aa) return fail("codon " + codon);
    stops += t.is_stop(codon) ? 1 : 0;
  }
  if (oracle::standard_code().size() != 64) return fail("oracle incomplete");
  if (stops != 3) return fail(std::to_string(stops) + " stop codons");
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<std::size_t> len(0, 600);
  for (int i = 0; i < 100; ++i) {
    const std::string s = oracle::random_dna(rng, len(rng) + 1);
    for (int f = 0; f < 3; ++f)
      if (translate(std::string_view(s), f) != oracle::translate(s, static_cast<std::size_t>(f)))
        return fail("sequence " + std::to_string(i) + " frame " + std::to_string(f));
  }
  return {true, "64 codons, 3 stops, 100 sequences x 3 frames"};
}

// ---- 7 ---------------------------------------------------------------------

Outcome gradient_check() {
  std::mt19937_64 rng(7);
  const std::vector<std::size_t> widths{1, 2, 4, 10};
  std::uniform_int_distribution<std::size_t> w(0, 3), depth(1, 2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  std::size_t partials = 0;
  for (int c = 0; c < 50; ++c) {
    std::vector<std::size_t> sizes;
    if (c == 0) {
      sizes = {10, 4, 1};
    } else {
      sizes.push_back(widths[w(rng)]);
      for (std::size_t d = depth(rng); d > 0; --d) sizes.push_back(widths[w(rng)]);
      sizes.push_back(1);
    }
    const Network net = initialize(NetworkTopology{sizes}, 7000 + static_cast<std::uint64_t>(c), 1.0);
    Sample s;
    for (std::size_t i = 0; i < sizes[0]; ++i) s.x.push_back(u(rng));
    s.target = u(rng) < 0.5 ? 0.0 : 1.0;
    const Gradient g = gradient(net, s);
    for (int bias = 0; bias < 2; ++bias) {
      const auto& params = bias ? g.biases : g.weights;
      for (std::size_t l = 0; l < params.size(); ++l) {
        for (std::size_t i = 0; i < params[l].size(); ++i) {
          const double fd = oracle::central_difference(sizes, net.weights, net.biases, s.x,
                                                       s.target, bias == 1, l, i);
          const double bp = params[l][i];
          // Relative error, with an absolute floor for partials that are
          // numerically zero.
          const double scale = std::max({std::abs(bp), std::abs(fd), 1e-7});
          const double rel = std::abs(bp - fd) / scale;
          worst = std::max(worst, rel);
          ++partials;
          if (rel > 1e-6)
            return fail("case " + std::to_string(c) + " rel err " + num(rel) + " (bp " + num(bp) +
                        ", fd " + num(fd) + ")");
        }
      }
    }
  }
  return {true, "50 cases, " + std::to_string(partials) + " partials, worst rel err " + num(worst)};
}

// ---- 8 ---------------------------------------------------------------------

Outcome training_convergence(const fs::path& scratch) {
  const CorpusPaths paths = make_synthetic_corpus(42, scratch / "ac8-corpus");
  const auto examples = load_examples(paths.trainingData);
  std::size_t m1 = 0, m2 = 0, b = 0;
  for (const auto& e : examples) {
    if (e.label == 1) (e.gene == "BRCA1" ? m1 : m2)++;
    else ++b;
  }
  if (m1 != 5 || m2 != 4 || b != 9)
    return fail("dataset split " + std::to_string(m1) + "/" + std::to_string(m2) + "/" +
                std::to_string(b));
  const auto samples = to_samples(examples);

  TrainConfig gating;
  gating.targetMse = 1e-6;
  const TrainResult r1 = train(NetworkTopology{}, samples, gating);
  const TrainResult r2 = train(NetworkTopology{}, samples, gating);
  if (!r1.report.converged)
    return fail("MSE " + num(r1.report.finalMse) + " after " + std::to_string(r1.report.epochsRun));
  if (r1.report.history != r2.report.history || !(r1.network == r2.network))
    return fail("training is not deterministic");

  const TrainResult full = train(NetworkTopology{}, samples, TrainConfig{});
  return {true, "1e-6 at epoch " + std::to_string(r1.report.epochsRun) + "; default 1e-9 target " +
                    (full.report.converged ? "reached at epoch " + std::to_string(full.report.epochsRun)
                                           : "not reached (final " + num(full.report.finalMse) + ")")};
}

// ---- 9 ---------------------------------------------------------------------

Outcome xor_sanity() {
  const std::vector<Sample> data{{{0, 0}, 0}, {{0, 1}, 1}, {{1, 0}, 1}, {{1, 1}, 0}};
  TrainConfig cfg;
  cfg.seed = 42;
  cfg.maxEpochs = 100000;
  const TrainResult r = train(NetworkTopology{{2, 4, 1}}, data, cfg);
  const double best = r.report.finalMse;
  if (!(best < 1e-3)) return fail("final MSE " + num(best));
  return {true, "MSE " + num(best) + " after " + std::to_string(r.report.epochsRun) + " epochs"};
}

// ---- 10 --------------------------------------------------------------------

int shell(const std::string& cmd) { return std::system(cmd.c_str()); }

std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

Outcome end_to_end(const fs::path& cli, const fs::path& scratch) {
  const fs::path corpus = scratch / "ac10-corpus";
  fs::remove_all(corpus);
  if (shell(quote(cli) + " gen-corpus --seed 42 --out " + quote(corpus) + " > /dev/null") != 0)
    return fail("gen-corpus failed");

  const auto diagnose = [&](const std::string& patient, const std::string& manifest,
                            const std::string& tag) -> nlohmann::json {
    const fs::path work = scratch / ("ac10-work-" + tag);
    fs::remove_all(work);
    const std::string cmd = "MUTASCAN_WORKDIR=" + quote(work) + " " + quote(cli) +
                            " diagnose --patient " + quote(corpus / patient) + " --manifest " +
                            quote(corpus / manifest) + " > " + quote(scratch / (tag + ".out"));
    if (shell(cmd) != 0) throw std::runtime_error("diagnose " + tag + " exited non-zero");
    return nlohmann::json::parse(read_text_file(work / "report.json"));
  };
  const auto report_bytes = [&](const std::string& tag) {
    return read_text_file(scratch / ("ac10-work-" + tag) / "report.json") +
           read_text_file(scratch / ("ac10-work-" + tag) / "report.txt");
  };

  const auto clean = diagnose("patient_clean.fasta", "manifest.json", "clean");
  if (clean["overallLabel"] != "Normal" || clean["displayText"] != "Normal")
    return fail("clean patient: " + clean["displayText"].dump());
  const std::string cleanOut = read_text_file(scratch / "clean.out");
  if (cleanOut.find("result: Normal") == std::string::npos) return fail("clean text lacks result");

  const auto mutated = diagnose("patient_mutated.fasta", "manifest.json", "mutated");
  if (mutated["overallLabel"] != "AtRisk" ||
      mutated["displayText"] != "highly risk of breast cancer")
    return fail("mutated patient: " + mutated["displayText"].dump());
  if (read_text_file(scratch / "mutated.out").find("highly risk of breast cancer") ==
      std::string::npos)
    return fail("mutated text lacks display string");

  const auto fallback = diagnose("patient_clean.fasta", "manifest_fallback.json", "fallback");
  const auto& rejected = fallback["rejectedReferences"];
  if (rejected.size() != 1 || rejected[0]["databaseName"] != "ebi" ||
      rejected[0]["verdict"]["accepted"] != false)
    return fail("fallback: first database not rejected");
  if (fallback["adoptedReference"]["databaseName"] != "ensembl" ||
      fallback["adoptedReference"]["verdict"]["accepted"] != true)
    return fail("fallback: second database not adopted");

  const std::string first = report_bytes("mutated");
  diagnose("patient_mutated.fasta", "manifest.json", "mutated");
  if (report_bytes("mutated") != first) return fail("repeated run differs");
  const std::string fb = report_bytes("fallback");
  diagnose("patient_clean.fasta", "manifest_fallback.json", "fallback");
  if (report_bytes("fallback") != fb) return fail("repeated fallback run differs");

  return {true, "clean=Normal, mutated=AtRisk, ebi " +
                    num(rejected[0]["verdict"]["measuredGc"].get<double>()) +
                    "% rejected -> ensembl " +
                    num(fallback["adoptedReference"]["verdict"]["measuredGc"].get<double>()) +
                    "% adopted, reruns identical"};
}

// ---- 11 --------------------------------------------------------------------

Outcome persistence(const fs::path& scratch) {
  const Network net = initialize(NetworkTopology{}, 1111, 3.0);
  const fs::path file = scratch / "ac11-model.json";
  save_net(net, file);
  const Network back = load_net(file);
  if (!(back == net)) return fail("parameters differ after reload");
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    FeatureVector x;
    for (double& v : x.values) v = u(rng);
    if (forward(net, x) != forward(back, x)) return fail("forward differs on input " + std::to_string(i));
  }
  return {true, "bit-exact parameters, 100 identical forwards"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: acceptance <mutascan-cli> <scratch-dir>\n");
    return 2;
  }
  const fs::path cli = fs::absolute(argv[1]);
  const fs::path scratch = fs::absolute(argv[2]);
  fs::remove_all(scratch);
  fs::create_directories(scratch);

  run("AC1", "composition exactness", 5, composition_exactness);
  run("AC2", "GC gate verdicts", 1, gate_verdicts);
  run("AC3", "alignment optimality", 30, alignment_optimality);
  run("AC4", "mutation round-trip", 60, mutation_round_trip);
  run("AC5", "homology soundness", 60, homology_soundness);
  run("AC6", "genetic code", 5, genetic_code);
  run("AC7", "gradient check", 10, gradient_check);
  run("AC8", "training convergence", 120, [&] { return training_convergence(scratch); });
  run("AC9", "XOR sanity", 30, xor_sanity);
  run("AC10", "end-to-end CLI", 60, [&] { return end_to_end(cli, scratch); });
  run("AC11", "model persistence", 5, [&] { return persistence(scratch); });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
