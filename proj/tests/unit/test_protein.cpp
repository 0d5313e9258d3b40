#include <random>

#include "doctest.h"
#include "mutascan/align.hpp"
#include "mutascan/error.hpp"
#include "mutascan/protein.hpp"
#include "oracles.hpp"

using namespace mutascan;

namespace {

Mutation sub(std::size_t pos, char ref, char alt) {
  return {pos, MutationKind::Substitution, std::string(1, ref), std::string(1, alt), {}};
}

}  // namespace

TEST_CASE("codon table matches the written-out standard code") {
  const CodonTable& t = CodonTable::standard();
  int stops = 0;
  for (const auto& [codon, aa] : oracle::standard_code()) {
    CHECK(t.translate(codon) == aa);
    stops += t.is_stop(codon) ? 1 : 0;
  }
  CHECK(oracle::standard_code().size() == 64);
  CHECK(stops == 3);
  CHECK(t.translate("ATG") == 'M');
  CHECK(t.translate("ANG") == 'X');
  const std::string bases = "ACGT";
  for (std::size_t i = 0; i < 64; ++i) {
    const std::string codon{bases[i / 16], bases[(i / 4) % 4], bases[i % 4]};
    CHECK(t.at_index(i) == oracle::standard_code().at(codon));
  }
}

TEST_CASE("translate examples") {
  CHECK(translate(std::string_view("ATG")) == "M");
  CHECK(translate(std::string_view("ATGTAA")) == "M*");
  CHECK(translate(std::string_view("ATGTAAGG")) == "M*");
  CHECK(translate(std::string_view("AATGTAA"), 1) == "M*");
  CHECK(translate(std::string_view("AT")).empty());
  CHECK_THROWS_AS(translate(std::string_view("ATG"), 3), Error);
}

TEST_CASE("translate agrees with oracle on random sequences") {
  std::mt19937_64 rng(100);
  std::uniform_int_distribution<std::size_t> len(1, 400);
  for (int i = 0; i < 100; ++i) {
    const std::string s = oracle::random_dna(rng, len(rng), "ACGTACGTN");
    for (int f = 0; f < 3; ++f)
      CHECK(translate(std::string_view(s), f) == oracle::translate(s, static_cast<std::size_t>(f)));
  }
}

TEST_CASE("effect examples") {
  //                         codon: 1   2   3   4
  const DnaSequence ref("r", "", "ATGAAACGACAGTAA");
  CHECK(classify_effect(sub(9, 'A', 'G'), ref, 1, 15).kind == EffectKind::Silent);
  const ProteinEffect non = classify_effect(sub(10, 'C', 'T'), ref, 1, 15);
  CHECK(non.kind == EffectKind::Nonsense);
  CHECK(non.refAA == 'Q');
  CHECK_FALSE(non.altAA.has_value());
  const ProteinEffect mis = classify_effect(sub(4, 'A', 'G'), ref, 1, 15);
  CHECK(mis.kind == EffectKind::Missense);
  CHECK(mis.refAA == 'K');
  CHECK(mis.altAA == 'E');
  const Mutation ins{6, MutationKind::Insertion, "", "T", {}};
  CHECK(classify_effect(ins, ref, 1, 15).kind == EffectKind::Frameshift);
  const Mutation inframe{4, MutationKind::Deletion, "AAA", "", {}};
  const ProteinEffect e = classify_effect(inframe, ref, 1, 15);
  CHECK(e.kind == EffectKind::Missense);
  CHECK_FALSE(e.refAA.has_value());
}

TEST_CASE("mutations outside the CDS are non-coding") {
  const DnaSequence ref("r", "", "GGGATGAAATAAGGG");
  CHECK(classify_effect(sub(2, 'G', 'A'), ref, 4, 12).kind == EffectKind::NonCoding);
  CHECK(classify_effect(sub(14, 'G', 'A'), ref, 4, 12).kind == EffectKind::NonCoding);
  const Mutation edge{12, MutationKind::Insertion, "", "A", {}};
  CHECK(classify_effect(edge, ref, 4, 12).kind == EffectKind::NonCoding);
  const Mutation before{3, MutationKind::Insertion, "", "A", {}};
  CHECK(classify_effect(before, ref, 4, 12).kind == EffectKind::NonCoding);
  const Mutation inside{4, MutationKind::Insertion, "", "A", {}};
  CHECK(classify_effect(inside, ref, 4, 12).kind == EffectKind::Frameshift);
  CHECK_THROWS_AS(classify_effect(sub(16, 'G', 'A'), ref, 4, 12), Error);
  CHECK_THROWS_AS(classify_effect(sub(2, 'G', 'A'), ref, 4, 16), Error);
}

TEST_CASE("indel frameshift iff length is not a multiple of 3") {
  std::mt19937_64 rng(9);
  const DnaSequence ref("r", "", oracle::random_dna(rng, 300));
  std::uniform_int_distribution<std::size_t> pos(20, 250), len(1, 9);
  for (int i = 0; i < 200; ++i) {
    const std::size_t p = pos(rng), n = len(rng);
    const Mutation d{p, MutationKind::Deletion, ref.bases().substr(p - 1, n), "", {}};
    const Mutation in{p, MutationKind::Insertion, "", oracle::random_dna(rng, n), {}};
    for (const Mutation& m : {d, in}) {
      const EffectKind k = classify_effect(m, ref, 10, 290).kind;
      CHECK((k == EffectKind::Frameshift) == (n % 3 != 0));
    }
  }
}

TEST_CASE("silent substitutions leave the protein unchanged") {
  std::mt19937_64 rng(200);
  const std::string bases = oracle::random_dna(rng, 603);
  const DnaSequence ref("r", "", bases);
  std::uniform_int_distribution<std::size_t> pos(1, 603);
  std::uniform_int_distribution<int> b(0, 3);
  int silent = 0;
  while (silent < 200) {
    const std::size_t p = pos(rng);
    const char alt = "ACGT"[b(rng)];
    if (alt == bases[p - 1]) continue;
    const Mutation m = sub(p, bases[p - 1], alt);
    if (classify_effect(m, ref, 1, 603).kind != EffectKind::Silent) continue;
    ++silent;
    CHECK(oracle::translate(apply_mutations(std::string_view(bases), {m}), 0) ==
          oracle::translate(bases, 0));
  }
}

TEST_CASE("malignant candidate rule") {
  Mutation m = sub(1, 'A', 'C');
  CHECK_FALSE(is_malignant_candidate(m));
  for (EffectKind k : {EffectKind::Missense, EffectKind::Nonsense, EffectKind::Frameshift}) {
    m.effect = ProteinEffect{k, {}, {}};
    CHECK(is_malignant_candidate(m));
  }
  for (EffectKind k : {EffectKind::Silent, EffectKind::NonCoding}) {
    m.effect = ProteinEffect{k, {}, {}};
    CHECK_FALSE(is_malignant_candidate(m));
  }
}
