#include "mutascan/protein.hpp"

#include <algorithm>
#include <optional>

#include "mutascan/error.hpp"

namespace mutascan {

namespace {

int base_code(char c) noexcept {
  switch (c) {
    case 'A': return 0;
    case 'C': return 1;
    case 'G': return 2;
    case 'T': return 3;
    default: return -1;
  }
}

}  // namespace

CodonTable::CodonTable() {
  // NCBI translation table 1, codons enumerated in TCAG order.
  constexpr std::string_view kTcagOrder =
      "FFLLSSSSYY**CC*WLLLLPPPPHHQQRRRRIIIMTTTTNNKKSSRRVVVVAAAADDEEGGGG";
  constexpr std::string_view kTcag = "TCAG";
  for (std::size_t i = 0; i < kSize; ++i) {
    const int b1 = base_code(kTcag[i / 16]);
    const int b2 = base_code(kTcag[(i / 4) % 4]);
    const int b3 = base_code(kTcag[i % 4]);
    table_[static_cast<std::size_t>(16 * b1 + 4 * b2 + b3)] = kTcagOrder[i];
  }
}

const CodonTable& CodonTable::standard() {
  static const CodonTable table;
  return table;
}

char CodonTable::translate(std::string_view codon) const noexcept {
  if (codon.size() != 3) return kUnknownAA;
  const int b1 = base_code(codon[0]);
  const int b2 = base_code(codon[1]);
  const int b3 = base_code(codon[2]);
  if (b1 < 0 || b2 < 0 || b3 < 0) return kUnknownAA;
  return table_[static_cast<std::size_t>(16 * b1 + 4 * b2 + b3)];
}

std::string translate(std::string_view dna, int frame) {
  if (frame < 0 || frame > 2) throw Error(ErrorCode::InvalidArgument, "frame must be 0, 1 or 2");
  const CodonTable& code = CodonTable::standard();
  std::string protein;
  const auto off = static_cast<std::size_t>(frame);
  if (dna.size() < off) return protein;
  protein.reserve((dna.size() - off) / 3);
  for (std::size_t i = off; i + 3 <= dna.size(); i += 3) protein.push_back(code.translate(dna.substr(i, 3)));
  return protein;
}

std::string translate(const DnaSequence& dna, int frame) {
  return translate(std::string_view(dna.bases()), frame);
}

ProteinEffect classify_effect(const Mutation& mut, const DnaSequence& ref, std::size_t cdsStart,
                              std::size_t cdsEnd) {
  const std::size_t n = ref.size();
  if (cdsStart < 1 || cdsStart > cdsEnd || cdsEnd > n)
    throw Error(ErrorCode::PositionOutOfRange,
                "CDS [" + std::to_string(cdsStart) + ", " + std::to_string(cdsEnd) +
                    "] outside reference of length " + std::to_string(n));

  if (mut.kind == MutationKind::Insertion) {
    if (mut.position > n)
      throw Error(ErrorCode::PositionOutOfRange,
                  "insertion after " + std::to_string(mut.position) + " beyond reference");
    // Inside only when flanked by two CDS bases.
    if (mut.position < cdsStart || mut.position >= cdsEnd) return {EffectKind::NonCoding, {}, {}};
    if (mut.altBases.size() % 3 != 0) return {EffectKind::Frameshift, {}, {}};
    return {EffectKind::Missense, {}, {}};
  }

  const std::size_t len = mut.refBases.size();
  if (len == 0 || mut.position < 1 || mut.position - 1 + len > n)
    throw Error(ErrorCode::PositionOutOfRange,
                std::string(to_string(mut.kind)) + " at " + std::to_string(mut.position) +
                    " outside reference");
  const std::size_t first = mut.position;
  const std::size_t last = mut.position + len - 1;

  if (mut.kind == MutationKind::Deletion) {
    const std::size_t lo = std::max(first, cdsStart);
    const std::size_t hi = std::min(last, cdsEnd);
    if (lo > hi) return {EffectKind::NonCoding, {}, {}};
    // Only the deleted bases inside the CDS shift the frame.
    if ((hi - lo + 1) % 3 != 0) return {EffectKind::Frameshift, {}, {}};
    return {EffectKind::Missense, {}, {}};
  }

  const std::size_t codingLen = (cdsEnd - cdsStart + 1) / 3 * 3;
  if (codingLen == 0) return {EffectKind::NonCoding, {}, {}};
  const std::size_t codingEnd = cdsStart + codingLen - 1;
  const std::size_t lo = std::max(first, cdsStart);
  const std::size_t hi = std::min(last, codingEnd);
  if (lo > hi) return {EffectKind::NonCoding, {}, {}};

  const CodonTable& code = CodonTable::standard();
  const std::string& bases = ref.bases();
  const std::size_t firstCodon = (lo - cdsStart) / 3;
  const std::size_t lastCodon = (hi - cdsStart) / 3;

  std::optional<std::pair<char, char>> firstChange;
  std::optional<char> nonsenseRef;
  for (std::size_t k = firstCodon; k <= lastCodon; ++k) {
    const std::size_t codonStart = cdsStart + 3 * k;  // 1-based
    std::string refCodon = bases.substr(codonStart - 1, 3);
    std::string altCodon = refCodon;
    for (std::size_t off = 0; off < 3; ++off) {
      const std::size_t pos = codonStart + off;
      if (pos >= first && pos <= last) altCodon[off] = mut.altBases[pos - first];
    }
    const char refAA = code.translate(refCodon);
    const char altAA = code.translate(altCodon);
    if (refAA == altAA) continue;
    if (!firstChange) firstChange = {refAA, altAA};
    if (altAA == kStopSymbol && !nonsenseRef) nonsenseRef = refAA;
  }

  if (!firstChange) return {EffectKind::Silent, {}, {}};
  if (nonsenseRef) return {EffectKind::Nonsense, *nonsenseRef, {}};
  return {EffectKind::Missense, firstChange->first, firstChange->second};
}

bool is_malignant_candidate(const Mutation& mut) noexcept {
  return mut.effect && mut.effect->kind != EffectKind::Silent &&
         mut.effect->kind != EffectKind::NonCoding;
}

}  // namespace mutascan
