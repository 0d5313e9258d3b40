#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

#include "mutascan/mutation.hpp"
#include "mutascan/seqio.hpp"

namespace mutascan {

inline constexpr char kStopSymbol = '*';
inline constexpr char kUnknownAA = 'X';

/// Standard genetic code, indexed by 2-bit base codes (A=0, C=1, G=2, T=3)
/// as `16*first + 4*second + third`.
class CodonTable {
 public:
  static const CodonTable& standard();

  // 'X' when any base is N.
  char translate(std::string_view codon) const noexcept;
  char at_index(std::size_t index) const noexcept { return table_[index]; }
  bool is_stop(std::string_view codon) const noexcept {
    return translate(codon) == kStopSymbol;
  }

  static constexpr std::size_t kSize = 64;

 private:
  CodonTable();
  std::array<char, kSize> table_{};
};

/// One letter per complete codon from offset `frame`; stops are rendered
/// '*' and do not end translation. Trailing partial codons are dropped.
std::string translate(std::string_view dna, int frame = 0);
std::string translate(const DnaSequence& dna, int frame = 0);

/// Protein-level consequence of `mut` for a single contiguous CDS
/// [cdsStart, cdsEnd] (1-based, inclusive) on `ref`.
///
/// Substitutions are judged codon by codon over the complete codons of the
/// CDS; a substitution touching only the trailing partial codon counts as
/// NonCoding. Indels whose length is a multiple of 3 are reported as
/// Missense without amino acids.
ProteinEffect classify_effect(const Mutation& mut, const DnaSequence& ref, std::size_t cdsStart,
                              std::size_t cdsEnd);

// Effect is neither Silent nor NonCoding. Unclassified mutations are not candidates.
bool is_malignant_candidate(const Mutation& mut) noexcept;

}  // namespace mutascan
