#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mutascan/mutation.hpp"
#include "mutascan/seqio.hpp"

namespace mutascan {

/// Match/mismatch scores with affine gaps: a gap of length L costs
/// gapOpen + L * gapExtend. N against anything scores 0.
struct Scoring {
  int match = 2;
  int mismatch = -1;
  int gapOpen = -5;
  int gapExtend = -1;

  int pair(char a, char b) const noexcept {
    if (a == 'N' || b == 'N') return 0;
    return a == b ? match : mismatch;
  }
  int gap(std::size_t length) const noexcept {
    return gapOpen + static_cast<int>(length) * gapExtend;
  }

  void validate() const;
};

enum class OpKind { Match, Substitute, Insert, Delete };

std::string_view to_string(OpKind kind) noexcept;

struct OpRun {
  OpKind kind;
  std::size_t length;

  bool operator==(const OpRun&) const = default;
};

/// Two gapped rows of equal length. Insert is a gap in A, Delete a gap in B.
struct AlignmentResult {
  std::string alignedA;
  std::string alignedB;
  long score = 0;
  std::vector<OpRun> ops;
  double identityPercent = 0.0;

  std::size_t length() const noexcept { return alignedA.size(); }

  bool operator==(const AlignmentResult&) const = default;
};

// Builds ops and identity from the rows; `score` is stored as given.
AlignmentResult make_alignment(std::string alignedA, std::string alignedB, long score);

// Score of two gapped rows; each maximal gap run in a row is charged once.
long score_alignment(const std::string& alignedA, const std::string& alignedB,
                     const Scoring& scoring);

inline constexpr std::size_t kDefaultCellCap = 25'000'000;

/// Optimal global affine-gap alignment (three-state Gotoh recurrence).
///
/// Traceback prefers Match/Substitute, then Delete, then Insert whenever
/// several predecessors tie, so co-optimal inputs always produce the same
/// rows. Throws SizeCapExceeded when |a|*|b| exceeds `cellCap`.
AlignmentResult global_align(const DnaSequence& a, const DnaSequence& b,
                             const Scoring& scoring = {},
                             std::size_t cellCap = kDefaultCellCap);
AlignmentResult global_align(std::string_view a, std::string_view b,
                             const Scoring& scoring = {},
                             std::size_t cellCap = kDefaultCellCap);

/// Variants of B relative to A (A is the reference). Adjacent substituted
/// columns merge into one Substitution; each gap run becomes one indel.
std::vector<Mutation> call_mutations(const AlignmentResult& alignment);

/// Rebuilds the alternate sequence from the reference and a call set.
/// Throws OverlappingMutations / PositionOutOfRange.
std::string apply_mutations(std::string_view ref, const std::vector<Mutation>& muts);
DnaSequence apply_mutations(const DnaSequence& ref, const std::vector<Mutation>& muts,
                            std::string id = "patient");

}  // namespace mutascan
