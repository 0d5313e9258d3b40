#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mutascan/align.hpp"
#include "mutascan/seqio.hpp"

namespace mutascan {

struct Posting {
  std::uint32_t subject;
  std::uint32_t offset;  // 0-based

  bool operator==(const Posting&) const = default;
  auto operator<=>(const Posting&) const = default;
};

/// Exact k-mer index over a FASTA database.
///
/// Windows containing N are skipped. Postings are stored sorted by
/// (k-mer code, subject, offset) so lookups and iteration are
/// deterministic. Immutable once built; safe to share across threads.
class KmerIndex {
 public:
  static constexpr std::size_t kMaxK = 32;

  std::size_t k() const noexcept { return k_; }
  const std::vector<DnaSequence>& subjects() const noexcept { return subjects_; }
  std::uint64_t total_length() const noexcept { return totalLength_; }
  std::size_t posting_count() const noexcept { return entries_.size(); }

  std::vector<Posting> lookup(std::string_view kmer) const;
  std::vector<Posting> lookup(std::uint64_t code) const;

  // Every (k-mer, posting) pair in index order.
  std::vector<std::pair<std::string, Posting>> all_postings() const;

 private:
  friend KmerIndex build_index(const FastaFile& db, std::size_t k);

  struct Entry {
    std::uint64_t code;
    Posting posting;
  };

  std::size_t k_ = 0;
  std::vector<DnaSequence> subjects_;
  std::uint64_t totalLength_ = 0;
  std::vector<Entry> entries_;
};

inline constexpr std::size_t kDefaultK = 11;
inline constexpr std::size_t kMinK = 4;

/// Throws EmptyDatabase for an empty file, InvalidArgument when k is
/// outside [4, 32].
KmerIndex build_index(const FastaFile& db, std::size_t k = kDefaultK);

// Encodes an N-free k-mer as 2 bits per base; nullopt if it contains N.
std::optional<std::uint64_t> encode_kmer(std::string_view kmer) noexcept;

struct SearchParams {
  std::size_t k = kDefaultK;
  int matchScore = 1;
  int mismatchScore = -3;
  int gapOpen = -5;
  int gapExtend = -2;
  int xDrop = 20;
  std::size_t minSeedHitsPerDiagonal = 1;
  double karlinLambda = 1.374;
  double karlinK = 0.711;
  std::size_t maxHits = 20;
  // Ungapped segments scoring at least this much are refined by banded
  // gapped alignment; weaker ones are reported as ungapped.
  int gapTrigger = 20;
  int bandRadius = 16;

  Scoring scoring() const { return {matchScore, mismatchScore, gapOpen, gapExtend}; }
  void validate() const;
};

/// A local alignment between query (row A) and subject (row B), with
/// half-open 0-based coordinates.
struct LocalAlignment {
  AlignmentResult alignment;
  std::size_t queryBegin = 0;
  std::size_t queryEnd = 0;
  std::size_t subjectBegin = 0;
  std::size_t subjectEnd = 0;

  long score() const noexcept { return alignment.score; }

  bool operator==(const LocalAlignment&) const = default;
};

struct HomologyHit {
  std::string subjectId;
  std::string description;
  long maxScore = 0;
  long totalScore = 0;
  double queryCover = 0.0;
  double eValue = 0.0;
  double maxIdent = 0.0;
  LocalAlignment bestAlignment;
  // Reported non-overlapping alignments, best first.
  std::vector<LocalAlignment> alignments;

  bool operator==(const HomologyHit&) const = default;
};

// E = K * m * n * exp(-lambda * S)
double evalue(long score, std::size_t queryLength, std::uint64_t dbLength,
              const SearchParams& params) noexcept;

/// Seed-and-extend search of `query` against every subject of `index`.
///
/// Seeds are exact k-mer matches grouped per diagonal; each is extended
/// ungapped with an X-drop cutoff, strong segments are re-aligned with a
/// banded affine local DP around their diagonal, and the non-overlapping
/// alignments of each subject are folded into one HomologyHit. Hits are
/// ordered by maxScore descending, then subjectId ascending, truncated to
/// `maxHits`. Throws QueryTooShort when the query is shorter than k.
std::vector<HomologyHit> search(const DnaSequence& query, const KmerIndex& index,
                                const SearchParams& params = {});

// Same contract; subjects are processed one at a time on the calling thread.
std::vector<HomologyHit> search_serial(const DnaSequence& query, const KmerIndex& index,
                                       const SearchParams& params = {});

/// Best local alignment restricted to diagonals within `radius` of
/// `diagonal` (= query offset - subject offset). Exposed for testing.
std::optional<LocalAlignment> banded_local_align(std::string_view query, std::string_view subject,
                                                 long diagonal, int radius,
                                                 const Scoring& scoring);

// BLAST-style E-value text; "0.0" below 1e-180.
std::string format_evalue(double e);

std::string format_hit_row(const HomologyHit& hit);
std::string format_hit_table(const std::vector<HomologyHit>& hits);

}  // namespace mutascan
