#include "mutascan/align.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>

#include "mutascan/error.hpp"

namespace mutascan {

namespace {

constexpr long kNegInf = std::numeric_limits<long>::min() / 4;

// Per-cell traceback byte for the global DP.
//   bits 0-1: best state at the cell (0 diag, 1 delete, 2 insert)
//   bit 2:    delete state extends a delete run (else opens from the best state above)
//   bit 3:    insert state extends an insert run (else opens from the best state left)
constexpr std::uint8_t kStateMask = 0x3;
constexpr std::uint8_t kDelExtend = 0x4;
constexpr std::uint8_t kInsExtend = 0x8;

enum State : std::uint8_t { kDiag = 0, kDel = 1, kIns = 2 };

// Ties resolve diag > delete > insert.
inline std::uint8_t best_state(long d, long p, long q, long& best) noexcept {
  best = d;
  std::uint8_t s = kDiag;
  if (p > best) {
    best = p;
    s = kDel;
  }
  if (q > best) {
    best = q;
    s = kIns;
  }
  return s;
}

}  // namespace

void Scoring::validate() const {
  if (match <= 0 || mismatch > 0 || gapOpen > 0 || gapExtend > 0)
    throw Error(ErrorCode::InvalidArgument,
                "scoring requires match > 0 and mismatch, gapOpen, gapExtend <= 0");
}

std::string_view to_string(OpKind kind) noexcept {
  switch (kind) {
    case OpKind::Match: return "Match";
    case OpKind::Substitute: return "Substitute";
    case OpKind::Insert: return "Insert";
    case OpKind::Delete: return "Delete";
  }
  return "?";
}

AlignmentResult make_alignment(std::string alignedA, std::string alignedB, long score) {
  AlignmentResult r;
  r.score = score;
  std::size_t matches = 0;
  for (std::size_t i = 0; i < alignedA.size(); ++i) {
    const char x = alignedA[i];
    const char y = alignedB[i];
    OpKind k;
    if (x == '-')
      k = OpKind::Insert;
    else if (y == '-')
      k = OpKind::Delete;
    else if (x == y)
      k = OpKind::Match;
    else
      k = OpKind::Substitute;
    if (k == OpKind::Match) ++matches;
    if (!r.ops.empty() && r.ops.back().kind == k)
      ++r.ops.back().length;
    else
      r.ops.push_back({k, 1});
  }
  r.identityPercent =
      alignedA.empty() ? 0.0 : 100.0 * static_cast<double>(matches) / static_cast<double>(alignedA.size());
  r.alignedA = std::move(alignedA);
  r.alignedB = std::move(alignedB);
  return r;
}

long score_alignment(const std::string& alignedA, const std::string& alignedB,
                     const Scoring& scoring) {
  long total = 0;
  std::size_t i = 0;
  while (i < alignedA.size()) {
    if (alignedA[i] == '-' || alignedB[i] == '-') {
      const bool gapInA = alignedA[i] == '-';
      const std::string& row = gapInA ? alignedA : alignedB;
      std::size_t j = i;
      while (j < row.size() && row[j] == '-') ++j;
      total += scoring.gap(j - i);
      i = j;
    } else {
      total += scoring.pair(alignedA[i], alignedB[i]);
      ++i;
    }
  }
  return total;
}

AlignmentResult global_align(std::string_view a, std::string_view b, const Scoring& scoring,
                             std::size_t cellCap) {
  scoring.validate();
  if (a.empty() || b.empty())
    throw Error(ErrorCode::EmptySequence, "global alignment needs two non-empty sequences");
  const std::size_t m = a.size();
  const std::size_t n = b.size();
  if (m > cellCap / n)
    throw Error(ErrorCode::SizeCapExceeded,
                std::to_string(m) + " x " + std::to_string(n) + " cells exceeds cap of " +
                    std::to_string(cellCap));

  const std::size_t cols = n + 1;
  std::vector<std::uint8_t> trace((m + 1) * cols, 0);
  std::vector<long> prevD(cols), prevP(cols), prevH(cols);
  std::vector<long> curD(cols), curP(cols), curQ(cols), curH(cols);

  prevD[0] = 0;
  prevP[0] = kNegInf;
  prevH[0] = 0;
  trace[0] = kDiag;
  for (std::size_t j = 1; j <= n; ++j) {
    prevD[j] = kNegInf;
    prevP[j] = kNegInf;
    prevH[j] = scoring.gap(j);
    trace[j] = kIns | (j > 1 ? kInsExtend : 0);
  }

  const long openExt = scoring.gapOpen + scoring.gapExtend;
  for (std::size_t i = 1; i <= m; ++i) {
    std::uint8_t* row = &trace[i * cols];
    curD[0] = kNegInf;
    curQ[0] = kNegInf;
    curP[0] = scoring.gap(i);
    curH[0] = curP[0];
    row[0] = kDel | (i > 1 ? kDelExtend : 0);
    const char ai = a[i - 1];
    for (std::size_t j = 1; j <= n; ++j) {
      std::uint8_t cell = 0;

      curD[j] = prevH[j - 1] + scoring.pair(ai, b[j - 1]);

      const long delOpen = prevH[j] + openExt;
      const long delExt = prevP[j] + scoring.gapExtend;
      if (delExt > delOpen) {
        curP[j] = delExt;
        cell |= kDelExtend;
      } else {
        curP[j] = delOpen;
      }

      const long insOpen = curH[j - 1] + openExt;
      const long insExt = curQ[j - 1] + scoring.gapExtend;
      if (insExt > insOpen) {
        curQ[j] = insExt;
        cell |= kInsExtend;
      } else {
        curQ[j] = insOpen;
      }

      long best;
      cell |= best_state(curD[j], curP[j], curQ[j], best);
      curH[j] = best;
      row[j] = cell;
    }
    std::swap(prevD, curD);
    std::swap(prevP, curP);
    std::swap(prevH, curH);
  }

  const long score = prevH[n];

  std::string ra, rb;
  ra.reserve(m + n);
  rb.reserve(m + n);
  std::size_t i = m, j = n;
  std::uint8_t state = trace[i * cols + j] & kStateMask;
  while (i > 0 || j > 0) {
    const std::uint8_t cell = trace[i * cols + j];
    switch (state) {
      case kDiag:
        ra.push_back(a[i - 1]);
        rb.push_back(b[j - 1]);
        --i;
        --j;
        state = trace[i * cols + j] & kStateMask;
        break;
      case kDel:
        ra.push_back(a[i - 1]);
        rb.push_back('-');
        --i;
        state = (cell & kDelExtend) ? kDel : trace[i * cols + j] & kStateMask;
        break;
      default:
        ra.push_back('-');
        rb.push_back(b[j - 1]);
        --j;
        state = (cell & kInsExtend) ? kIns : trace[i * cols + j] & kStateMask;
        break;
    }
  }
  std::reverse(ra.begin(), ra.end());
  std::reverse(rb.begin(), rb.end());
  return make_alignment(std::move(ra), std::move(rb), score);
}

AlignmentResult global_align(const DnaSequence& a, const DnaSequence& b, const Scoring& scoring,
                             std::size_t cellCap) {
  return global_align(std::string_view(a.bases()), std::string_view(b.bases()), scoring, cellCap);
}

std::vector<Mutation> call_mutations(const AlignmentResult& alignment) {
  std::vector<Mutation> out;
  std::size_t refPos = 0;  // reference bases consumed so far
  std::size_t col = 0;
  for (const OpRun& run : alignment.ops) {
    const std::string_view ra = std::string_view(alignment.alignedA).substr(col, run.length);
    const std::string_view rb = std::string_view(alignment.alignedB).substr(col, run.length);
    switch (run.kind) {
      case OpKind::Match:
        refPos += run.length;
        break;
      case OpKind::Substitute:
        out.push_back({refPos + 1, MutationKind::Substitution, std::string(ra), std::string(rb), {}});
        refPos += run.length;
        break;
      case OpKind::Delete:
        out.push_back({refPos + 1, MutationKind::Deletion, std::string(ra), {}, {}});
        refPos += run.length;
        break;
      case OpKind::Insert:
        out.push_back({refPos, MutationKind::Insertion, {}, std::string(rb), {}});
        break;
    }
    col += run.length;
  }
  std::stable_sort(out.begin(), out.end(), mutation_order);
  return out;
}

std::string apply_mutations(std::string_view ref, const std::vector<Mutation>& muts) {
  // Edits are placed on a doubled axis: base p spans 2p, an insertion after
  // base x sits at 2x+1 between bases x and x+1.
  struct Edit {
    std::size_t lo, hi;
    const Mutation* mut;
  };
  std::vector<Edit> edits;
  edits.reserve(muts.size());
  for (const Mutation& mu : muts) {
    switch (mu.kind) {
      case MutationKind::Substitution:
        if (mu.refBases.empty() || mu.refBases.size() != mu.altBases.size())
          throw Error(ErrorCode::InvalidArgument, "substitution needs equal non-empty ref/alt");
        break;
      case MutationKind::Insertion:
        if (!mu.refBases.empty() || mu.altBases.empty())
          throw Error(ErrorCode::InvalidArgument, "insertion needs empty ref and non-empty alt");
        break;
      case MutationKind::Deletion:
        if (mu.refBases.empty() || !mu.altBases.empty())
          throw Error(ErrorCode::InvalidArgument, "deletion needs non-empty ref and empty alt");
        break;
    }
    if (mu.kind == MutationKind::Insertion) {
      if (mu.position > ref.size())
        throw Error(ErrorCode::PositionOutOfRange,
                    "insertion after " + std::to_string(mu.position) + " beyond reference end");
      edits.push_back({2 * mu.position + 1, 2 * mu.position + 1, &mu});
    } else {
      const std::size_t len = mu.refBases.size();
      if (mu.position < 1 || mu.position - 1 + len > ref.size())
        throw Error(ErrorCode::PositionOutOfRange,
                    std::string(to_string(mu.kind)) + " at " + std::to_string(mu.position) +
                        " outside reference");
      if (ref.substr(mu.position - 1, len) != mu.refBases)
        throw Error(ErrorCode::InvalidArgument,
                    "reference bases at " + std::to_string(mu.position) + " do not match '" +
                        mu.refBases + "'");
      edits.push_back({2 * mu.position, 2 * (mu.position + len - 1), &mu});
    }
  }
  std::sort(edits.begin(), edits.end(),
            [](const Edit& x, const Edit& y) { return x.lo < y.lo; });
  for (std::size_t k = 1; k < edits.size(); ++k) {
    if (edits[k].lo <= edits[k - 1].hi)
      throw Error(ErrorCode::OverlappingMutations,
                  "mutations at " + std::to_string(edits[k - 1].mut->position) + " and " +
                      std::to_string(edits[k].mut->position) + " overlap");
  }

  std::string out;
  out.reserve(ref.size());
  std::size_t cursor = 0;  // 0-based index of next reference base to copy
  for (const Edit& e : edits) {
    const Mutation& mu = *e.mut;
    if (mu.kind == MutationKind::Insertion) {
      out.append(ref.substr(cursor, mu.position - cursor));
      out += mu.altBases;
      cursor = mu.position;
    } else {
      out.append(ref.substr(cursor, mu.position - 1 - cursor));
      out += mu.altBases;
      cursor = mu.position - 1 + mu.refBases.size();
    }
  }
  out.append(ref.substr(cursor));
  return out;
}

DnaSequence apply_mutations(const DnaSequence& ref, const std::vector<Mutation>& muts,
                            std::string id) {
  return DnaSequence(std::move(id), {}, apply_mutations(std::string_view(ref.bases()), muts));
}

}  // namespace mutascan
