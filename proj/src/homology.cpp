#include "mutascan/homology.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "mutascan/error.hpp"

namespace mutascan {

namespace {

int base_bits(char c) noexcept {
  switch (c) {
    case 'A': return 0;
    case 'C': return 1;
    case 'G': return 2;
    case 'T': return 3;
    default: return -1;
  }
}

std::uint64_t kmer_mask(std::size_t k) noexcept {
  return k >= 32 ? ~std::uint64_t{0} : (std::uint64_t{1} << (2 * k)) - 1;
}

std::string decode_kmer(std::uint64_t code, std::size_t k) {
  static constexpr char kBases[] = {'A', 'C', 'G', 'T'};
  std::string s(k, 'A');
  for (std::size_t i = 0; i < k; ++i) {
    s[k - 1 - i] = kBases[code & 3];
    code >>= 2;
  }
  return s;
}

// Calls fn(code, offset) for every N-free window of length k.
template <typename Fn>
void for_each_kmer(std::string_view seq, std::size_t k, Fn&& fn) {
  const std::uint64_t mask = kmer_mask(k);
  std::uint64_t code = 0;
  std::size_t valid = 0;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const int b = base_bits(seq[i]);
    if (b < 0) {
      valid = 0;
      code = 0;
      continue;
    }
    code = ((code << 2) | static_cast<std::uint64_t>(b)) & mask;
    if (++valid >= k) fn(code, i + 1 - k);
  }
}

constexpr long kNegInf = std::numeric_limits<long>::min() / 4;

struct Seed {
  std::uint32_t queryOffset;
  std::uint32_t subjectOffset;
};

struct Segment {
  long diagonal;
  std::size_t queryBegin;
  std::size_t queryEnd;
  long score;
};

bool intervals_intersect(std::size_t b1, std::size_t e1, std::size_t b2, std::size_t e2) noexcept {
  return b1 < e2 && b2 < e1;
}

// Ungapped X-drop extension of an exact seed in both directions.
Segment extend_ungapped(std::string_view q, std::string_view s, const Seed& seed, std::size_t k,
                        const SearchParams& p) {
  const Scoring sc = p.scoring();
  const long seedScore = static_cast<long>(k) * p.matchScore;

  long running = 0, bestRight = 0;
  std::size_t qEnd = seed.queryOffset + k;
  for (std::size_t i = qEnd, j = seed.subjectOffset + k; i < q.size() && j < s.size(); ++i, ++j) {
    running += sc.pair(q[i], s[j]);
    if (running > bestRight) {
      bestRight = running;
      qEnd = i + 1;
    } else if (bestRight - running > p.xDrop) {
      break;
    }
  }

  running = 0;
  long bestLeft = 0;
  std::size_t qBegin = seed.queryOffset;
  for (std::size_t i = seed.queryOffset, j = seed.subjectOffset; i > 0 && j > 0; --i, --j) {
    running += sc.pair(q[i - 1], s[j - 1]);
    if (running > bestLeft) {
      bestLeft = running;
      qBegin = i - 1;
    } else if (bestLeft - running > p.xDrop) {
      break;
    }
  }

  const long diagonal = static_cast<long>(seed.queryOffset) - static_cast<long>(seed.subjectOffset);
  return {diagonal, qBegin, qEnd, seedScore + bestLeft + bestRight};
}

LocalAlignment ungapped_alignment(std::string_view q, std::string_view s, const Segment& seg) {
  const std::size_t len = seg.queryEnd - seg.queryBegin;
  const auto sBegin = static_cast<std::size_t>(static_cast<long>(seg.queryBegin) - seg.diagonal);
  LocalAlignment la;
  la.alignment = make_alignment(std::string(q.substr(seg.queryBegin, len)),
                                std::string(s.substr(sBegin, len)), seg.score);
  la.queryBegin = seg.queryBegin;
  la.queryEnd = seg.queryEnd;
  la.subjectBegin = sBegin;
  la.subjectEnd = sBegin + len;
  return la;
}

std::optional<HomologyHit> search_subject(std::string_view q, const DnaSequence& subject,
                                          std::vector<Seed>& seeds, std::size_t k,
                                          const SearchParams& p) {
  if (seeds.empty()) return std::nullopt;
  const std::string_view s = subject.bases();
  const auto diagOf = [](const Seed& x) {
    return static_cast<long>(x.queryOffset) - static_cast<long>(x.subjectOffset);
  };
  std::sort(seeds.begin(), seeds.end(), [&](const Seed& x, const Seed& y) {
    const long dx = diagOf(x), dy = diagOf(y);
    return dx != dy ? dx < dy : x.queryOffset < y.queryOffset;
  });

  std::vector<Segment> segments;
  for (std::size_t lo = 0; lo < seeds.size();) {
    const long diag = diagOf(seeds[lo]);
    std::size_t hi = lo;
    while (hi < seeds.size() && diagOf(seeds[hi]) == diag) ++hi;
    if (hi - lo >= p.minSeedHitsPerDiagonal) {
      std::size_t extendedTo = 0;
      for (std::size_t i = lo; i < hi; ++i) {
        if (seeds[i].queryOffset < extendedTo) continue;
        const Segment seg = extend_ungapped(q, s, seeds[i], k, p);
        extendedTo = seg.queryEnd;
        segments.push_back(seg);
      }
    }
    lo = hi;
  }

  const Scoring sc = p.scoring();
  std::vector<LocalAlignment> candidates;
  for (const Segment& seg : segments) {
    if (seg.score >= p.gapTrigger) {
      if (auto gapped = banded_local_align(q, s, seg.diagonal, p.bandRadius, sc))
        candidates.push_back(std::move(*gapped));
    }
    candidates.push_back(ungapped_alignment(q, s, seg));
  }

  std::sort(candidates.begin(), candidates.end(),
            [](const LocalAlignment& x, const LocalAlignment& y) {
              if (x.score() != y.score()) return x.score() > y.score();
              if (x.queryBegin != y.queryBegin) return x.queryBegin < y.queryBegin;
              if (x.subjectBegin != y.subjectBegin) return x.subjectBegin < y.subjectBegin;
              if (x.queryEnd != y.queryEnd) return x.queryEnd < y.queryEnd;
              return x.subjectEnd < y.subjectEnd;
            });

  std::vector<LocalAlignment> kept;
  for (LocalAlignment& c : candidates) {
    const bool clashes = std::any_of(kept.begin(), kept.end(), [&](const LocalAlignment& o) {
      return intervals_intersect(c.queryBegin, c.queryEnd, o.queryBegin, o.queryEnd) &&
             intervals_intersect(c.subjectBegin, c.subjectEnd, o.subjectBegin, o.subjectEnd);
    });
    if (!clashes) kept.push_back(std::move(c));
  }
  if (kept.empty()) return std::nullopt;

  HomologyHit hit;
  hit.subjectId = subject.id();
  hit.description = subject.description();
  hit.maxScore = kept.front().score();
  for (const LocalAlignment& a : kept) hit.totalScore += a.score();

  std::vector<char> covered(q.size(), 0);
  for (const LocalAlignment& a : kept)
    std::fill(covered.begin() + static_cast<long>(a.queryBegin),
              covered.begin() + static_cast<long>(a.queryEnd), 1);
  const auto nCovered = std::count(covered.begin(), covered.end(), 1);
  hit.queryCover = 100.0 * static_cast<double>(nCovered) / static_cast<double>(q.size());
  hit.maxIdent = kept.front().alignment.identityPercent;
  hit.bestAlignment = kept.front();
  hit.alignments = std::move(kept);
  return hit;
}

std::vector<std::vector<Seed>> collect_seeds(std::string_view q, const KmerIndex& index) {
  std::vector<std::vector<Seed>> bySubject(index.subjects().size());
  for_each_kmer(q, index.k(), [&](std::uint64_t code, std::size_t qoff) {
    for (const Posting& p : index.lookup(code))
      bySubject[p.subject].push_back({static_cast<std::uint32_t>(qoff), p.offset});
  });
  return bySubject;
}

std::vector<HomologyHit> finish_hits(std::vector<std::optional<HomologyHit>>& perSubject,
                                     const DnaSequence& query, const KmerIndex& index,
                                     const SearchParams& p) {
  std::vector<HomologyHit> hits;
  for (auto& h : perSubject) {
    if (!h) continue;
    h->eValue = evalue(h->maxScore, query.size(), index.total_length(), p);
    hits.push_back(std::move(*h));
  }
  std::sort(hits.begin(), hits.end(), [](const HomologyHit& x, const HomologyHit& y) {
    return x.maxScore != y.maxScore ? x.maxScore > y.maxScore : x.subjectId < y.subjectId;
  });
  if (hits.size() > p.maxHits) hits.resize(p.maxHits);
  return hits;
}

void check_search_inputs(const DnaSequence& query, const KmerIndex& index,
                         const SearchParams& params) {
  params.validate();
  if (params.k != index.k())
    throw Error(ErrorCode::InvalidArgument,
                "search k=" + std::to_string(params.k) + " does not match index k=" +
                    std::to_string(index.k()));
  if (query.size() < index.k())
    throw Error(ErrorCode::QueryTooShort,
                "query length " + std::to_string(query.size()) + " is shorter than k=" +
                    std::to_string(index.k()));
}

}  // namespace

std::optional<std::uint64_t> encode_kmer(std::string_view kmer) noexcept {
  if (kmer.empty() || kmer.size() > KmerIndex::kMaxK) return std::nullopt;
  std::uint64_t code = 0;
  for (char c : kmer) {
    const int b = base_bits(c);
    if (b < 0) return std::nullopt;
    code = (code << 2) | static_cast<std::uint64_t>(b);
  }
  return code;
}

KmerIndex build_index(const FastaFile& db, std::size_t k) {
  if (db.records.empty()) throw Error(ErrorCode::EmptyDatabase, "homology database is empty");
  if (k < kMinK || k > KmerIndex::kMaxK)
    throw Error(ErrorCode::InvalidArgument,
                "k must lie in [" + std::to_string(kMinK) + ", " +
                    std::to_string(KmerIndex::kMaxK) + "]");
  KmerIndex index;
  index.k_ = k;
  index.subjects_ = db.records;
  for (std::size_t si = 0; si < db.records.size(); ++si) {
    const std::string& bases = db.records[si].bases();
    index.totalLength_ += bases.size();
    for_each_kmer(bases, k, [&](std::uint64_t code, std::size_t off) {
      index.entries_.push_back(
          {code, {static_cast<std::uint32_t>(si), static_cast<std::uint32_t>(off)}});
    });
  }
  // Generated in (subject, offset) order, so a stable sort on the code
  // leaves each posting list ordered.
  std::stable_sort(index.entries_.begin(), index.entries_.end(),
                   [](const KmerIndex::Entry& x, const KmerIndex::Entry& y) { return x.code < y.code; });
  return index;
}

std::vector<Posting> KmerIndex::lookup(std::uint64_t code) const {
  const auto lo = std::lower_bound(entries_.begin(), entries_.end(), code,
                                   [](const Entry& e, std::uint64_t c) { return e.code < c; });
  std::vector<Posting> out;
  for (auto it = lo; it != entries_.end() && it->code == code; ++it) out.push_back(it->posting);
  return out;
}

std::vector<Posting> KmerIndex::lookup(std::string_view kmer) const {
  if (kmer.size() != k_) return {};
  const auto code = encode_kmer(kmer);
  if (!code) return {};
  return lookup(*code);
}

std::vector<std::pair<std::string, Posting>> KmerIndex::all_postings() const {
  std::vector<std::pair<std::string, Posting>> out;
  out.reserve(entries_.size());
  for (const Entry& e : entries_) out.emplace_back(decode_kmer(e.code, k_), e.posting);
  return out;
}

void SearchParams::validate() const {
  if (matchScore <= 0 || mismatchScore >= 0 || gapOpen >= 0 || gapExtend >= 0 || xDrop <= 0)
    throw Error(ErrorCode::InvalidArgument,
                "search requires match > 0, mismatch/gapOpen/gapExtend < 0 and xDrop > 0");
  if (bandRadius < 0) throw Error(ErrorCode::InvalidArgument, "band radius must be >= 0");
  if (minSeedHitsPerDiagonal == 0)
    throw Error(ErrorCode::InvalidArgument, "minSeedHitsPerDiagonal must be >= 1");
}

double evalue(long score, std::size_t queryLength, std::uint64_t dbLength,
              const SearchParams& params) noexcept {
  return params.karlinK * static_cast<double>(queryLength) * static_cast<double>(dbLength) *
         std::exp(-params.karlinLambda * static_cast<double>(score));
}

std::optional<LocalAlignment> banded_local_align(std::string_view q, std::string_view s,
                                                 long diagonal, int radius,
                                                 const Scoring& scoring) {
  const long m = static_cast<long>(q.size());
  const long n = static_cast<long>(s.size());
  const long width = 2L * radius + 1;

  // Band slot t of row i holds column j = i - diagonal - radius + t.
  const auto column = [&](long i, long t) { return i - diagonal - radius + t; };

  // Traceback byte: bits 0-1 source of H (0 start, 1 diag, 2 delete, 3 insert),
  // bit 2 delete extends, bit 3 insert extends.
  constexpr std::uint8_t kSrcMask = 0x3, kDelExt = 0x4, kInsExt = 0x8;
  std::vector<std::uint8_t> trace(static_cast<std::size_t>((m + 1) * width), 0);
  std::vector<long> prevH(width, kNegInf), prevE(width, kNegInf);
  std::vector<long> curH(width), curE(width), curF(width);

  const long openExt = scoring.gapOpen + scoring.gapExtend;
  long best = 0, bestI = -1, bestT = -1;

  for (long i = 1; i <= m; ++i) {
    std::fill(curH.begin(), curH.end(), kNegInf);
    std::fill(curE.begin(), curE.end(), kNegInf);
    std::fill(curF.begin(), curF.end(), kNegInf);
    std::uint8_t* row = &trace[static_cast<std::size_t>(i * width)];
    const char qi = q[static_cast<std::size_t>(i - 1)];
    for (long t = 0; t < width; ++t) {
      const long j = column(i, t);
      if (j < 1 || j > n) continue;
      std::uint8_t cell = 0;

      // Missing predecessors act as a fresh start for the diagonal move.
      const long hDiag = (i > 1 && j > 1 && prevH[t] > kNegInf) ? std::max(prevH[t], 0L) : 0L;
      const long d = hDiag + scoring.pair(qi, s[static_cast<std::size_t>(j - 1)]);

      long e = kNegInf;
      if (i > 1 && t + 1 < width && prevH[t + 1] > kNegInf) {
        const long open = prevH[t + 1] + openExt;
        const long ext = prevE[t + 1] > kNegInf ? prevE[t + 1] + scoring.gapExtend : kNegInf;
        if (ext > open) {
          e = ext;
          cell |= kDelExt;
        } else {
          e = open;
        }
      }

      long f = kNegInf;
      if (j > 1 && t > 0 && curH[t - 1] > kNegInf) {
        const long open = curH[t - 1] + openExt;
        const long ext = curF[t - 1] > kNegInf ? curF[t - 1] + scoring.gapExtend : kNegInf;
        if (ext > open) {
          f = ext;
          cell |= kInsExt;
        } else {
          f = open;
        }
      }

      long h = 0;
      std::uint8_t src = 0;
      if (d > h) {
        h = d;
        src = 1;
      }
      if (e > h) {
        h = e;
        src = 2;
      }
      if (f > h) {
        h = f;
        src = 3;
      }
      curH[t] = h;
      curE[t] = e;
      curF[t] = f;
      row[t] = static_cast<std::uint8_t>(cell | src);
      if (h > best) {
        best = h;
        bestI = i;
        bestT = t;
      }
    }
    std::swap(prevH, curH);
    std::swap(prevE, curE);
  }

  if (best <= 0) return std::nullopt;

  std::string ra, rb;
  long i = bestI, t = bestT;
  std::uint8_t state = trace[static_cast<std::size_t>(i * width + t)] & kSrcMask;
  const long endI = bestI, endJ = column(bestI, bestT);
  while (state != 0) {
    const long j = column(i, t);
    const std::uint8_t cell = trace[static_cast<std::size_t>(i * width + t)];
    if (state == 1) {
      ra.push_back(q[static_cast<std::size_t>(i - 1)]);
      rb.push_back(s[static_cast<std::size_t>(j - 1)]);
      --i;  // same slot t on the previous row
      if (i < 1 || j - 1 < 1) break;
      state = trace[static_cast<std::size_t>(i * width + t)] & kSrcMask;
    } else if (state == 2) {
      ra.push_back(q[static_cast<std::size_t>(i - 1)]);
      rb.push_back('-');
      --i;
      ++t;
      if (!(cell & kDelExt)) state = trace[static_cast<std::size_t>(i * width + t)] & kSrcMask;
    } else {
      ra.push_back('-');
      rb.push_back(s[static_cast<std::size_t>(j - 1)]);
      --t;
      if (!(cell & kInsExt)) state = trace[static_cast<std::size_t>(i * width + t)] & kSrcMask;
    }
  }
  std::reverse(ra.begin(), ra.end());
  std::reverse(rb.begin(), rb.end());

  LocalAlignment la;
  la.queryEnd = static_cast<std::size_t>(endI);
  la.subjectEnd = static_cast<std::size_t>(endJ);
  la.queryBegin = static_cast<std::size_t>(i);
  la.subjectBegin = static_cast<std::size_t>(column(i, t));
  la.alignment = make_alignment(std::move(ra), std::move(rb), best);
  return la;
}

std::vector<HomologyHit> search_serial(const DnaSequence& query, const KmerIndex& index,
                                       const SearchParams& params) {
  check_search_inputs(query, index, params);
  auto seeds = collect_seeds(query.bases(), index);
  std::vector<std::optional<HomologyHit>> perSubject(seeds.size());
  for (std::size_t si = 0; si < seeds.size(); ++si)
    perSubject[si] = search_subject(query.bases(), index.subjects()[si], seeds[si], index.k(), params);
  return finish_hits(perSubject, query, index, params);
}

std::vector<HomologyHit> search(const DnaSequence& query, const KmerIndex& index,
                                const SearchParams& params) {
  check_search_inputs(query, index, params);
  auto seeds = collect_seeds(query.bases(), index);
  std::vector<std::optional<HomologyHit>> perSubject(seeds.size());
  const auto nSubjects = static_cast<long>(seeds.size());
#pragma omp parallel for schedule(dynamic)
  for (long si = 0; si < nSubjects; ++si) {
    const auto u = static_cast<std::size_t>(si);
    perSubject[u] = search_subject(query.bases(), index.subjects()[u], seeds[u], index.k(), params);
  }
  return finish_hits(perSubject, query, index, params);
}

std::string format_evalue(double e) {
  char buf[64];
  if (e < 1.0e-180)
    return "0.0";
  else if (e < 1.0e-99)
    std::snprintf(buf, sizeof buf, "%2.0le", e);
  else if (e < 0.0009)
    std::snprintf(buf, sizeof buf, "%3.0le", e);
  else if (e < 0.1)
    std::snprintf(buf, sizeof buf, "%4.3lf", e);
  else if (e < 1.0)
    std::snprintf(buf, sizeof buf, "%3.2lf", e);
  else if (e < 10.0)
    std::snprintf(buf, sizeof buf, "%2.1lf", e);
  else
    std::snprintf(buf, sizeof buf, "%.0lf", e);
  return buf;
}

namespace {
// Percent columns are truncated so that "100%" always means complete.
std::string whole_percent(double v) {
  return std::to_string(static_cast<long>(std::floor(v + 1e-9))) + "%";
}
}  // namespace

std::string format_hit_row(const HomologyHit& hit) {
  std::string desc = hit.subjectId;
  if (!hit.description.empty()) desc += " " + hit.description;
  return desc + " | " + std::to_string(hit.maxScore) + " | " + std::to_string(hit.totalScore) +
         " | " + whole_percent(hit.queryCover) + " | " + format_evalue(hit.eValue) + " | " +
         whole_percent(hit.maxIdent);
}

std::string format_hit_table(const std::vector<HomologyHit>& hits) {
  std::string out = "Description | Max score | Total score | Query cover | E value | Max ident\n";
  if (hits.empty()) return out + "no hits found\n";
  for (const HomologyHit& h : hits) out += format_hit_row(h) + "\n";
  return out;
}

}  // namespace mutascan
