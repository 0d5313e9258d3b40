#include "mutascan/seqstats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "mutascan/error.hpp"

namespace mutascan {

BaseCounts count_bases_serial(std::string_view bases) noexcept {
  BaseCounts k;
  for (char ch : bases) {
    switch (ch) {
      case 'A': ++k.a; break;
      case 'C': ++k.c; break;
      case 'G': ++k.g; break;
      case 'T': ++k.t; break;
      default: ++k.n; break;
    }
  }
  return k;
}

BaseCounts count_bases_parallel(std::string_view bases) noexcept {
  std::uint64_t a = 0, c = 0, g = 0, t = 0, n = 0;
  const char* data = bases.data();
  const auto len = static_cast<std::int64_t>(bases.size());
#pragma omp parallel for reduction(+ : a, c, g, t, n) schedule(static)
  for (std::int64_t i = 0; i < len; ++i) {
    const char ch = data[i];
    a += ch == 'A';
    c += ch == 'C';
    g += ch == 'G';
    t += ch == 'T';
    n += ch != 'A' && ch != 'C' && ch != 'G' && ch != 'T';
  }
  return {a, c, g, t, n};
}

BaseCounts count_bases(std::string_view bases) noexcept {
  return bases.size() >= kParallelCountThreshold ? count_bases_parallel(bases)
                                                 : count_bases_serial(bases);
}

CompositionStats composition(std::string_view bases) {
  CompositionStats s;
  s.counts = count_bases(bases);
  s.length = s.counts.total();
  const std::uint64_t denom = s.counts.unambiguous();
  if (denom == 0)
    throw Error(ErrorCode::AllAmbiguous, "sequence consists solely of N; composition undefined");
  s.gcPercent = 100.0 * static_cast<double>(s.counts.g + s.counts.c) / static_cast<double>(denom);
  s.atPercent = 100.0 * static_cast<double>(s.counts.a + s.counts.t) / static_cast<double>(denom);
  return s;
}

CompositionStats composition(const DnaSequence& seq) { return composition(seq.bases()); }

GateVerdict gc_gate(double gcPercent, GateParams params) {
  GateVerdict v;
  v.measuredGc = gcPercent;
  v.target = params.target;
  v.tolerance = params.tolerance;
  v.accepted = std::fabs(gcPercent - params.target) <= params.tolerance;
  v.geneBandFlag = gcPercent >= kGeneBandLow && gcPercent <= kGeneBandHigh;
  return v;
}

GateVerdict gc_gate(const CompositionStats& stats, GateParams params) {
  return gc_gate(stats.gcPercent, params);
}

double windowed_gc(const DnaSequence& seq, std::size_t center, std::size_t window) {
  if (window == 0 || window % 2 == 0)
    throw Error(ErrorCode::InvalidArgument, "GC window must be a positive odd integer");
  if (center < 1 || center > seq.size())
    throw Error(ErrorCode::PositionOutOfRange,
                "window centre " + std::to_string(center) + " outside [1, " +
                    std::to_string(seq.size()) + "]");
  const std::size_t half = window / 2;
  const std::size_t lo = center > half ? center - half : 1;
  const std::size_t hi = std::min(seq.size(), center + half);
  const BaseCounts k = count_bases_serial(std::string_view(seq.bases()).substr(lo - 1, hi - lo + 1));
  const std::uint64_t denom = k.unambiguous();
  if (denom == 0) return 0.5;
  return static_cast<double>(k.g + k.c) / static_cast<double>(denom);
}

}  // namespace mutascan
