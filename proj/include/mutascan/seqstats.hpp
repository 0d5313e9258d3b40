#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "mutascan/seqio.hpp"

namespace mutascan {

struct BaseCounts {
  std::uint64_t a = 0;
  std::uint64_t c = 0;
  std::uint64_t g = 0;
  std::uint64_t t = 0;
  std::uint64_t n = 0;

  std::uint64_t total() const noexcept { return a + c + g + t + n; }
  std::uint64_t unambiguous() const noexcept { return a + c + g + t; }

  bool operator==(const BaseCounts&) const = default;
};

// Counting kernels. The serial loop is the reference; the OpenMP variant
// must agree with it exactly.
BaseCounts count_bases_serial(std::string_view bases) noexcept;
BaseCounts count_bases_parallel(std::string_view bases) noexcept;

// Sequences at least this long use the parallel kernel.
inline constexpr std::size_t kParallelCountThreshold = 1u << 20;

BaseCounts count_bases(std::string_view bases) noexcept;

/// Base composition of one sequence.
///
/// GC% and AT% are taken over unambiguous bases only (N is excluded from
/// numerator and denominator), so `gcPercent + atPercent == 100` for any
/// sequence with at least one non-N base.
struct CompositionStats {
  BaseCounts counts;
  std::uint64_t length = 0;
  double gcPercent = 0.0;
  double atPercent = 0.0;

  bool operator==(const CompositionStats&) const = default;
};

/// Throws AllAmbiguous when the sequence is entirely N.
CompositionStats composition(const DnaSequence& seq);
CompositionStats composition(std::string_view bases);

struct GateParams {
  double target = 38.0;
  double tolerance = 2.0;
};

// Band where gene GC content concentrates, in percent.
inline constexpr double kGeneBandLow = 45.0;
inline constexpr double kGeneBandHigh = 50.0;

struct GateVerdict {
  bool accepted = false;
  double measuredGc = 0.0;
  double target = 38.0;
  double tolerance = 2.0;
  bool geneBandFlag = false;

  bool operator==(const GateVerdict&) const = default;
};

// Inclusive: accepted iff |measured - target| <= tolerance.
GateVerdict gc_gate(double gcPercent, GateParams params = {});
GateVerdict gc_gate(const CompositionStats& stats, GateParams params = {});

inline constexpr std::size_t kDefaultGcWindow = 21;

/// GC fraction in [0,1] over `window` bases centred on 1-based `center`,
/// clipped to the sequence. N is ignored; an all-N window yields 0.5.
double windowed_gc(const DnaSequence& seq, std::size_t center,
                   std::size_t window = kDefaultGcWindow);

}  // namespace mutascan
