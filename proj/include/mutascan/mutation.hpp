#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace mutascan {

enum class MutationKind { Substitution, Insertion, Deletion };

enum class EffectKind { Silent, Missense, Nonsense, Frameshift, NonCoding };

std::string_view to_string(MutationKind kind) noexcept;
std::string_view to_string(EffectKind kind) noexcept;
MutationKind parse_mutation_kind(std::string_view text);
EffectKind parse_effect_kind(std::string_view text);

struct ProteinEffect {
  EffectKind kind = EffectKind::NonCoding;
  // Missense: both set (unset for in-frame indels). Nonsense: refAA only.
  std::optional<char> refAA;
  std::optional<char> altAA;

  bool operator==(const ProteinEffect&) const = default;
};

/// One called variant relative to the reference.
///
/// `position` is 1-based on the reference. For an Insertion it names the
/// reference base immediately left of the inserted bases, so 0 means
/// "before base 1".
struct Mutation {
  std::size_t position = 0;
  MutationKind kind = MutationKind::Substitution;
  std::string refBases;
  std::string altBases;
  std::optional<ProteinEffect> effect;

  bool operator==(const Mutation&) const = default;

  std::size_t indel_length() const noexcept {
    return kind == MutationKind::Insertion ? altBases.size() : refBases.size();
  }
};

// Position ascending; at equal positions Insertion < Substitution < Deletion.
bool mutation_order(const Mutation& lhs, const Mutation& rhs) noexcept;

}  // namespace mutascan
