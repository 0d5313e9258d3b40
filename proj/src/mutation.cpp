#include "mutascan/mutation.hpp"

#include "mutascan/error.hpp"

namespace mutascan {

std::string_view to_string(MutationKind kind) noexcept {
  switch (kind) {
    case MutationKind::Substitution: return "Substitution";
    case MutationKind::Insertion: return "Insertion";
    case MutationKind::Deletion: return "Deletion";
  }
  return "?";
}

std::string_view to_string(EffectKind kind) noexcept {
  switch (kind) {
    case EffectKind::Silent: return "Silent";
    case EffectKind::Missense: return "Missense";
    case EffectKind::Nonsense: return "Nonsense";
    case EffectKind::Frameshift: return "Frameshift";
    case EffectKind::NonCoding: return "NonCoding";
  }
  return "?";
}

MutationKind parse_mutation_kind(std::string_view text) {
  if (text == "Substitution") return MutationKind::Substitution;
  if (text == "Insertion") return MutationKind::Insertion;
  if (text == "Deletion") return MutationKind::Deletion;
  throw Error(ErrorCode::InvalidArgument, "unknown mutation kind '" + std::string(text) + "'");
}

EffectKind parse_effect_kind(std::string_view text) {
  if (text == "Silent") return EffectKind::Silent;
  if (text == "Missense") return EffectKind::Missense;
  if (text == "Nonsense") return EffectKind::Nonsense;
  if (text == "Frameshift") return EffectKind::Frameshift;
  if (text == "NonCoding") return EffectKind::NonCoding;
  throw Error(ErrorCode::InvalidArgument, "unknown effect kind '" + std::string(text) + "'");
}

namespace {
int kind_rank(MutationKind k) noexcept {
  switch (k) {
    case MutationKind::Insertion: return 0;
    case MutationKind::Substitution: return 1;
    case MutationKind::Deletion: return 2;
  }
  return 3;
}
}  // namespace

bool mutation_order(const Mutation& lhs, const Mutation& rhs) noexcept {
  if (lhs.position != rhs.position) return lhs.position < rhs.position;
  return kind_rank(lhs.kind) < kind_rank(rhs.kind);
}

}  // namespace mutascan
