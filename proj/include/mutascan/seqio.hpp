#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace mutascan {

/// A validated nucleotide record over {A,C,G,T,N}.
///
/// Construction uppercases the bases and rejects anything outside the
/// alphabet, so every live DnaSequence satisfies the record invariants.
/// Positions reported to users are 1-based; `bases()` is a plain 0-based
/// string.
class DnaSequence {
 public:
  DnaSequence(std::string id, std::string description, std::string bases);

  const std::string& id() const noexcept { return id_; }
  const std::string& description() const noexcept { return description_; }
  const std::string& bases() const noexcept { return bases_; }
  std::size_t size() const noexcept { return bases_.size(); }

  // 1-based access.
  char at(std::size_t position) const;

  bool operator==(const DnaSequence&) const = default;

 private:
  std::string id_;
  std::string description_;
  std::string bases_;
};

struct FastaFile {
  std::vector<DnaSequence> records;

  bool operator==(const FastaFile&) const = default;
};

bool is_nucleotide(char c) noexcept;

FastaFile parse_fasta(std::string_view text);
FastaFile read_fasta(const std::filesystem::path& path);

inline constexpr std::size_t kDefaultFastaWidth = 60;

std::string write_fasta(const FastaFile& file, std::size_t width = kDefaultFastaWidth);
void write_fasta(const FastaFile& file, const std::filesystem::path& path,
                 std::size_t width = kDefaultFastaWidth);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace mutascan
