#include "mutascan/seqio.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>
#include <unordered_set>

#include "mutascan/error.hpp"

namespace mutascan {

namespace {

bool is_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
}

std::string_view rtrim(std::string_view s) noexcept {
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// Uppercases and validates `line`, appending to `out`. `record` and the
// current length of `out` locate the first bad symbol.
void append_bases(std::string& out, std::string_view line, const std::string& record) {
  out.reserve(out.size() + line.size());
  for (char raw : line) {
    const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(raw)));
    if (!is_nucleotide(c)) {
      throw Error(ErrorCode::InvalidSymbol,
                  "invalid symbol '" + std::string(1, raw) + "' in record '" + record +
                      "' at position " + std::to_string(out.size() + 1));
    }
    out.push_back(c);
  }
}

}  // namespace

bool is_nucleotide(char c) noexcept {
  return c == 'A' || c == 'C' || c == 'G' || c == 'T' || c == 'N';
}

DnaSequence::DnaSequence(std::string id, std::string description, std::string bases)
    : id_(std::move(id)), description_(std::move(description)) {
  if (id_.empty()) throw Error(ErrorCode::InvalidHeader, "record id is empty");
  if (std::any_of(id_.begin(), id_.end(), is_space))
    throw Error(ErrorCode::InvalidHeader, "record id '" + id_ + "' contains whitespace");
  if (description_.find_first_of("\r\n") != std::string::npos)
    throw Error(ErrorCode::InvalidHeader, "description of '" + id_ + "' contains a line break");
  const auto lead = std::find_if_not(description_.begin(), description_.end(), is_space);
  description_.erase(description_.begin(), lead);
  if (bases.empty()) throw Error(ErrorCode::EmptySequence, "record '" + id_ + "' has no bases");
  append_bases(bases_, bases, id_);
}

char DnaSequence::at(std::size_t position) const {
  if (position < 1 || position > bases_.size())
    throw Error(ErrorCode::PositionOutOfRange,
                "position " + std::to_string(position) + " outside [1, " +
                    std::to_string(bases_.size()) + "] of '" + id_ + "'");
  return bases_[position - 1];
}

FastaFile parse_fasta(std::string_view text) {
  struct Pending {
    std::string id;
    std::string description;
    std::string bases;
  };

  FastaFile file;
  std::unordered_set<std::string> seen;
  std::optional<Pending> current;

  const auto flush = [&] {
    if (!current) return;
    if (current->bases.empty())
      throw Error(ErrorCode::SequencelessHeader,
                  "header '" + current->id + "' has no sequence lines");
    if (!seen.insert(current->id).second)
      throw Error(ErrorCode::DuplicateId, "duplicate record id '" + current->id + "'");
    file.records.emplace_back(std::move(current->id), std::move(current->description),
                              std::move(current->bases));
    current.reset();
  };

  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (!line.empty() && line.front() == '>') {
      flush();
      std::string_view header = line.substr(1);
      const auto id_end = std::find_if(header.begin(), header.end(), is_space);
      Pending next;
      next.id.assign(header.begin(), id_end);
      if (next.id.empty()) throw Error(ErrorCode::InvalidHeader, "header without record id");
      const auto desc_begin = std::find_if_not(id_end, header.end(), is_space);
      next.description.assign(desc_begin, header.end());
      current = std::move(next);
      continue;
    }

    line = rtrim(line);
    if (line.empty()) continue;
    if (!current)
      throw Error(ErrorCode::InvalidHeader, "sequence data before the first header");
    append_bases(current->bases, line, current->id);
  }
  flush();

  if (file.records.empty()) throw Error(ErrorCode::EmptyInput, "no FASTA header found");
  return file;
}

std::string write_fasta(const FastaFile& file, std::size_t width) {
  if (width == 0) throw Error(ErrorCode::InvalidArgument, "FASTA line width must be >= 1");
  std::string out;
  for (const DnaSequence& rec : file.records) {
    out += '>';
    out += rec.id();
    if (!rec.description().empty()) {
      out += ' ';
      out += rec.description();
    }
    out += '\n';
    const std::string& b = rec.bases();
    for (std::size_t i = 0; i < b.size(); i += width) {
      out.append(b, i, width);
      out += '\n';
    }
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write '" + path.string() + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::IoFailure, "write failed for '" + path.string() + "'");
}

FastaFile read_fasta(const std::filesystem::path& path) { return parse_fasta(read_text_file(path)); }

void write_fasta(const FastaFile& file, const std::filesystem::path& path, std::size_t width) {
  write_text_file(path, write_fasta(file, width));
}

}  // namespace mutascan
