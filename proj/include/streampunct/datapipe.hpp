#ifndef STREAMPUNCT_DATAPIPE_HPP
#define STREAMPUNCT_DATAPIPE_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "streampunct/core.hpp"

namespace streampunct {

/// Thrown by strip_and_tag when a paragraph holds no alphanumeric content.
struct EmptyAfterCleaning : std::runtime_error {
  EmptyAfterCleaning() : std::runtime_error("paragraph empty after cleaning") {}
};

/// Parallel (spoken-form token, tag) sequences; lengths always match.
struct LabeledExample {
  std::vector<Token> tokens;
  std::vector<PunctTag> tags;

  bool operator==(const LabeledExample&) const = default;
};

struct CorpusSplit {
  std::vector<LabeledExample> train;
  std::vector<LabeledExample> valid;
  std::uint64_t seed = 0;
};

/// Maps one punctuation symbol to a tag. Returns nullopt for symbols that
/// are removed without leaving a tag. The fixed table:
///   ","           -> Comma        "."  "..."  "…" -> Period
///   ";"  ":"      -> Comma        "!"             -> Period
///   "?"           -> Question     anything else   -> dropped
std::optional<PunctTag> map_symbol(std::string_view symbol);

/// Converts one punctuated written-form paragraph into a labeled example:
/// lowercases, strips symbols, and turns each word's trailing punctuation
/// into its tag. Standalone symbol runs with no word attached are dropped.
LabeledExample strip_and_tag(std::string_view paragraph);

/// Truncates to the last sentence boundary within the first max_tokens
/// positions. Unchanged when already within the limit; empty when no
/// boundary falls inside it.
LabeledExample trim_to_limit(const LabeledExample& ex, std::size_t max_tokens);

/// Deterministic held-out split: validation gets
/// min(floor(valid_fraction * N), valid_cap) examples sampled by seed,
/// everything else trains. Both sides keep corpus order.
CorpusSplit split_corpus(const std::vector<LabeledExample>& examples, double valid_fraction,
                         std::size_t valid_cap, std::uint64_t seed);

/// Line-delimited records {"tokens": [...], "tags": [...]}, the on-disk
/// contract between the pipeline stages.
std::string to_jsonl_line(const LabeledExample& ex);
LabeledExample from_jsonl_line(std::string_view line);

void write_jsonl(std::ostream& out, const std::vector<LabeledExample>& examples);
std::vector<LabeledExample> read_jsonl(std::istream& in);

}  // namespace streampunct

#endif
