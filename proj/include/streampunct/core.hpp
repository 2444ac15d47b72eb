#ifndef STREAMPUNCT_CORE_HPP
#define STREAMPUNCT_CORE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace streampunct {

/// Punctuation tag attached to a word. None corresponds to the "O" label
/// in serialized data files. The declaration order is the tie-break order
/// used by taggers (lower value wins on equal score).
enum class PunctTag : std::uint8_t { None = 0, Comma, Period, Question };

inline constexpr int kNumTags = 4;

constexpr bool is_boundary(PunctTag tag) {
  return tag == PunctTag::Period || tag == PunctTag::Question;
}

/// Symbol appended when rendering: "" / "," / "." / "?".
std::string_view tag_symbol(PunctTag tag);

/// Serialized name: "O" / "COMMA" / "PERIOD" / "QUESTION".
std::string_view tag_name(PunctTag tag);
std::optional<PunctTag> tag_from_name(std::string_view name);

/// One spoken-form word unit: non-empty, lowercase, no whitespace, and no
/// characters outside alphanumerics plus mid-word hyphen or apostrophe.
/// tokenize() only produces valid tokens; code that builds tokens by hand
/// can check with is_valid().
struct Token {
  std::string text;

  static bool is_valid(std::string_view text);
  bool operator==(const Token&) const = default;
};

struct TaggedToken {
  Token token;
  PunctTag tag = PunctTag::None;

  bool operator==(const TaggedToken&) const = default;
};

/// A decoder-style chunk of tokens. source_index is the position of the
/// segment in its session's stream and must arrive in order.
struct Segment {
  std::vector<Token> tokens;
  std::size_t source_index = 0;
};

/// A complete sentence: non-empty, the last tag is Period or Question and
/// no earlier tag is. Build through make_sentence() to keep that true.
struct Sentence {
  std::vector<TaggedToken> tagged;

  bool operator==(const Sentence&) const = default;
};

bool is_well_formed_sentence(std::span<const TaggedToken> tagged);
Sentence make_sentence(std::vector<TaggedToken> tagged);

/// Whitespace-split and normalize arbitrary UTF-8 into spoken-form tokens.
/// ASCII letters are lowercased, punctuation and symbols are stripped,
/// hyphens and apostrophes survive only between word characters. Words
/// that clean to nothing are dropped.
std::vector<Token> tokenize(std::string_view text);

/// Normalize one whitespace-free word with the tokenize() rules. Empty
/// result means the word was all symbols.
std::string normalize_word(std::string_view word);

/// Join tokens with single spaces and append each tag's symbol. With
/// capitalize set, the first word and every word after a Period/Question
/// get an uppercased first letter.
std::string render(std::span<const TaggedToken> tagged, bool capitalize);

}  // namespace streampunct

#endif
