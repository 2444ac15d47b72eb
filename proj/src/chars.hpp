#ifndef STREAMPUNCT_SRC_CHARS_HPP
#define STREAMPUNCT_SRC_CHARS_HPP

#include <cstdint>
#include <string>
#include <string_view>

// Internal codepoint helpers shared by the tokenizer and the data pipeline.

namespace streampunct::chars {

struct Decoded {
  char32_t cp;
  int len;  // bytes consumed, >= 1
};

// Decodes the UTF-8 sequence starting at pos. Malformed sequences are
// consumed one byte at a time and returned as-is.
Decoded decode(std::string_view s, std::size_t pos);

void append_utf8(std::string& out, char32_t cp);

enum class CharClass {
  WordAscii,  // a-z, 0-9 (A-Z after lowering)
  WordOther,  // non-ASCII letters and anything unclassified
  Connector,  // hyphen or apostrophe, kept only between word characters
  Symbol,     // punctuation and symbols, stripped
  Space,
};

CharClass classify(char32_t cp);

// Lowercased form of a word character ('A' -> 'a'); identity otherwise.
char32_t fold(char32_t cp);

}  // namespace streampunct::chars

#endif
