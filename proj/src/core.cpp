#include "streampunct/core.hpp"

#include <array>
#include <stdexcept>

#include "chars.hpp"

namespace streampunct {

namespace {

constexpr std::array<std::string_view, kNumTags> kTagSymbols{"", ",", ".", "?"};
constexpr std::array<std::string_view, kNumTags> kTagNames{"O", "COMMA", "PERIOD", "QUESTION"};

}  // namespace

std::string_view tag_symbol(PunctTag tag) { return kTagSymbols[static_cast<int>(tag)]; }

std::string_view tag_name(PunctTag tag) { return kTagNames[static_cast<int>(tag)]; }

std::optional<PunctTag> tag_from_name(std::string_view name) {
  for (int i = 0; i < kNumTags; ++i) {
    if (kTagNames[i] == name) return static_cast<PunctTag>(i);
  }
  return std::nullopt;
}

bool Token::is_valid(std::string_view text) {
  return !text.empty() && normalize_word(text) == text;
}

bool is_well_formed_sentence(std::span<const TaggedToken> tagged) {
  if (tagged.empty()) return false;
  for (std::size_t i = 0; i + 1 < tagged.size(); ++i) {
    if (is_boundary(tagged[i].tag)) return false;
  }
  return is_boundary(tagged.back().tag);
}

Sentence make_sentence(std::vector<TaggedToken> tagged) {
  if (!is_well_formed_sentence(tagged)) {
    throw std::invalid_argument("make_sentence: not a well-formed sentence");
  }
  return Sentence{std::move(tagged)};
}

std::string normalize_word(std::string_view word) {
  std::string out;
  out.reserve(word.size());
  std::string pending;  // connectors waiting for a word character on the right
  std::size_t i = 0;
  while (i < word.size()) {
    auto [cp, len] = chars::decode(word, i);
    i += static_cast<std::size_t>(len);
    switch (chars::classify(cp)) {
      case chars::CharClass::WordAscii:
      case chars::CharClass::WordOther:
        out += pending;
        pending.clear();
        chars::append_utf8(out, chars::fold(cp));
        break;
      case chars::CharClass::Connector:
        if (!out.empty()) chars::append_utf8(pending, chars::fold(cp));
        break;
      case chars::CharClass::Symbol:
      case chars::CharClass::Space:
        pending.clear();
        break;
    }
  }
  return out;  // trailing connectors in `pending` are dropped
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    auto [cp, len] = chars::decode(text, i);
    if (chars::classify(cp) == chars::CharClass::Space) {
      i += static_cast<std::size_t>(len);
      continue;
    }
    std::size_t start = i;
    while (i < text.size()) {
      auto d = chars::decode(text, i);
      if (chars::classify(d.cp) == chars::CharClass::Space) break;
      i += static_cast<std::size_t>(d.len);
    }
    std::string norm = normalize_word(text.substr(start, i - start));
    if (!norm.empty()) tokens.push_back(Token{std::move(norm)});
  }
  return tokens;
}

std::string render(std::span<const TaggedToken> tagged, bool capitalize) {
  std::string out;
  bool at_sentence_start = true;
  for (std::size_t i = 0; i < tagged.size(); ++i) {
    if (i > 0) out += ' ';
    std::size_t word_pos = out.size();
    out += tagged[i].token.text;
    if (capitalize && at_sentence_start && word_pos < out.size()) {
      char& c = out[word_pos];
      if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
    }
    out += tag_symbol(tagged[i].tag);
    at_sentence_start = is_boundary(tagged[i].tag);
  }
  return out;
}

}  // namespace streampunct

namespace streampunct::chars {

Decoded decode(std::string_view s, std::size_t pos) {
  const auto byte = static_cast<unsigned char>(s[pos]);
  if (byte < 0x80) return {byte, 1};
  int len = 0;
  char32_t cp = 0;
  if ((byte & 0xE0) == 0xC0) {
    len = 2;
    cp = byte & 0x1F;
  } else if ((byte & 0xF0) == 0xE0) {
    len = 3;
    cp = byte & 0x0F;
  } else if ((byte & 0xF8) == 0xF0) {
    len = 4;
    cp = byte & 0x07;
  } else {
    return {byte, 1};  // stray continuation byte
  }
  if (pos + static_cast<std::size_t>(len) > s.size()) return {byte, 1};
  for (int k = 1; k < len; ++k) {
    const auto cont = static_cast<unsigned char>(s[pos + static_cast<std::size_t>(k)]);
    if ((cont & 0xC0) != 0x80) return {byte, 1};
    cp = (cp << 6) | (cont & 0x3F);
  }
  return {cp, len};
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

CharClass classify(char32_t cp) {
  if (cp < 0x80) {
    if ((cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9')) {
      return CharClass::WordAscii;
    }
    if (cp == '-' || cp == '\'') return CharClass::Connector;
    if (cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' || cp == '\v') {
      return CharClass::Space;
    }
    return CharClass::Symbol;
  }
  if (cp == 0xA0) return CharClass::Space;
  if (cp == 0x2019) return CharClass::Connector;  // curly apostrophe
  // Common punctuation blocks; everything else non-ASCII passes through as
  // a word character (accented letters, CJK, ...).
  if (cp >= 0x2000 && cp <= 0x206F) return CharClass::Symbol;   // general punctuation
  if (cp >= 0x3000 && cp <= 0x303F) return CharClass::Symbol;   // CJK punctuation
  if (cp == 0xA1 || cp == 0xBF || cp == 0xAB || cp == 0xBB || cp == 0xB7) {
    return CharClass::Symbol;
  }
  if (cp == 0xFF01 || cp == 0xFF0C || cp == 0xFF0E || cp == 0xFF1A || cp == 0xFF1B ||
      cp == 0xFF1F) {
    return CharClass::Symbol;  // fullwidth ! , . : ; ?
  }
  return CharClass::WordOther;
}

char32_t fold(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp - 'A' + 'a';
  if (cp == 0x2019) return '\'';
  return cp;
}

}  // namespace streampunct::chars
