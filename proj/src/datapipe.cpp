#include "streampunct/datapipe.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "chars.hpp"
#include "streampunct/prng.hpp"

namespace streampunct {

std::optional<PunctTag> map_symbol(std::string_view symbol) {
  if (symbol == "," || symbol == ";" || symbol == ":") return PunctTag::Comma;
  if (symbol == "." || symbol == "!" || symbol == "..." || symbol == "…") {
    return PunctTag::Period;
  }
  if (symbol == "?") return PunctTag::Question;
  return std::nullopt;
}

namespace {

// Byte offset where the word's trailing symbol run begins (word.size() when
// there is none). Connectors count as part of the run so "word-." and
// "word.'" both strip cleanly; a connector has to sit between word
// characters to survive anyway.
std::size_t trailing_run_start(std::string_view word) {
  std::size_t run_start = word.size();
  std::size_t i = 0;
  while (i < word.size()) {
    auto [cp, len] = chars::decode(word, i);
    auto cls = chars::classify(cp);
    if (cls == chars::CharClass::WordAscii || cls == chars::CharClass::WordOther) {
      run_start = word.size();
    } else if (run_start == word.size()) {
      run_start = i;
    }
    i += static_cast<std::size_t>(len);
  }
  return run_start;
}

// First symbol in the run that maps to a tag wins.
PunctTag tag_from_run(std::string_view run) {
  std::size_t i = 0;
  while (i < run.size()) {
    auto [cp, len] = chars::decode(run, i);
    std::string one;
    chars::append_utf8(one, cp);
    if (auto tag = map_symbol(one)) return *tag;
    i += static_cast<std::size_t>(len);
  }
  return PunctTag::None;
}

}  // namespace

LabeledExample strip_and_tag(std::string_view paragraph) {
  LabeledExample ex;
  std::size_t i = 0;
  while (i < paragraph.size()) {
    auto [cp, len] = chars::decode(paragraph, i);
    if (chars::classify(cp) == chars::CharClass::Space) {
      i += static_cast<std::size_t>(len);
      continue;
    }
    std::size_t start = i;
    while (i < paragraph.size()) {
      auto d = chars::decode(paragraph, i);
      if (chars::classify(d.cp) == chars::CharClass::Space) break;
      i += static_cast<std::size_t>(d.len);
    }
    std::string_view word = paragraph.substr(start, i - start);
    std::size_t run_start = trailing_run_start(word);
    std::string stem = normalize_word(word.substr(0, run_start));
    if (stem.empty()) continue;  // symbol-only word, tag dropped with it
    ex.tokens.push_back(Token{std::move(stem)});
    ex.tags.push_back(tag_from_run(word.substr(run_start)));
  }
  if (ex.tokens.empty()) throw EmptyAfterCleaning{};
  return ex;
}

LabeledExample trim_to_limit(const LabeledExample& ex, std::size_t max_tokens) {
  if (ex.tokens.size() <= max_tokens) return ex;
  std::size_t end = 0;  // one past the last boundary within the limit
  for (std::size_t i = 0; i < max_tokens; ++i) {
    if (is_boundary(ex.tags[i])) end = i + 1;
  }
  LabeledExample out;
  out.tokens.assign(ex.tokens.begin(), ex.tokens.begin() + static_cast<std::ptrdiff_t>(end));
  out.tags.assign(ex.tags.begin(), ex.tags.begin() + static_cast<std::ptrdiff_t>(end));
  return out;
}

CorpusSplit split_corpus(const std::vector<LabeledExample>& examples, double valid_fraction,
                         std::size_t valid_cap, std::uint64_t seed) {
  const std::size_t n = examples.size();
  const auto want = static_cast<std::size_t>(valid_fraction * static_cast<double>(n));
  const std::size_t valid_size = std::min(want, valid_cap);

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);

  std::vector<bool> in_valid(n, false);
  for (std::size_t i = 0; i < valid_size; ++i) in_valid[order[i]] = true;

  CorpusSplit split;
  split.seed = seed;
  split.train.reserve(n - valid_size);
  split.valid.reserve(valid_size);
  for (std::size_t i = 0; i < n; ++i) {
    (in_valid[i] ? split.valid : split.train).push_back(examples[i]);
  }
  return split;
}

std::string to_jsonl_line(const LabeledExample& ex) {
  nlohmann::json rec;
  auto& tokens = rec["tokens"] = nlohmann::json::array();
  auto& tags = rec["tags"] = nlohmann::json::array();
  for (const auto& t : ex.tokens) tokens.push_back(t.text);
  for (auto tag : ex.tags) tags.push_back(std::string(tag_name(tag)));
  return rec.dump();
}

LabeledExample from_jsonl_line(std::string_view line) {
  nlohmann::json rec = nlohmann::json::parse(line);
  if (!rec.contains("tokens") || !rec.contains("tags")) {
    throw std::runtime_error("labeled record needs \"tokens\" and \"tags\"");
  }
  LabeledExample ex;
  for (const auto& t : rec.at("tokens")) ex.tokens.push_back(Token{t.get<std::string>()});
  for (const auto& t : rec.at("tags")) {
    auto name = t.get<std::string>();
    auto tag = tag_from_name(name);
    if (!tag) throw std::runtime_error("unknown tag name: " + name);
    ex.tags.push_back(*tag);
  }
  if (ex.tokens.size() != ex.tags.size()) {
    throw std::runtime_error("labeled record has mismatched lengths");
  }
  return ex;
}

void write_jsonl(std::ostream& out, const std::vector<LabeledExample>& examples) {
  for (const auto& ex : examples) out << to_jsonl_line(ex) << '\n';
}

std::vector<LabeledExample> read_jsonl(std::istream& in) {
  std::vector<LabeledExample> examples;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    examples.push_back(from_jsonl_line(line));
  }
  return examples;
}

}  // namespace streampunct
