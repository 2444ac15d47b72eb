#include "streampunct/textgen.hpp"

#include <array>

namespace streampunct {

namespace {

using Words = std::span<const std::string_view>;

constexpr std::string_view kOpeners[] = {"however", "therefore", "meanwhile", "also",
                                         "finally",  "moreover",  "besides",   "still"};
constexpr std::string_view kPronouns[] = {"we", "they", "i", "you", "customers", "engineers",
                                          "reviewers", "people"};
constexpr std::string_view kNouns[] = {"team",    "system",  "model",    "report",  "plan",
                                       "draft",   "service", "update",   "release", "budget",
                                       "schedule", "pipeline", "vendor",  "server",  "committee"};
constexpr std::string_view kVerbs[] = {"need",    "review",  "update",  "consider", "measure",
                                       "improve", "release", "discuss", "test",     "ship",
                                       "approve", "extend",  "audit",   "merge",    "deploy",
                                       "document", "revise", "confirm"};
constexpr std::string_view kObjectDets[] = {"the", "this", "our", "a", "every"};
constexpr std::string_view kObjects[] = {"plan",     "results",  "draft",    "roadmap",
                                         "budget",   "proposal", "design",   "contract",
                                         "findings", "metrics",  "backlog",  "interface",
                                         "dataset",  "estimate", "invoice",  "summary",
                                         "workflow", "rollout",  "charter",  "forecast"};
constexpr std::string_view kAdverbs[] = {"today", "soon", "carefully", "twice", "again",
                                         "offline", "internally", "briefly", "properly", "early"};
constexpr std::string_view kCommaConnectors[] = {"but", "because", "while", "although"};
constexpr std::string_view kPlainConnectors[] = {"and", "so"};
constexpr std::string_view kInterrogatives[] = {"what", "where", "when", "why", "how",
                                                "do",   "does",  "can",  "should", "will"};

std::string_view pick(Rng& rng, Words words) { return words[rng.below(words.size())]; }

void add(LabeledExample& ex, std::string_view word, PunctTag tag = PunctTag::None) {
  ex.tokens.push_back(Token{std::string(word)});
  ex.tags.push_back(tag);
}

// subject [verb object [adverb]]; subjects are either a pronoun or
// "the <noun>".
void add_clause(LabeledExample& ex, Rng& rng) {
  if (rng.chance(0.45)) {
    add(ex, pick(rng, kPronouns));
  } else {
    add(ex, "the");
    add(ex, pick(rng, kNouns));
  }
  add(ex, pick(rng, kVerbs));
  add(ex, pick(rng, kObjectDets));
  add(ex, pick(rng, kObjects));
  if (rng.chance(0.3)) add(ex, pick(rng, kAdverbs));
}

void add_sentence(LabeledExample& ex, Rng& rng, const TextGenOptions& opts) {
  if (rng.chance(opts.question_rate)) {
    add(ex, pick(rng, kInterrogatives));
    add(ex, pick(rng, kPronouns));
    add(ex, pick(rng, kVerbs));
    add(ex, pick(rng, kObjectDets));
    add(ex, pick(rng, kObjects));
    ex.tags.back() = PunctTag::Question;
    return;
  }
  if (rng.chance(opts.opener_rate)) add(ex, pick(rng, kOpeners), PunctTag::Comma);
  add_clause(ex, rng);
  if (rng.chance(opts.two_clause_rate)) {
    if (rng.chance(0.6)) {
      ex.tags.back() = PunctTag::Comma;
      add(ex, pick(rng, kCommaConnectors));
    } else {
      add(ex, pick(rng, kPlainConnectors));
    }
    add_clause(ex, rng);
  }
  ex.tags.back() = PunctTag::Period;
}

void serialize_tokens(LabeledExample& ex, std::size_t& serial) {
  for (auto& token : ex.tokens) {
    token.text = "w" + std::to_string(serial++);
  }
}

}  // namespace

LabeledExample generate_paragraph(Rng& rng, const TextGenOptions& opts, std::size_t& serial) {
  LabeledExample ex;
  const std::size_t span = opts.max_sentences_per_paragraph - opts.min_sentences_per_paragraph + 1;
  const std::size_t count = opts.min_sentences_per_paragraph + rng.below(span);
  for (std::size_t i = 0; i < count; ++i) add_sentence(ex, rng, opts);
  if (opts.serial_tokens) serialize_tokens(ex, serial);
  return ex;
}

std::vector<LabeledExample> generate_corpus(const TextGenOptions& opts, std::size_t paragraphs) {
  Rng rng(opts.seed);
  std::size_t serial = 0;
  std::vector<LabeledExample> corpus;
  corpus.reserve(paragraphs);
  for (std::size_t i = 0; i < paragraphs; ++i) {
    corpus.push_back(generate_paragraph(rng, opts, serial));
  }
  return corpus;
}

LabeledExample generate_stream(const TextGenOptions& opts, std::size_t sentences) {
  Rng rng(opts.seed);
  std::size_t serial = 0;
  LabeledExample ex;
  for (std::size_t i = 0; i < sentences; ++i) {
    LabeledExample one;
    add_sentence(one, rng, opts);
    if (opts.serial_tokens) serialize_tokens(one, serial);
    ex.tokens.insert(ex.tokens.end(), one.tokens.begin(), one.tokens.end());
    ex.tags.insert(ex.tags.end(), one.tags.begin(), one.tags.end());
  }
  return ex;
}

std::string written_form(const LabeledExample& ex) {
  std::vector<TaggedToken> tagged;
  tagged.reserve(ex.tokens.size());
  for (std::size_t i = 0; i < ex.tokens.size(); ++i) tagged.push_back({ex.tokens[i], ex.tags[i]});
  return render(tagged, /*capitalize=*/true);
}

std::vector<Sentence> reference_sentences(const LabeledExample& ex) {
  std::vector<Sentence> sentences;
  std::vector<TaggedToken> current;
  for (std::size_t i = 0; i < ex.tokens.size(); ++i) {
    current.push_back({ex.tokens[i], ex.tags[i]});
    if (is_boundary(ex.tags[i])) {
      sentences.push_back(make_sentence(std::move(current)));
      current.clear();
    }
  }
  if (!current.empty()) {
    throw std::invalid_argument("reference stream does not end at a sentence boundary");
  }
  return sentences;
}

std::vector<Segment> random_partition(std::span<const Token> tokens, Rng& rng,
                                      std::size_t max_piece, double empty_rate) {
  std::vector<Segment> segments;
  std::size_t pos = 0;
  std::size_t index = 0;
  while (pos < tokens.size()) {
    if (empty_rate > 0.0 && rng.chance(empty_rate)) {
      segments.push_back(Segment{{}, index++});
      continue;
    }
    const std::size_t len = std::min(tokens.size() - pos, 1 + rng.below(max_piece));
    Segment seg;
    seg.source_index = index++;
    seg.tokens.assign(tokens.begin() + static_cast<std::ptrdiff_t>(pos),
                      tokens.begin() + static_cast<std::ptrdiff_t>(pos + len));
    segments.push_back(std::move(seg));
    pos += len;
  }
  return segments;
}

}  // namespace streampunct
