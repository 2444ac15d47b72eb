#ifndef STREAMPUNCT_TEXTGEN_HPP
#define STREAMPUNCT_TEXTGEN_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "streampunct/core.hpp"
#include "streampunct/datapipe.hpp"
#include "streampunct/prng.hpp"

namespace streampunct {

/// Deterministic synthetic English generator used for experiments, demos
/// and tests. Sentences follow a small clause grammar with consistent
/// punctuation cues (openers that take a comma, connectors preceded by a
/// comma, interrogative starts), so window taggers have real signal to
/// learn. With serial_tokens set, every token is a unique serial word and
/// only the tag pattern is kept; positional lookups are then unambiguous.
struct TextGenOptions {
  std::uint64_t seed = 1;
  std::size_t min_sentences_per_paragraph = 2;
  std::size_t max_sentences_per_paragraph = 6;
  double question_rate = 0.12;
  double opener_rate = 0.22;
  double two_clause_rate = 0.45;
  bool serial_tokens = false;
};

/// One paragraph as a labeled example (several sentences).
LabeledExample generate_paragraph(Rng& rng, const TextGenOptions& opts, std::size_t& serial);

/// A corpus of paragraph rows.
std::vector<LabeledExample> generate_corpus(const TextGenOptions& opts, std::size_t paragraphs);

/// One continuous stream with exactly `sentences` sentences.
LabeledExample generate_stream(const TextGenOptions& opts, std::size_t sentences);

/// Written-form rendering of a labeled example (capitalized, punctuated).
std::string written_form(const LabeledExample& ex);

/// Splits the reference sentence list out of a labeled stream.
std::vector<Sentence> reference_sentences(const LabeledExample& ex);

/// Random partition of a token stream into consecutive segments, with the
/// occasional empty segment thrown in. Used by invariance tests.
std::vector<Segment> random_partition(std::span<const Token> tokens, Rng& rng,
                                      std::size_t max_piece = 12, double empty_rate = 0.05);

}  // namespace streampunct

#endif
