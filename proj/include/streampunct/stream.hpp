#ifndef STREAMPUNCT_STREAM_HPP
#define STREAMPUNCT_STREAM_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "streampunct/core.hpp"
#include "streampunct/tagger.hpp"

namespace streampunct {

/// How a session turns decoder segments into finalized sentences.
///
/// InSegment    tag each segment alone and finalize it immediately
/// LeftContext  tag with the previous segment prepended; finalize the
///              current segment only (previous output is never revised)
/// RightContext hold each segment until the next one arrives and tag it
///              with that right context; committed tags are final
/// Streaming    dynamic decoding window: keep an unfinalized buffer,
///              re-tag buffer + new segment every step, emit the complete
///              sentences and keep the tail
enum class Mode { InSegment, LeftContext, RightContext, Streaming };

std::string_view mode_name(Mode mode);
std::optional<Mode> mode_from_name(std::string_view name);

struct SessionConfig {
  Mode mode = Mode::Streaming;
  /// Forced-flush cap on the streaming buffer, the text analog of a
  /// decoder's hard segmentation timeout.
  std::size_t max_buffer_tokens = 200;
  bool capitalize_output = true;

  SessionConfig() = default;
  SessionConfig(Mode mode, std::size_t max_buffer_tokens = 200, bool capitalize_output = true);
};

struct OutOfOrderSegment : std::runtime_error {
  OutOfOrderSegment(std::size_t expected, std::size_t got)
      : std::runtime_error("expected segment index " + std::to_string(expected) + ", got " +
                           std::to_string(got)) {}
};

/// One step's output. Finalized sentences are never retracted; the
/// hypothesis is the provisional tagging of whatever is still unfinalized
/// and may change on the next step.
struct StepResult {
  std::vector<Sentence> finalized;
  std::vector<TaggedToken> hypothesis;
};

class Session {
 public:
  Session(SessionConfig config, const Tagger& tagger);

  /// Feeds the next decoder segment. Segments must arrive with
  /// consecutive source indices; empty segments are no-ops.
  StepResult push(const Segment& segment);

  /// End of stream: tags and emits everything still held, forcing a
  /// final Period when the tagger did not close the last sentence.
  StepResult flush();

  const SessionConfig& config() const { return config_; }
  /// The streaming mode's unfinalized buffer.
  const std::vector<Token>& buffer() const { return buffer_; }
  /// Every token pushed but not yet emitted, in order, across all modes.
  std::vector<Token> unemitted_tokens() const;
  std::size_t emitted_sentences() const { return emitted_sentences_; }
  std::size_t next_source_index() const { return next_source_index_; }

 private:
  StepResult push_streaming(const Segment& segment);
  StepResult push_in_segment(const Segment& segment);
  StepResult push_left_context(const Segment& segment);
  StepResult push_right_context(const Segment& segment);
  void emit(StepResult& out, std::vector<TaggedToken> sentence);
  std::vector<PunctTag> run_tagger(std::span<const Token> tokens) const;

  SessionConfig config_;
  const Tagger* tagger_;
  std::size_t next_source_index_ = 0;
  std::size_t emitted_sentences_ = 0;

  // Streaming: unfinalized tail plus its last provisional tags (the tags
  // are presentation state only; every step re-tags from scratch).
  std::vector<Token> buffer_;
  std::vector<PunctTag> buffer_tags_;

  // LeftContext: the previously emitted segment, kept as context.
  std::vector<Token> prev_segment_;

  // RightContext: the held segment awaiting right context, its provisional
  // tags, and committed-but-unterminated output waiting for a boundary.
  std::vector<Token> held_;
  std::vector<PunctTag> held_tags_;
  std::vector<TaggedToken> committed_tail_;
};

/// Pushes a full segmentation through a fresh session and flushes.
/// `tokens` must equal the concatenation of the segments.
std::vector<Sentence> run_batch(std::span<const Token> tokens, std::span<const Segment> segments,
                                const SessionConfig& config, const Tagger& tagger);

/// Concatenated tagged tokens of emitted sentences, e.g. for scoring.
std::vector<TaggedToken> flatten(std::span<const Sentence> sentences);

}  // namespace streampunct

#endif
