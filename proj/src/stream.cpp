#include "streampunct/stream.hpp"

#include <algorithm>
#include <cassert>

namespace streampunct {

namespace {

constexpr std::string_view kModeNames[] = {"in_segment", "left_context", "right_context",
                                           "streaming"};

std::vector<TaggedToken> zip(std::span<const Token> tokens, std::span<const PunctTag> tags) {
  assert(tokens.size() == tags.size());
  std::vector<TaggedToken> out;
  out.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) out.push_back({tokens[i], tags[i]});
  return out;
}

}  // namespace

std::string_view mode_name(Mode mode) { return kModeNames[static_cast<int>(mode)]; }

std::optional<Mode> mode_from_name(std::string_view name) {
  for (int i = 0; i < 4; ++i) {
    if (kModeNames[i] == name) return static_cast<Mode>(i);
  }
  return std::nullopt;
}

SessionConfig::SessionConfig(Mode mode, std::size_t max_buffer_tokens, bool capitalize_output)
    : mode(mode), max_buffer_tokens(max_buffer_tokens), capitalize_output(capitalize_output) {
  if (max_buffer_tokens < 1) {
    throw std::invalid_argument("max_buffer_tokens must be >= 1");
  }
}

Session::Session(SessionConfig config, const Tagger& tagger)
    : config_(config), tagger_(&tagger) {
  if (config_.max_buffer_tokens < 1) {
    throw std::invalid_argument("max_buffer_tokens must be >= 1");
  }
}

std::vector<PunctTag> Session::run_tagger(std::span<const Token> tokens) const {
  auto tags = tagger_->predict(tokens);
  if (tags.size() != tokens.size()) {
    throw std::logic_error("tagger broke its contract: " + std::to_string(tags.size()) +
                           " tags for " + std::to_string(tokens.size()) + " tokens");
  }
  return tags;
}

void Session::emit(StepResult& out, std::vector<TaggedToken> sentence) {
  out.finalized.push_back(make_sentence(std::move(sentence)));
  ++emitted_sentences_;
}

StepResult Session::push(const Segment& segment) {
  if (segment.source_index != next_source_index_) {
    throw OutOfOrderSegment(next_source_index_, segment.source_index);
  }
  ++next_source_index_;

  if (segment.tokens.empty()) {
    StepResult out;
    switch (config_.mode) {
      case Mode::Streaming:
        out.hypothesis = zip(buffer_, buffer_tags_);
        break;
      case Mode::RightContext:
        out.hypothesis = zip(held_, held_tags_);
        break;
      default:
        break;
    }
    return out;
  }

  switch (config_.mode) {
    case Mode::Streaming:
      return push_streaming(segment);
    case Mode::InSegment:
      return push_in_segment(segment);
    case Mode::LeftContext:
      return push_left_context(segment);
    case Mode::RightContext:
      return push_right_context(segment);
  }
  return {};
}

StepResult Session::push_streaming(const Segment& segment) {
  std::vector<Token> window = buffer_;
  window.insert(window.end(), segment.tokens.begin(), segment.tokens.end());
  std::vector<PunctTag> tags = run_tagger(window);

  StepResult out;
  std::size_t start = 0;  // first position not yet finalized
  std::size_t last_boundary = window.size();
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (is_boundary(tags[i])) last_boundary = i;
  }
  if (last_boundary != window.size()) {
    std::size_t from = 0;
    for (std::size_t i = 0; i <= last_boundary; ++i) {
      if (!is_boundary(tags[i])) continue;
      std::vector<TaggedToken> sentence;
      sentence.reserve(i - from + 1);
      for (std::size_t j = from; j <= i; ++j) sentence.push_back({window[j], tags[j]});
      emit(out, std::move(sentence));
      from = i + 1;
    }
    start = last_boundary + 1;
  }

  buffer_.assign(window.begin() + static_cast<std::ptrdiff_t>(start), window.end());
  buffer_tags_.assign(tags.begin() + static_cast<std::ptrdiff_t>(start), tags.end());

  while (buffer_.size() > config_.max_buffer_tokens) {
    const std::size_t cut = config_.max_buffer_tokens;
    std::vector<TaggedToken> sentence = zip(std::span(buffer_).first(cut),
                                            std::span(buffer_tags_).first(cut));
    sentence.back().tag = PunctTag::Period;
    emit(out, std::move(sentence));
    buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(cut));
    buffer_tags_.erase(buffer_tags_.begin(), buffer_tags_.begin() + static_cast<std::ptrdiff_t>(cut));
  }

  out.hypothesis = zip(buffer_, buffer_tags_);
  return out;
}

StepResult Session::push_in_segment(const Segment& segment) {
  std::vector<PunctTag> tags = run_tagger(segment.tokens);
  if (!is_boundary(tags.back())) tags.back() = PunctTag::Period;

  StepResult out;
  std::size_t from = 0;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (!is_boundary(tags[i])) continue;
    emit(out, zip(std::span(segment.tokens).subspan(from, i - from + 1),
                  std::span(tags).subspan(from, i - from + 1)));
    from = i + 1;
  }
  return out;
}

StepResult Session::push_left_context(const Segment& segment) {
  std::vector<Token> window = prev_segment_;
  window.insert(window.end(), segment.tokens.begin(), segment.tokens.end());
  std::vector<PunctTag> window_tags = run_tagger(window);

  // Context predictions are discarded; only the current segment emits.
  std::vector<PunctTag> tags(window_tags.end() - static_cast<std::ptrdiff_t>(segment.tokens.size()),
                             window_tags.end());
  if (!is_boundary(tags.back())) tags.back() = PunctTag::Period;

  StepResult out;
  std::size_t from = 0;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (!is_boundary(tags[i])) continue;
    emit(out, zip(std::span(segment.tokens).subspan(from, i - from + 1),
                  std::span(tags).subspan(from, i - from + 1)));
    from = i + 1;
  }
  prev_segment_ = segment.tokens;
  return out;
}

StepResult Session::push_right_context(const Segment& segment) {
  StepResult out;
  if (!held_.empty()) {
    std::vector<Token> window = held_;
    window.insert(window.end(), segment.tokens.begin(), segment.tokens.end());
    std::vector<PunctTag> window_tags = run_tagger(window);

    // The held segment's tags become final exactly as predicted; sentences
    // are emitted once a boundary closes them, which may span pushes.
    for (std::size_t i = 0; i < held_.size(); ++i) {
      committed_tail_.push_back({held_[i], window_tags[i]});
    }
    std::size_t from = 0;
    for (std::size_t i = 0; i < committed_tail_.size(); ++i) {
      if (!is_boundary(committed_tail_[i].tag)) continue;
      emit(out, std::vector<TaggedToken>(committed_tail_.begin() + static_cast<std::ptrdiff_t>(from),
                                         committed_tail_.begin() + static_cast<std::ptrdiff_t>(i + 1)));
      from = i + 1;
    }
    committed_tail_.erase(committed_tail_.begin(),
                          committed_tail_.begin() + static_cast<std::ptrdiff_t>(from));

    held_tags_.assign(window_tags.begin() + static_cast<std::ptrdiff_t>(held_.size()),
                      window_tags.end());
  } else {
    held_tags_.assign(segment.tokens.size(), PunctTag::None);
  }
  held_ = segment.tokens;
  out.hypothesis = zip(held_, held_tags_);
  return out;
}

StepResult Session::flush() {
  StepResult out;
  switch (config_.mode) {
    case Mode::InSegment:
      break;
    case Mode::LeftContext:
      prev_segment_.clear();
      break;
    case Mode::Streaming: {
      if (buffer_.empty()) break;
      std::vector<PunctTag> tags = run_tagger(buffer_);
      if (!is_boundary(tags.back())) tags.back() = PunctTag::Period;
      std::size_t from = 0;
      for (std::size_t i = 0; i < tags.size(); ++i) {
        if (!is_boundary(tags[i])) continue;
        emit(out, zip(std::span(buffer_).subspan(from, i - from + 1),
                      std::span(tags).subspan(from, i - from + 1)));
        from = i + 1;
      }
      buffer_.clear();
      buffer_tags_.clear();
      break;
    }
    case Mode::RightContext: {
      if (!held_.empty()) {
        // No right context will ever arrive; tag the held segment alone.
        std::vector<PunctTag> tags = run_tagger(held_);
        for (std::size_t i = 0; i < held_.size(); ++i) {
          committed_tail_.push_back({held_[i], tags[i]});
        }
        held_.clear();
        held_tags_.clear();
      }
      if (!committed_tail_.empty()) {
        if (!is_boundary(committed_tail_.back().tag)) {
          committed_tail_.back().tag = PunctTag::Period;
        }
        std::size_t from = 0;
        for (std::size_t i = 0; i < committed_tail_.size(); ++i) {
          if (!is_boundary(committed_tail_[i].tag)) continue;
          emit(out,
               std::vector<TaggedToken>(committed_tail_.begin() + static_cast<std::ptrdiff_t>(from),
                                        committed_tail_.begin() + static_cast<std::ptrdiff_t>(i + 1)));
          from = i + 1;
        }
        committed_tail_.clear();
      }
      break;
    }
  }
  return out;
}

std::vector<Token> Session::unemitted_tokens() const {
  std::vector<Token> out;
  for (const auto& tt : committed_tail_) out.push_back(tt.token);
  out.insert(out.end(), held_.begin(), held_.end());
  out.insert(out.end(), buffer_.begin(), buffer_.end());
  return out;
}

std::vector<Sentence> run_batch(std::span<const Token> tokens, std::span<const Segment> segments,
                                const SessionConfig& config, const Tagger& tagger) {
  std::size_t total = 0;
  for (const auto& seg : segments) total += seg.tokens.size();
  if (total != tokens.size()) {
    throw std::invalid_argument("segmentation does not cover the token stream");
  }
  std::size_t pos = 0;
  for (const auto& seg : segments) {
    for (const auto& t : seg.tokens) {
      if (t.text != tokens[pos].text) {
        throw std::invalid_argument("segmentation diverges from the token stream at position " +
                                    std::to_string(pos));
      }
      ++pos;
    }
  }

  Session session(config, tagger);
  std::vector<Sentence> sentences;
  for (const auto& seg : segments) {
    StepResult step = session.push(seg);
    for (auto& s : step.finalized) sentences.push_back(std::move(s));
  }
  StepResult last = session.flush();
  for (auto& s : last.finalized) sentences.push_back(std::move(s));
  return sentences;
}

std::vector<TaggedToken> flatten(std::span<const Sentence> sentences) {
  std::vector<TaggedToken> out;
  for (const auto& s : sentences) out.insert(out.end(), s.tagged.begin(), s.tagged.end());
  return out;
}

}  // namespace streampunct
