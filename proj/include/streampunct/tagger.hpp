#ifndef STREAMPUNCT_TAGGER_HPP
#define STREAMPUNCT_TAGGER_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "streampunct/core.hpp"
#include "streampunct/datapipe.hpp"

namespace streampunct {

/// Tagging contract. Implementations return one tag per input token, are
/// deterministic, and keep no per-session state; all streaming state lives
/// in the Session. The OracleTagger is the one sanctioned exception (it
/// tracks a reference cursor), so give each session its own instance.
class Tagger {
 public:
  virtual ~Tagger() = default;
  virtual std::vector<PunctTag> predict(std::span<const Token> tokens) const = 0;
};

struct SliceMismatch : std::runtime_error {
  explicit SliceMismatch(const std::string& what) : std::runtime_error(what) {}
};

/// Test tagger that returns the reference tags for any contiguous slice of
/// the configured reference stream. Slices are located by content: the
/// cursor position is tried first (a streaming session's window always
/// resumes there), then the end of the previous slice (back-to-back
/// slices), then everywhere else in order. Text with long self-repetitions
/// can make a slice position ambiguous; reference corpora for oracle runs
/// should avoid that.
class OracleTagger final : public Tagger {
 public:
  explicit OracleTagger(LabeledExample reference);

  std::vector<PunctTag> predict(std::span<const Token> tokens) const override;
  void reset() const;

 private:
  bool matches_at(std::span<const Token> tokens, std::size_t pos) const;

  LabeledExample ref_;
  mutable std::size_t cursor_ = 0;
  mutable std::size_t last_end_ = 0;
};

struct EmptyCorpus : std::invalid_argument {
  EmptyCorpus() : std::invalid_argument("training corpus is empty") {}
};

struct VersionMismatch : std::runtime_error {
  explicit VersionMismatch(int found)
      : std::runtime_error("unsupported model format version " + std::to_string(found)) {}
};

struct CorruptFile : std::runtime_error {
  explicit CorruptFile(const std::string& what) : std::runtime_error("corrupt model file: " + what) {}
};

/// Window features for position i: the word itself, neighbors keyed by
/// signed offset within [-look_behind, +look_ahead] (out-of-range offsets
/// emit a <pad> marker), the word bigram across the i/i+1 gap, an
/// all-digits flag, and a bucketed distance from the sequence start.
std::vector<std::string> featurize(std::span<const Token> tokens, std::size_t i,
                                   std::size_t look_behind, std::size_t look_ahead);

struct TrainOptions {
  std::size_t epochs = 3;
  std::size_t look_behind = 4;
  std::size_t look_ahead = 4;
  std::uint64_t seed = 1;
};

/// Averaged-perceptron tagger over the featurize() window. The context
/// window sizes are fixed at training time and persisted with the weights.
class LinearTagger final : public Tagger {
 public:
  static LinearTagger train(const std::vector<LabeledExample>& corpus, const TrainOptions& opts);

  std::vector<PunctTag> predict(std::span<const Token> tokens) const override;

  void save(const std::filesystem::path& path) const;
  static LinearTagger load(const std::filesystem::path& path);

  std::size_t look_behind() const { return look_behind_; }
  std::size_t look_ahead() const { return look_ahead_; }
  std::size_t feature_count() const { return weights_.size(); }

 private:
  LinearTagger() = default;

  std::unordered_map<std::string, std::array<double, kNumTags>> weights_;
  std::size_t look_behind_ = 4;
  std::size_t look_ahead_ = 4;
};

}  // namespace streampunct

#endif
