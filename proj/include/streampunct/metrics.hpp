#ifndef STREAMPUNCT_METRICS_HPP
#define STREAMPUNCT_METRICS_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "streampunct/core.hpp"

namespace streampunct {
namespace metrics {

struct LengthMismatch : std::invalid_argument {
  LengthMismatch(std::size_t ref, std::size_t hyp)
      : std::invalid_argument("tag streams differ in length: ref " + std::to_string(ref) +
                              " vs hyp " + std::to_string(hyp)) {}
};

struct TokenMismatch : std::runtime_error {
  explicit TokenMismatch(std::size_t position)
      : std::runtime_error("token streams diverge at position " + std::to_string(position)),
        position(position) {}
  std::size_t position;
};

struct ZeroBaseline : std::invalid_argument {
  ZeroBaseline() : std::invalid_argument("relative gain needs a positive baseline") {}
};

/// F-beta on percentage precision/recall: (1+b^2)PR / (b^2 P + R).
/// Returns 0 when the denominator vanishes.
double fbeta(double precision, double recall, double beta);

struct ClassCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;

  void operator+=(const ClassCounts& o);
  /// Percentages; 0 on an empty denominator (see degenerate()).
  double precision() const;
  double recall() const;
  double f(double beta) const;
  /// True when precision or recall had a 0/0 denominator.
  bool degenerate() const { return tp + fp == 0 || tp + fn == 0; }
};

/// Word-level punctuation scoring over the three non-empty classes.
/// `overall` micro-averages by summing counts.
struct PunctScore {
  std::map<PunctTag, ClassCounts> per_class;  // Comma, Period, Question
  ClassCounts overall;
};

PunctScore score_punctuation(std::span<const PunctTag> ref, std::span<const PunctTag> hyp);
PunctScore score_punctuation(const PunctScore& a, const PunctScore& b);  // count merge

/// Sentence-boundary scoring: commas ignored, Period and Question collapse
/// to one boundary class.
struct SegScore {
  ClassCounts counts;
  double precision() const { return counts.precision(); }
  double recall() const { return counts.recall(); }
  double f1() const { return counts.f(1.0); }
  double f05() const { return counts.f(0.5); }
  bool degenerate() const { return counts.degenerate(); }
};

SegScore score_segmentation(std::span<const PunctTag> ref, std::span<const PunctTag> hyp);

/// Requires identical underlying words (after tokenize() normalization);
/// throws TokenMismatch with the first divergent position otherwise. A
/// length difference reports the shorter stream's length.
void verify_alignment(std::span<const Token> ref_tokens, std::span<const Token> hyp_tokens);

/// 100 * (candidate - baseline) / baseline. Throws ZeroBaseline.
double relative_gain(double baseline, double candidate);

struct Gains {
  double punct_f1 = 0;
  double seg_f1 = 0;
  double seg_f05 = 0;
};

/// Full evaluation result. Percentages keep full precision; the table
/// renderer rounds for display.
struct EvalReport {
  PunctScore punctuation;
  SegScore segmentation;
  std::optional<Gains> gains;

  static EvalReport from_tags(std::span<const PunctTag> ref, std::span<const PunctTag> hyp);
  void add_gains_against(const EvalReport& baseline);
};

std::string report_to_json(const EvalReport& report);

/// Aligned plain-text table: one class block per column group, then
/// OVERALL, then the segmentation block.
std::string report_to_table(const EvalReport& report, const std::string& label);

}  // namespace metrics
}  // namespace streampunct

#endif
