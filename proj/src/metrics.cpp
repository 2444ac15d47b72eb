#include "streampunct/metrics.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace streampunct {
namespace metrics {

double fbeta(double precision, double recall, double beta) {
  const double b2 = beta * beta;
  const double denom = b2 * precision + recall;
  if (denom <= 0.0) return 0.0;
  return (1.0 + b2) * precision * recall / denom;
}

void ClassCounts::operator+=(const ClassCounts& o) {
  tp += o.tp;
  fp += o.fp;
  fn += o.fn;
}

double ClassCounts::precision() const {
  const auto denom = tp + fp;
  return denom == 0 ? 0.0 : 100.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

double ClassCounts::recall() const {
  const auto denom = tp + fn;
  return denom == 0 ? 0.0 : 100.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

double ClassCounts::f(double beta) const { return fbeta(precision(), recall(), beta); }

namespace {

constexpr PunctTag kScoredClasses[] = {PunctTag::Comma, PunctTag::Period, PunctTag::Question};

}  // namespace

PunctScore score_punctuation(std::span<const PunctTag> ref, std::span<const PunctTag> hyp) {
  if (ref.size() != hyp.size()) throw LengthMismatch(ref.size(), hyp.size());
  PunctScore score;
  for (PunctTag cls : kScoredClasses) score.per_class[cls] = ClassCounts{};
  for (std::size_t i = 0; i < ref.size(); ++i) {
    for (PunctTag cls : kScoredClasses) {
      auto& counts = score.per_class[cls];
      const bool in_ref = ref[i] == cls;
      const bool in_hyp = hyp[i] == cls;
      if (in_ref && in_hyp) ++counts.tp;
      if (in_hyp && !in_ref) ++counts.fp;
      if (in_ref && !in_hyp) ++counts.fn;
    }
  }
  for (PunctTag cls : kScoredClasses) score.overall += score.per_class[cls];
  return score;
}

PunctScore score_punctuation(const PunctScore& a, const PunctScore& b) {
  PunctScore merged = a;
  for (const auto& [cls, counts] : b.per_class) merged.per_class[cls] += counts;
  merged.overall += b.overall;
  return merged;
}

SegScore score_segmentation(std::span<const PunctTag> ref, std::span<const PunctTag> hyp) {
  if (ref.size() != hyp.size()) throw LengthMismatch(ref.size(), hyp.size());
  SegScore score;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const bool in_ref = is_boundary(ref[i]);
    const bool in_hyp = is_boundary(hyp[i]);
    if (in_ref && in_hyp) ++score.counts.tp;
    if (in_hyp && !in_ref) ++score.counts.fp;
    if (in_ref && !in_hyp) ++score.counts.fn;
  }
  return score;
}

void verify_alignment(std::span<const Token> ref_tokens, std::span<const Token> hyp_tokens) {
  const std::size_t n = std::min(ref_tokens.size(), hyp_tokens.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (normalize_word(ref_tokens[i].text) != normalize_word(hyp_tokens[i].text)) {
      throw TokenMismatch(i);
    }
  }
  if (ref_tokens.size() != hyp_tokens.size()) throw TokenMismatch(n);
}

double relative_gain(double baseline, double candidate) {
  if (baseline <= 0.0) throw ZeroBaseline{};
  return 100.0 * (candidate - baseline) / baseline;
}

EvalReport EvalReport::from_tags(std::span<const PunctTag> ref, std::span<const PunctTag> hyp) {
  EvalReport report;
  report.punctuation = score_punctuation(ref, hyp);
  report.segmentation = score_segmentation(ref, hyp);
  return report;
}

void EvalReport::add_gains_against(const EvalReport& baseline) {
  Gains g;
  g.punct_f1 = relative_gain(baseline.punctuation.overall.f(1.0), punctuation.overall.f(1.0));
  g.seg_f1 = relative_gain(baseline.segmentation.f1(), segmentation.f1());
  g.seg_f05 = relative_gain(baseline.segmentation.f05(), segmentation.f05());
  gains = g;
}

namespace {

nlohmann::json counts_json(const ClassCounts& c) {
  return {{"tp", c.tp},
          {"fp", c.fp},
          {"fn", c.fn},
          {"precision", c.precision()},
          {"recall", c.recall()},
          {"f1", c.f(1.0)},
          {"degenerate", c.degenerate()}};
}

std::string fmt(double value, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%*.0f", width, value);
  return buf;
}

}  // namespace

std::string report_to_json(const EvalReport& report) {
  nlohmann::json out;
  for (const auto& [cls, counts] : report.punctuation.per_class) {
    out["punctuation"][std::string(tag_name(cls))] = counts_json(counts);
  }
  out["punctuation"]["OVERALL"] = counts_json(report.punctuation.overall);
  auto seg = counts_json(report.segmentation.counts);
  seg["f05"] = report.segmentation.f05();
  out["segmentation"] = seg;
  if (report.gains) {
    out["gains"] = {{"punct_f1", report.gains->punct_f1},
                    {"seg_f1", report.gains->seg_f1},
                    {"seg_f05", report.gains->seg_f05}};
  }
  return out.dump();
}

std::string report_to_table(const EvalReport& report, const std::string& label) {
  std::string out;
  out += "                PERIOD          Q-MARK          COMMA           OVERALL\n";
  out += "                P    R    F1    P    R    F1    P    R    F1    P    R    F1\n";
  char head[32];
  std::snprintf(head, sizeof(head), "%-15.15s", label.c_str());
  out += head;
  const PunctTag order[] = {PunctTag::Period, PunctTag::Question, PunctTag::Comma};
  for (PunctTag cls : order) {
    const auto& c = report.punctuation.per_class.at(cls);
    out += fmt(c.precision(), 3) + "  " + fmt(c.recall(), 3) + "  " + fmt(c.f(1.0), 3) + "   ";
  }
  const auto& o = report.punctuation.overall;
  out += fmt(o.precision(), 3) + "  " + fmt(o.recall(), 3) + "  " + fmt(o.f(1.0), 3) + "\n";
  out += "\n";
  out += "                Segmentation\n";
  out += "                P    R    F1   F0.5\n";
  out += head;
  out += fmt(report.segmentation.precision(), 3) + "  " + fmt(report.segmentation.recall(), 3) +
         "  " + fmt(report.segmentation.f1(), 3) + "  " + fmt(report.segmentation.f05(), 3);
  if (report.gains) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "   (F1 %+.1f%%, F0.5 %+.1f%%)", report.gains->seg_f1,
                  report.gains->seg_f05);
    out += buf;
  }
  out += "\n";
  return out;
}

}  // namespace metrics
}  // namespace streampunct
