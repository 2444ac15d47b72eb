#include "streampunct/segsim.hpp"

#include <algorithm>
#include <cmath>

#include "streampunct/prng.hpp"

namespace streampunct {

namespace {

constexpr std::string_view kKindNames[] = {"fixed", "geometric", "pause_noise"};

}  // namespace

std::string_view seg_kind_name(SegKind kind) { return kKindNames[static_cast<int>(kind)]; }

std::optional<SegKind> seg_kind_from_name(std::string_view name) {
  for (int i = 0; i < 3; ++i) {
    if (kKindNames[i] == name) return static_cast<SegKind>(i);
  }
  return std::nullopt;
}

void SegPolicy::validate() const {
  if (mean_len < 1 || mean_len > max_len) {
    throw std::invalid_argument("segmentation policy needs 1 <= mean_len <= max_len");
  }
  if (boundary_affinity < 0.0 || boundary_affinity > 1.0) {
    throw std::invalid_argument("boundary_affinity must lie in [0, 1]");
  }
}

namespace {

// Geometric segment length with the given mean, clamped to [1, max_len].
std::size_t draw_length(Rng& rng, std::size_t mean_len, std::size_t max_len) {
  if (mean_len <= 1) return 1;
  const double p = 1.0 / static_cast<double>(mean_len);
  const double u = 1.0 - rng.unit();  // (0, 1]
  auto len = static_cast<std::size_t>(1.0 + std::floor(std::log(u) / std::log(1.0 - p)));
  return std::clamp<std::size_t>(len, 1, max_len);
}

// Gap positions (a cut after token i-1 is gap i) of the true boundaries.
std::vector<std::size_t> boundary_gaps(std::span<const PunctTag> tags) {
  std::vector<std::size_t> gaps;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (is_boundary(tags[i])) gaps.push_back(i + 1);
  }
  return gaps;
}

std::size_t snap_to_nearest(std::size_t cut, const std::vector<std::size_t>& gaps) {
  if (gaps.empty()) return cut;
  auto it = std::lower_bound(gaps.begin(), gaps.end(), cut);
  if (it == gaps.end()) return gaps.back();
  if (it == gaps.begin()) return gaps.front();
  const std::size_t above = *it;
  const std::size_t below = *(it - 1);
  return (cut - below <= above - cut) ? below : above;
}

}  // namespace

std::vector<Segment> simulate(std::span<const Token> tokens, std::span<const PunctTag> ref_tags,
                              const SegPolicy& policy) {
  policy.validate();
  if (tokens.size() != ref_tags.size()) throw SegLengthMismatch(tokens.size(), ref_tags.size());
  if (tokens.empty()) return {};

  const std::size_t n = tokens.size();
  Rng rng(policy.seed);
  std::vector<std::size_t> cuts;  // interior gap positions in (0, n)

  switch (policy.kind) {
    case SegKind::Fixed:
      for (std::size_t c = policy.mean_len; c < n; c += policy.mean_len) cuts.push_back(c);
      break;
    case SegKind::Geometric: {
      std::size_t c = 0;
      for (;;) {
        c += draw_length(rng, policy.mean_len, policy.max_len);
        if (c >= n) break;
        cuts.push_back(c);
      }
      break;
    }
    case SegKind::PauseNoise: {
      const auto gaps = boundary_gaps(ref_tags);
      std::size_t c = 0;
      for (;;) {
        c += draw_length(rng, policy.mean_len, policy.max_len);
        if (c >= n) break;
        std::size_t cut = c;
        if (rng.chance(policy.boundary_affinity)) cut = snap_to_nearest(c, gaps);
        if (cut > 0 && cut < n) cuts.push_back(cut);
      }
      std::sort(cuts.begin(), cuts.end());
      cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
      break;
    }
  }

  // Snapping (and the tail) can stretch a segment past the cap; force
  // additional splits, the analog of the decoder's hard timeout.
  std::vector<std::size_t> capped;
  std::size_t prev = 0;
  auto push_capped = [&](std::size_t next) {
    while (next - prev > policy.max_len) {
      prev += policy.max_len;
      capped.push_back(prev);
    }
    if (next < n) capped.push_back(next);
    prev = next;
  };
  for (std::size_t cut : cuts) push_capped(cut);
  push_capped(n);

  std::vector<Segment> segments;
  prev = 0;
  std::size_t index = 0;
  auto emit = [&](std::size_t end) {
    Segment seg;
    seg.source_index = index++;
    seg.tokens.assign(tokens.begin() + static_cast<std::ptrdiff_t>(prev),
                      tokens.begin() + static_cast<std::ptrdiff_t>(end));
    segments.push_back(std::move(seg));
    prev = end;
  };
  for (std::size_t cut : capped) emit(cut);
  if (prev < n) emit(n);
  return segments;
}

}  // namespace streampunct
