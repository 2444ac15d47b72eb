#ifndef STREAMPUNCT_SEGSIM_HPP
#define STREAMPUNCT_SEGSIM_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "streampunct/core.hpp"

namespace streampunct {

/// Decoder-segmentation simulator policies. Pauses are modeled
/// positionally: mean_len controls cut frequency, max_len is the forced
/// split cap, and boundary_affinity (PauseNoise only) is the chance a cut
/// snaps to the nearest true sentence boundary instead of landing
/// mid-sentence.
enum class SegKind { Fixed, Geometric, PauseNoise };

std::string_view seg_kind_name(SegKind kind);
std::optional<SegKind> seg_kind_from_name(std::string_view name);

struct SegPolicy {
  SegKind kind = SegKind::Fixed;
  std::size_t mean_len = 10;
  std::size_t max_len = 100;
  double boundary_affinity = 0.0;
  std::uint64_t seed = 1;

  void validate() const;
};

struct SegLengthMismatch : std::invalid_argument {
  SegLengthMismatch(std::size_t tokens, std::size_t tags)
      : std::invalid_argument("tokens/ref_tags differ in length: " + std::to_string(tokens) +
                              " vs " + std::to_string(tags)) {}
};

/// Partitions the token stream into segments per the policy. ref_tags mark
/// the true boundaries PauseNoise snaps to. Deterministic in policy.seed.
std::vector<Segment> simulate(std::span<const Token> tokens, std::span<const PunctTag> ref_tags,
                              const SegPolicy& policy);

}  // namespace streampunct

#endif
