#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "streampunct/datapipe.hpp"
#include "streampunct/segsim.hpp"
#include "streampunct/textgen.hpp"

using namespace streampunct;

namespace {

std::vector<std::size_t> sizes(const std::vector<Segment>& segments) {
  std::vector<std::size_t> out;
  for (const auto& s : segments) out.push_back(s.tokens.size());
  return out;
}

void check_partition(const std::vector<Segment>& segments, std::span<const Token> tokens) {
  std::size_t pos = 0;
  std::size_t index = 0;
  for (const auto& seg : segments) {
    CHECK(seg.source_index == index++);
    for (const auto& t : seg.tokens) {
      REQUIRE(pos < tokens.size());
      CHECK(t == tokens[pos]);
      ++pos;
    }
  }
  CHECK(pos == tokens.size());
}

}  // namespace

TEST_CASE("policy validation") {
  SegPolicy bad;
  bad.mean_len = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.mean_len = 10;
  bad.max_len = 5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.max_len = 10;
  bad.boundary_affinity = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("fixed policy cuts every mean_len tokens") {
  auto ref = strip_and_tag("It can happen in New York City, right?");
  SegPolicy policy;
  policy.kind = SegKind::Fixed;
  policy.mean_len = 3;
  policy.max_len = 100;
  auto segments = simulate(ref.tokens, ref.tags, policy);
  CHECK(sizes(segments) == std::vector<std::size_t>{3, 3, 2});
  check_partition(segments, ref.tokens);

  policy.mean_len = 50;
  auto whole = simulate(ref.tokens, ref.tags, policy);
  CHECK(sizes(whole) == std::vector<std::size_t>{8});
}

TEST_CASE("length mismatch is rejected") {
  auto ref = strip_and_tag("hello there.");
  std::vector<PunctTag> short_tags = {PunctTag::None};
  CHECK_THROWS_AS(simulate(ref.tokens, short_tags, SegPolicy{}), SegLengthMismatch);
}

TEST_CASE("geometric policy partitions exactly, respects the cap, is seeded") {
  TextGenOptions opts;
  opts.seed = 13;
  auto ref = generate_stream(opts, 60);

  SegPolicy policy;
  policy.kind = SegKind::Geometric;
  policy.mean_len = 5;
  policy.max_len = 12;

  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 99ULL}) {
    policy.seed = seed;
    auto segments = simulate(ref.tokens, ref.tags, policy);
    check_partition(segments, ref.tokens);
    for (const auto& seg : segments) CHECK(seg.tokens.size() <= policy.max_len);

    auto again = simulate(ref.tokens, ref.tags, policy);
    CHECK(sizes(again) == sizes(segments));
  }

  policy.seed = 1;
  auto a = simulate(ref.tokens, ref.tags, policy);
  policy.seed = 2;
  auto b = simulate(ref.tokens, ref.tags, policy);
  CHECK(sizes(a) != sizes(b));
}

TEST_CASE("pause noise with full affinity cuts only at true boundaries") {
  TextGenOptions opts;
  opts.seed = 29;
  auto ref = generate_stream(opts, 50);

  SegPolicy policy;
  policy.kind = SegKind::PauseNoise;
  policy.mean_len = 4;
  policy.max_len = 1000;  // above the longest sentence, so no forced cuts
  policy.boundary_affinity = 1.0;

  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    policy.seed = seed;
    auto segments = simulate(ref.tokens, ref.tags, policy);
    check_partition(segments, ref.tokens);
    std::size_t pos = 0;
    for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
      pos += segments[i].tokens.size();
      CHECK(is_boundary(ref.tags[pos - 1]));  // every interior cut on a boundary
    }
  }
}

TEST_CASE("pause noise with zero affinity lands mid-sentence regularly") {
  TextGenOptions opts;
  opts.seed = 31;
  auto ref = generate_stream(opts, 50);

  SegPolicy policy;
  policy.kind = SegKind::PauseNoise;
  policy.mean_len = 3;
  policy.max_len = 1000;
  policy.boundary_affinity = 0.0;

  std::size_t mid_sentence_cuts = 0;
  std::size_t total_cuts = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    policy.seed = seed;
    auto segments = simulate(ref.tokens, ref.tags, policy);
    check_partition(segments, ref.tokens);
    std::size_t pos = 0;
    for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
      pos += segments[i].tokens.size();
      ++total_cuts;
      if (!is_boundary(ref.tags[pos - 1])) ++mid_sentence_cuts;
    }
  }
  CHECK(total_cuts > 0);
  CHECK(mid_sentence_cuts > total_cuts / 2);
}

TEST_CASE("max_len forces splits even after snapping") {
  TextGenOptions opts;
  opts.seed = 37;
  auto ref = generate_stream(opts, 40);

  SegPolicy policy;
  policy.kind = SegKind::PauseNoise;
  policy.mean_len = 6;
  policy.max_len = 7;
  policy.boundary_affinity = 1.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    policy.seed = seed;
    auto segments = simulate(ref.tokens, ref.tags, policy);
    check_partition(segments, ref.tokens);
    for (const auto& seg : segments) CHECK(seg.tokens.size() <= policy.max_len);
  }
}

TEST_CASE("empty input yields no segments") {
  CHECK(simulate({}, {}, SegPolicy{}).empty());
}
