#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "streampunct/datapipe.hpp"
#include "streampunct/tagger.hpp"
#include "streampunct/textgen.hpp"

using namespace streampunct;

namespace {

constexpr PunctTag O = PunctTag::None;
constexpr PunctTag C = PunctTag::Comma;
constexpr PunctTag Q = PunctTag::Question;

LabeledExample dictation_example() {
  return strip_and_tag("It can happen in New York City, right?");
}

std::vector<Token> slice(const LabeledExample& ex, std::size_t from, std::size_t count) {
  return {ex.tokens.begin() + static_cast<std::ptrdiff_t>(from),
          ex.tokens.begin() + static_cast<std::ptrdiff_t>(from + count)};
}

std::filesystem::path temp_model_path(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("oracle returns reference tags for slices") {
  OracleTagger oracle(dictation_example());
  auto ex = dictation_example();

  CHECK(oracle.predict(std::vector<Token>{}).empty());
  CHECK(oracle.predict(ex.tokens) == ex.tags);

  oracle.reset();
  auto tags = oracle.predict(slice(ex, 6, 2));  // [city, right]
  CHECK(tags == std::vector<PunctTag>{C, Q});
}

TEST_CASE("oracle tracks consecutive slices") {
  auto ex = dictation_example();
  OracleTagger oracle(ex);
  auto first = oracle.predict(slice(ex, 0, 3));
  CHECK(first == std::vector<PunctTag>{O, O, O});
  auto second = oracle.predict(slice(ex, 3, 4));
  CHECK(second == std::vector<PunctTag>{O, O, O, C});
  auto third = oracle.predict(slice(ex, 7, 1));
  CHECK(third == std::vector<PunctTag>{Q});
}

TEST_CASE("oracle concatenation over any disjoint partition equals the reference") {
  TextGenOptions opts;
  opts.seed = 21;
  opts.serial_tokens = true;  // unambiguous positional lookup
  auto ref = generate_stream(opts, 60);

  Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    OracleTagger oracle(ref);
    std::vector<PunctTag> collected;
    std::size_t pos = 0;
    while (pos < ref.tokens.size()) {
      const std::size_t len = std::min(ref.tokens.size() - pos, 1 + rng.below(9));
      auto tags = oracle.predict(slice(ref, pos, len));
      collected.insert(collected.end(), tags.begin(), tags.end());
      pos += len;
    }
    CHECK(collected == ref.tags);
  }
}

TEST_CASE("oracle rejects foreign slices") {
  OracleTagger oracle(dictation_example());
  CHECK_THROWS_AS(oracle.predict(std::vector<Token>{Token{"zebra"}}), SliceMismatch);
  std::vector<Token> too_long(20, Token{"it"});
  CHECK_THROWS_AS(oracle.predict(too_long), SliceMismatch);
}

TEST_CASE("featurize pads out-of-range offsets") {
  std::vector<Token> one = {Token{"hello"}};
  auto feats = featurize(one, 0, 1, 1);
  CHECK(feats == std::vector<std::string>{"w0=hello", "w-1=<pad>", "w+1=<pad>", "gap=hello|<pad>",
                                          "pos=0"});
}

TEST_CASE("featurize emits the gap bigram") {
  std::vector<Token> two = {Token{"new"}, Token{"york"}};
  auto feats = featurize(two, 0, 1, 1);
  CHECK(std::find(feats.begin(), feats.end(), "gap=new|york") != feats.end());
  CHECK(std::find(feats.begin(), feats.end(), "w+1=york") != feats.end());
}

TEST_CASE("featurize pads the full look-ahead at the last position") {
  std::vector<Token> two = {Token{"a"}, Token{"b"}};
  auto feats = featurize(two, 1, 0, 4);
  for (const char* pad : {"w+1=<pad>", "w+2=<pad>", "w+3=<pad>", "w+4=<pad>"}) {
    CHECK(std::find(feats.begin(), feats.end(), pad) != feats.end());
  }
}

TEST_CASE("featurize flags numeric tokens and buckets positions") {
  std::vector<Token> toks = {Token{"pay"}, Token{"1500"}, Token{"now"}};
  auto feats = featurize(toks, 1, 1, 1);
  CHECK(std::find(feats.begin(), feats.end(), "num=1") != feats.end());
  CHECK(std::find(feats.begin(), feats.end(), "pos=1") != feats.end());

  std::vector<Token> lots(30, Token{"x"});
  auto far = featurize(lots, 20, 1, 1);
  CHECK(std::find(far.begin(), far.end(), "pos=17+") != far.end());
}

TEST_CASE("untrained averaged perceptron predicts the tie-break tag") {
  LinearTagger model = LinearTagger::train({LabeledExample{{Token{"a"}}, {O}}}, {});
  CHECK(model.predict(std::vector<Token>{}).empty());
  std::vector<Token> toks = {Token{"strange"}, Token{"words"}};
  CHECK(model.predict(toks) == std::vector<PunctTag>{O, O});
}

TEST_CASE("training memorizes a single example") {
  auto ex = dictation_example();
  TrainOptions opts;
  opts.epochs = 10;
  LinearTagger model = LinearTagger::train({ex}, opts);
  CHECK(model.predict(ex.tokens) == ex.tags);
}

TEST_CASE("training rejects an empty corpus") {
  CHECK_THROWS_AS(LinearTagger::train({}, {}), EmptyCorpus);
}

TEST_CASE("training picks up a lexical rule") {
  // 'right' is always question-tagged in this corpus.
  Rng rng(8);
  const std::string_view filler[] = {"it", "can", "happen", "here", "now", "again", "maybe"};
  std::vector<LabeledExample> corpus;
  for (int i = 0; i < 80; ++i) {
    LabeledExample ex;
    const std::size_t n = 2 + rng.below(5);
    for (std::size_t j = 0; j < n; ++j) {
      ex.tokens.push_back(Token{std::string(filler[rng.below(std::size(filler))])});
      ex.tags.push_back(O);
    }
    ex.tokens.push_back(Token{"right"});
    ex.tags.push_back(Q);
    corpus.push_back(std::move(ex));
  }
  TrainOptions opts;
  opts.epochs = 5;
  LinearTagger model = LinearTagger::train(corpus, opts);

  std::vector<Token> probe = {Token{"happen"}, Token{"again"}, Token{"right"}};
  auto tags = model.predict(probe);
  CHECK(tags.back() == Q);
}

TEST_CASE("training recovers the tags of a repeated sentence") {
  auto ex = dictation_example();
  std::vector<LabeledExample> corpus(50, ex);
  TrainOptions opts;
  opts.epochs = 3;
  LinearTagger model = LinearTagger::train(corpus, opts);
  CHECK(model.predict(ex.tokens) == ex.tags);
}

TEST_CASE("prediction is deterministic") {
  TextGenOptions gen;
  gen.seed = 31;
  auto corpus = generate_corpus(gen, 40);
  TrainOptions opts;
  opts.epochs = 2;
  opts.seed = 9;
  LinearTagger a = LinearTagger::train(corpus, opts);
  LinearTagger b = LinearTagger::train(corpus, opts);
  for (const auto& ex : corpus) {
    CHECK(a.predict(ex.tokens) == b.predict(ex.tokens));
    CHECK(a.predict(ex.tokens) == a.predict(ex.tokens));
  }
}

TEST_CASE("mutations outside the window never change a prediction") {
  TextGenOptions gen;
  gen.seed = 41;
  auto corpus = generate_corpus(gen, 60);
  TrainOptions opts;
  opts.epochs = 2;
  opts.look_behind = 2;
  opts.look_ahead = 3;
  LinearTagger model = LinearTagger::train(corpus, opts);

  Rng rng(77);
  const std::string_view vocab[] = {"alpha", "beta", "gamma", "delta", "epsilon", "zeta"};
  int trials = 0;
  while (trials < 1000) {
    std::vector<Token> toks;
    const std::size_t n = 8 + rng.below(10);
    for (std::size_t j = 0; j < n; ++j) {
      toks.push_back(Token{std::string(vocab[rng.below(std::size(vocab))])});
    }
    const std::size_t i = rng.below(n);
    // Pick a mutation position strictly outside [i - behind, i + ahead].
    std::vector<std::size_t> candidates;
    for (std::size_t m = 0; m < n; ++m) {
      const auto d = static_cast<std::ptrdiff_t>(m) - static_cast<std::ptrdiff_t>(i);
      if (d < -static_cast<std::ptrdiff_t>(opts.look_behind) ||
          d > static_cast<std::ptrdiff_t>(opts.look_ahead)) {
        candidates.push_back(m);
      }
    }
    if (candidates.empty()) continue;
    const std::size_t m = candidates[rng.below(candidates.size())];

    const PunctTag before = model.predict(toks)[i];
    toks[m].text = "mutant" + std::to_string(rng.below(1000));
    const PunctTag after = model.predict(toks)[i];
    CHECK(before == after);
    ++trials;
  }
}

TEST_CASE("model save/load round trip preserves predictions") {
  TextGenOptions gen;
  gen.seed = 51;
  auto corpus = generate_corpus(gen, 50);
  TrainOptions opts;
  opts.epochs = 2;
  LinearTagger model = LinearTagger::train(corpus, opts);

  const auto path = temp_model_path("streampunct_test_model.txt");
  model.save(path);
  LinearTagger loaded = LinearTagger::load(path);
  CHECK(loaded.look_behind() == model.look_behind());
  CHECK(loaded.look_ahead() == model.look_ahead());
  CHECK(loaded.feature_count() == model.feature_count());

  TextGenOptions probe_gen;
  probe_gen.seed = 52;
  auto probes = generate_corpus(probe_gen, 100);
  for (const auto& ex : probes) {
    CHECK(model.predict(ex.tokens) == loaded.predict(ex.tokens));
  }
  std::filesystem::remove(path);
}

TEST_CASE("loading a truncated model fails cleanly") {
  TextGenOptions gen;
  gen.seed = 61;
  auto corpus = generate_corpus(gen, 20);
  LinearTagger model = LinearTagger::train(corpus, {});

  const auto path = temp_model_path("streampunct_truncated_model.txt");
  model.save(path);
  const auto size = std::filesystem::file_size(path);
  std::filesystem::resize_file(path, size / 2);
  CHECK_THROWS_AS(LinearTagger::load(path), CorruptFile);
  std::filesystem::remove(path);
}

TEST_CASE("loading a future format version fails with VersionMismatch") {
  const auto path = temp_model_path("streampunct_future_model.txt");
  {
    std::ofstream out(path);
    out << "streampunct-linear 2\nlook_behind 4\nlook_ahead 4\nfeatures 0\n";
  }
  CHECK_THROWS_AS(LinearTagger::load(path), VersionMismatch);
  std::filesystem::remove(path);
}

TEST_CASE("loading garbage fails with CorruptFile") {
  const auto path = temp_model_path("streampunct_garbage_model.txt");
  {
    std::ofstream out(path);
    out << "not a model at all\n";
  }
  CHECK_THROWS_AS(LinearTagger::load(path), CorruptFile);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(LinearTagger::load(path), CorruptFile);  // missing file
}
