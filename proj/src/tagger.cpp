#include "streampunct/tagger.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "streampunct/prng.hpp"

namespace streampunct {

OracleTagger::OracleTagger(LabeledExample reference) : ref_(std::move(reference)) {
  if (ref_.tokens.size() != ref_.tags.size()) {
    throw std::invalid_argument("oracle reference has mismatched token/tag lengths");
  }
}

bool OracleTagger::matches_at(std::span<const Token> tokens, std::size_t pos) const {
  if (pos + tokens.size() > ref_.tokens.size()) return false;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].text != ref_.tokens[pos + i].text) return false;
  }
  return true;
}

std::vector<PunctTag> OracleTagger::predict(std::span<const Token> tokens) const {
  if (tokens.empty()) return {};
  constexpr auto npos = std::numeric_limits<std::size_t>::max();
  std::size_t found = npos;
  if (matches_at(tokens, cursor_)) {
    found = cursor_;
  } else if (matches_at(tokens, last_end_)) {
    found = last_end_;
  } else {
    for (std::size_t s = 0; s + tokens.size() <= ref_.tokens.size(); ++s) {
      if (s == cursor_ || s == last_end_) continue;
      if (matches_at(tokens, s)) {
        found = s;
        break;
      }
    }
  }
  if (found == npos) {
    throw SliceMismatch("slice of " + std::to_string(tokens.size()) +
                        " tokens does not occur in the reference (first token: '" +
                        tokens.front().text + "')");
  }
  std::vector<PunctTag> tags(ref_.tags.begin() + static_cast<std::ptrdiff_t>(found),
                             ref_.tags.begin() + static_cast<std::ptrdiff_t>(found + tokens.size()));
  cursor_ = found;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (is_boundary(tags[i])) cursor_ = found + i + 1;
  }
  last_end_ = found + tokens.size();
  return tags;
}

void OracleTagger::reset() const {
  cursor_ = 0;
  last_end_ = 0;
}

namespace {

constexpr std::string_view kPad = "<pad>";

std::string_view word_or_pad(std::span<const Token> tokens, std::size_t i, std::ptrdiff_t off) {
  const auto pos = static_cast<std::ptrdiff_t>(i) + off;
  if (pos < 0 || pos >= static_cast<std::ptrdiff_t>(tokens.size())) return kPad;
  return tokens[static_cast<std::size_t>(pos)].text;
}

std::string_view position_bucket(std::size_t i) {
  if (i == 0) return "0";
  if (i == 1) return "1";
  if (i == 2) return "2";
  if (i <= 4) return "3-4";
  if (i <= 8) return "5-8";
  if (i <= 16) return "9-16";
  return "17+";
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

std::vector<std::string> featurize(std::span<const Token> tokens, std::size_t i,
                                   std::size_t look_behind, std::size_t look_ahead) {
  if (i >= tokens.size()) throw std::out_of_range("featurize: position out of range");
  std::vector<std::string> feats;
  feats.reserve(look_behind + look_ahead + 4);
  const std::string_view cur = tokens[i].text;

  feats.push_back(std::string("w0=") + std::string(cur));
  for (std::ptrdiff_t off = -static_cast<std::ptrdiff_t>(look_behind); off <= static_cast<std::ptrdiff_t>(look_ahead); ++off) {
    if (off == 0) continue;
    std::string f = "w";
    if (off > 0) f += '+';
    f += std::to_string(off);
    f += '=';
    f += word_or_pad(tokens, i, off);
    feats.push_back(std::move(f));
  }
  feats.push_back(std::string("gap=") + std::string(cur) + "|" + std::string(word_or_pad(tokens, i, 1)));
  if (all_digits(cur)) feats.push_back("num=1");
  feats.push_back(std::string("pos=") + std::string(position_bucket(i)));
  return feats;
}

namespace {

int argmax_tag(const std::array<double, kNumTags>& scores) {
  int best = 0;
  for (int k = 1; k < kNumTags; ++k) {
    if (scores[k] > scores[best]) best = k;  // ties keep the lower tag index
  }
  return best;
}

}  // namespace

LinearTagger LinearTagger::train(const std::vector<LabeledExample>& corpus,
                                 const TrainOptions& opts) {
  if (corpus.empty()) throw EmptyCorpus{};
  if (opts.epochs == 0) throw std::invalid_argument("train: epochs must be >= 1");

  struct Acc {
    std::array<double, kNumTags> w{};
    std::array<double, kNumTags> wa{};  // counter-weighted update sum for averaging
  };
  std::unordered_map<std::string, Acc> acc;
  double counter = 1.0;

  auto update = [&](const std::string& feat, int tag, double delta) {
    Acc& a = acc[feat];
    a.w[static_cast<std::size_t>(tag)] += delta;
    a.wa[static_cast<std::size_t>(tag)] += counter * delta;
  };

  std::vector<std::size_t> order(corpus.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(opts.seed);

  for (std::size_t epoch = 0; epoch < opts.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t idx : order) {
      const LabeledExample& ex = corpus[idx];
      for (std::size_t i = 0; i < ex.tokens.size(); ++i) {
        auto feats = featurize(ex.tokens, i, opts.look_behind, opts.look_ahead);
        std::array<double, kNumTags> scores{};
        for (const auto& f : feats) {
          auto it = acc.find(f);
          if (it == acc.end()) continue;
          for (int k = 0; k < kNumTags; ++k) scores[static_cast<std::size_t>(k)] += it->second.w[static_cast<std::size_t>(k)];
        }
        const int predicted = argmax_tag(scores);
        const int gold = static_cast<int>(ex.tags[i]);
        if (predicted != gold) {
          for (const auto& f : feats) {
            update(f, gold, +1.0);
            update(f, predicted, -1.0);
          }
        }
        counter += 1.0;
      }
    }
  }

  LinearTagger model;
  model.look_behind_ = opts.look_behind;
  model.look_ahead_ = opts.look_ahead;
  for (auto& [feat, a] : acc) {
    std::array<double, kNumTags> avg{};
    bool nonzero = false;
    for (int k = 0; k < kNumTags; ++k) {
      avg[static_cast<std::size_t>(k)] =
          a.w[static_cast<std::size_t>(k)] - a.wa[static_cast<std::size_t>(k)] / counter;
      if (avg[static_cast<std::size_t>(k)] != 0.0) nonzero = true;
    }
    if (nonzero) model.weights_.emplace(feat, avg);
  }
  return model;
}

std::vector<PunctTag> LinearTagger::predict(std::span<const Token> tokens) const {
  std::vector<PunctTag> tags;
  tags.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto feats = featurize(tokens, i, look_behind_, look_ahead_);
    std::array<double, kNumTags> scores{};
    for (const auto& f : feats) {
      auto it = weights_.find(f);
      if (it == weights_.end()) continue;
      for (int k = 0; k < kNumTags; ++k) scores[static_cast<std::size_t>(k)] += it->second[static_cast<std::size_t>(k)];
    }
    tags.push_back(static_cast<PunctTag>(argmax_tag(scores)));
  }
  return tags;
}

namespace {

constexpr std::string_view kModelMagic = "streampunct-linear";
constexpr int kModelVersion = 1;

}  // namespace

void LinearTagger::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file: " + path.string());
  out << kModelMagic << ' ' << kModelVersion << '\n';
  out << "look_behind " << look_behind_ << '\n';
  out << "look_ahead " << look_ahead_ << '\n';
  out << "features " << weights_.size() << '\n';

  std::vector<const std::string*> feats;
  feats.reserve(weights_.size());
  for (const auto& [feat, _] : weights_) feats.push_back(&feat);
  std::sort(feats.begin(), feats.end(), [](auto* a, auto* b) { return *a < *b; });

  char buf[32];
  for (const auto* feat : feats) {
    out << *feat;
    for (double w : weights_.at(*feat)) {
      std::snprintf(buf, sizeof(buf), "%.17g", w);
      out << '\t' << buf;
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("failed while writing model file: " + path.string());
}

LinearTagger LinearTagger::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CorruptFile("cannot open " + path.string());

  std::string magic;
  int version = -1;
  if (!(in >> magic >> version)) throw CorruptFile("missing header");
  if (magic != kModelMagic) throw CorruptFile("bad magic '" + magic + "'");
  if (version != kModelVersion) throw VersionMismatch(version);

  LinearTagger model;
  std::string key;
  std::size_t count = 0;
  if (!(in >> key >> model.look_behind_) || key != "look_behind") throw CorruptFile("look_behind");
  if (!(in >> key >> model.look_ahead_) || key != "look_ahead") throw CorruptFile("look_ahead");
  if (!(in >> key >> count) || key != "features") throw CorruptFile("feature count");
  in.ignore(std::numeric_limits<std::streamsize>::max(), '\n');

  std::string line;
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) throw CorruptFile("truncated at feature " + std::to_string(i));
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) throw CorruptFile("malformed row " + std::to_string(i));
    std::array<double, kNumTags> w{};
    std::istringstream rest(line.substr(tab + 1));
    for (int k = 0; k < kNumTags; ++k) {
      if (!(rest >> w[static_cast<std::size_t>(k)])) {
        throw CorruptFile("malformed weights in row " + std::to_string(i));
      }
    }
    model.weights_.emplace(line.substr(0, tab), w);
  }
  return model;
}

}  // namespace streampunct
