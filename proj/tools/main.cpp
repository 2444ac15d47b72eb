#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "streampunct/datapipe.hpp"
#include "streampunct/external_tagger.hpp"
#include "streampunct/metrics.hpp"
#include "streampunct/prng.hpp"
#include "streampunct/segsim.hpp"
#include "streampunct/stream.hpp"
#include "streampunct/tagger.hpp"

namespace sp = streampunct;

namespace {

// Tagger specs: "oracle", "model:<path>" or "external:<command>". The
// oracle needs reference tags and is built per example by the commands
// that have them.
struct TaggerSpec {
  enum class Kind { Oracle, Model, External };
  Kind kind = Kind::Oracle;
  std::string arg;
};

TaggerSpec parse_tagger_spec(const std::string& spec) {
  if (spec == "oracle") return {TaggerSpec::Kind::Oracle, ""};
  if (spec.rfind("model:", 0) == 0) return {TaggerSpec::Kind::Model, spec.substr(6)};
  if (spec.rfind("external:", 0) == 0) return {TaggerSpec::Kind::External, spec.substr(9)};
  throw std::runtime_error("bad tagger spec '" + spec +
                           "': expected 'oracle', 'model:<path>' or 'external:<cmd>'");
}

std::unique_ptr<sp::Tagger> make_shared_tagger(const TaggerSpec& spec) {
  switch (spec.kind) {
    case TaggerSpec::Kind::Model:
      return std::make_unique<sp::LinearTagger>(sp::LinearTagger::load(spec.arg));
    case TaggerSpec::Kind::External:
      return std::make_unique<sp::ExternalTagger>(spec.arg);
    case TaggerSpec::Kind::Oracle:
      return nullptr;
  }
  return nullptr;
}

std::vector<sp::LabeledExample> load_labeled(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  return sp::read_jsonl(in);
}

void store_labeled(const std::string& path, const std::vector<sp::LabeledExample>& examples) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  sp::write_jsonl(out, examples);
}

// ---------------------------------------------------------------------------

struct PrepareOptions {
  std::string input;
  std::string output;
  std::size_t max_tokens = 250;
  std::uint64_t seed = 1;  // accepted for interface uniformity; prepare is seed-free
};

int cmd_prepare(const PrepareOptions& opt) {
  std::ifstream in(opt.input);
  if (!in) {
    std::cerr << "error: cannot read " << opt.input << "\n";
    return 2;
  }
  std::ofstream out(opt.output);
  if (!out) {
    std::cerr << "error: cannot write " << opt.output << "\n";
    return 2;
  }
  std::size_t kept = 0, dropped_empty = 0, dropped_unterminated = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    sp::LabeledExample ex;
    try {
      ex = sp::strip_and_tag(line);
    } catch (const sp::EmptyAfterCleaning&) {
      ++dropped_empty;
      continue;
    }
    ex = sp::trim_to_limit(ex, opt.max_tokens);
    if (ex.tokens.empty()) {
      ++dropped_unterminated;
      continue;
    }
    out << sp::to_jsonl_line(ex) << '\n';
    ++kept;
  }
  std::cerr << "prepared " << kept << " records (dropped " << dropped_empty
            << " empty after cleaning, " << dropped_unterminated
            << " with no sentence boundary within " << opt.max_tokens << " tokens)\n";
  return 0;
}

struct SplitOptions {
  std::string input;
  std::string train_out;
  std::string valid_out;
  double fraction = 0.10;
  std::size_t cap = 50000;
  std::uint64_t seed = 1;
};

int cmd_split(const SplitOptions& opt) {
  auto examples = load_labeled(opt.input);
  if (examples.empty()) throw std::runtime_error("no labeled examples in " + opt.input);
  auto split = sp::split_corpus(examples, opt.fraction, opt.cap, opt.seed);
  store_labeled(opt.train_out, split.train);
  store_labeled(opt.valid_out, split.valid);
  std::cerr << "split " << examples.size() << " examples into " << split.train.size()
            << " train / " << split.valid.size() << " valid (seed " << opt.seed << ")\n";
  return 0;
}

struct TrainOptionsCli {
  std::string input;
  std::string model_out;
  std::size_t epochs = 3;
  std::size_t look_behind = 4;
  std::size_t look_ahead = 4;
  std::uint64_t seed = 1;
};

int cmd_train(const TrainOptionsCli& opt) {
  auto corpus = load_labeled(opt.input);
  sp::TrainOptions train_opts;
  train_opts.epochs = opt.epochs;
  train_opts.look_behind = opt.look_behind;
  train_opts.look_ahead = opt.look_ahead;
  train_opts.seed = opt.seed;
  auto model = sp::LinearTagger::train(corpus, train_opts);
  model.save(opt.model_out);
  std::cerr << "trained on " << corpus.size() << " examples for " << opt.epochs << " epochs; "
            << model.feature_count() << " features; look-behind " << opt.look_behind
            << ", look-ahead " << opt.look_ahead << "\n";
  return 0;
}

struct TagOptions {
  std::string input;
  std::string output;
  std::string tagger = "oracle";
  std::uint64_t seed = 1;
};

int cmd_tag(const TagOptions& opt) {
  auto spec = parse_tagger_spec(opt.tagger);
  auto shared = make_shared_tagger(spec);
  auto examples = load_labeled(opt.input);

  std::ofstream out(opt.output);
  if (!out) throw std::runtime_error("cannot write " + opt.output);
  for (const auto& ex : examples) {
    sp::LabeledExample tagged;
    tagged.tokens = ex.tokens;
    if (shared) {
      tagged.tags = shared->predict(ex.tokens);
    } else {
      sp::OracleTagger oracle(ex);
      tagged.tags = oracle.predict(ex.tokens);
    }
    out << sp::to_jsonl_line(tagged) << '\n';
  }
  std::cerr << "tagged " << examples.size() << " examples\n";
  return 0;
}

struct SimulateOptions {
  std::string input;
  std::string output;
  std::string kind = "pause_noise";
  std::size_t mean = 8;
  std::size_t max = 80;
  double affinity = 0.5;
  std::uint64_t seed = 1;
};

sp::SegPolicy to_policy(const SimulateOptions& opt) {
  sp::SegPolicy policy;
  auto kind = sp::seg_kind_from_name(opt.kind);
  if (!kind) throw std::runtime_error("unknown segmentation kind: " + opt.kind);
  policy.kind = *kind;
  policy.mean_len = opt.mean;
  policy.max_len = opt.max;
  policy.boundary_affinity = opt.affinity;
  policy.seed = opt.seed;
  policy.validate();
  return policy;
}

int cmd_simulate(const SimulateOptions& opt) {
  auto examples = load_labeled(opt.input);
  sp::LabeledExample stream;
  for (const auto& ex : examples) {
    stream.tokens.insert(stream.tokens.end(), ex.tokens.begin(), ex.tokens.end());
    stream.tags.insert(stream.tags.end(), ex.tags.begin(), ex.tags.end());
  }
  auto segments = sp::simulate(stream.tokens, stream.tags, to_policy(opt));

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!opt.output.empty() && opt.output != "-") {
    file.open(opt.output);
    if (!file) throw std::runtime_error("cannot write " + opt.output);
    out = &file;
  }
  for (const auto& seg : segments) {
    for (std::size_t i = 0; i < seg.tokens.size(); ++i) {
      if (i > 0) *out << ' ';
      *out << seg.tokens[i].text;
    }
    *out << '\n';
  }
  std::cerr << "simulated " << segments.size() << " segments from " << stream.tokens.size()
            << " tokens\n";
  return 0;
}

struct StreamOptions {
  std::string tagger;
  std::string reference;
  std::string mode = "streaming";
  std::size_t max_buffer = 200;
  bool capitalize = true;
  std::uint64_t seed = 1;
};

int cmd_stream(const StreamOptions& opt) {
  auto spec = parse_tagger_spec(opt.tagger);
  std::unique_ptr<sp::Tagger> tagger = make_shared_tagger(spec);
  std::unique_ptr<sp::OracleTagger> oracle;
  if (!tagger) {
    if (opt.reference.empty()) {
      throw std::runtime_error("--tagger oracle needs --reference <labeled.jsonl>");
    }
    auto refs = load_labeled(opt.reference);
    sp::LabeledExample joined;
    for (const auto& ex : refs) {
      joined.tokens.insert(joined.tokens.end(), ex.tokens.begin(), ex.tokens.end());
      joined.tags.insert(joined.tags.end(), ex.tags.begin(), ex.tags.end());
    }
    oracle = std::make_unique<sp::OracleTagger>(joined);
  }
  const sp::Tagger& active = tagger ? *tagger : static_cast<const sp::Tagger&>(*oracle);

  auto mode = sp::mode_from_name(opt.mode);
  if (!mode) throw std::runtime_error("unknown mode: " + opt.mode);
  sp::Session session(sp::SessionConfig(*mode, opt.max_buffer, opt.capitalize), active);

  auto emit_record = [&](const sp::StepResult& step) {
    nlohmann::json record;
    auto& finalized = record["finalized"] = nlohmann::json::array();
    for (const auto& sentence : step.finalized) {
      finalized.push_back(sp::render(sentence.tagged, opt.capitalize));
    }
    record["hypothesis"] = sp::render(step.hypothesis, opt.capitalize);
    std::cout << record.dump() << '\n' << std::flush;
  };

  std::string line;
  std::size_t index = 0;
  while (std::getline(std::cin, line)) {
    sp::Segment segment;
    segment.source_index = index++;
    segment.tokens = sp::tokenize(line);
    emit_record(session.push(segment));
  }
  emit_record(session.flush());
  return 0;
}

struct EvalOptions {
  std::string ref;
  std::string hyp;
  std::string format = "table";
  std::uint64_t seed = 1;
};

sp::metrics::EvalReport eval_files(const std::string& ref_path, const std::string& hyp_path) {
  auto ref = load_labeled(ref_path);
  auto hyp = load_labeled(hyp_path);
  if (ref.size() != hyp.size()) {
    throw std::runtime_error("record counts differ: " + std::to_string(ref.size()) + " vs " +
                             std::to_string(hyp.size()));
  }
  std::vector<sp::Token> ref_tokens, hyp_tokens;
  std::vector<sp::PunctTag> ref_tags, hyp_tags;
  for (const auto& ex : ref) {
    ref_tokens.insert(ref_tokens.end(), ex.tokens.begin(), ex.tokens.end());
    ref_tags.insert(ref_tags.end(), ex.tags.begin(), ex.tags.end());
  }
  for (const auto& ex : hyp) {
    hyp_tokens.insert(hyp_tokens.end(), ex.tokens.begin(), ex.tokens.end());
    hyp_tags.insert(hyp_tags.end(), ex.tags.begin(), ex.tags.end());
  }
  sp::metrics::verify_alignment(ref_tokens, hyp_tokens);
  return sp::metrics::EvalReport::from_tags(ref_tags, hyp_tags);
}

int cmd_eval(const EvalOptions& opt) {
  auto report = eval_files(opt.ref, opt.hyp);
  if (opt.format == "jsonl") {
    std::cout << sp::metrics::report_to_json(report) << '\n';
  } else {
    std::cout << sp::metrics::report_to_table(report, "eval");
  }
  return 0;
}

struct ExperimentOptions {
  std::string corpus;
  std::string tagger = "oracle";
  std::string modes = "in_segment,left_context,right_context,streaming";
  std::string policies = "pause_noise:5:40:0.2";
  std::size_t max_buffer = 200;
  std::uint64_t seed = 1;
  std::string output_dir;
  std::string format = "table";
};

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, sep)) {
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

sp::SegPolicy parse_policy(const std::string& text) {
  auto fields = split_list(text, ':');
  if (fields.size() != 4) {
    throw std::runtime_error("policy must be kind:mean:max:affinity, got '" + text + "'");
  }
  sp::SegPolicy policy;
  auto kind = sp::seg_kind_from_name(fields[0]);
  if (!kind) throw std::runtime_error("unknown segmentation kind: " + fields[0]);
  policy.kind = *kind;
  policy.mean_len = std::stoul(fields[1]);
  policy.max_len = std::stoul(fields[2]);
  policy.boundary_affinity = std::stod(fields[3]);
  policy.validate();
  return policy;
}

int cmd_experiment(const ExperimentOptions& opt) {
  auto spec = parse_tagger_spec(opt.tagger);
  auto shared = make_shared_tagger(spec);
  auto corpus = load_labeled(opt.corpus);
  if (corpus.empty()) throw std::runtime_error("no labeled examples in " + opt.corpus);

  std::vector<sp::Mode> modes;
  for (const auto& name : split_list(opt.modes, ',')) {
    auto mode = sp::mode_from_name(name);
    if (!mode) throw std::runtime_error("unknown mode: " + name);
    modes.push_back(*mode);
  }
  std::vector<std::string> policy_specs = split_list(opt.policies, ';');
  if (modes.empty() || policy_specs.empty()) {
    throw std::runtime_error("experiment needs at least one mode and one policy");
  }

  if (!opt.output_dir.empty()) std::filesystem::create_directories(opt.output_dir);
  std::ofstream cells_out;
  if (!opt.output_dir.empty()) {
    cells_out.open(std::filesystem::path(opt.output_dir) / "cells.jsonl");
  }

  std::string table;
  for (const auto& policy_text : policy_specs) {
    sp::SegPolicy base_policy = parse_policy(policy_text);

    // One segmentation per example, shared across modes.
    std::vector<std::vector<sp::Segment>> segmentations;
    segmentations.reserve(corpus.size());
    for (std::size_t k = 0; k < corpus.size(); ++k) {
      sp::SegPolicy policy = base_policy;
      policy.seed = sp::derive_seed(opt.seed, k);
      segmentations.push_back(sp::simulate(corpus[k].tokens, corpus[k].tags, policy));
    }

    struct Cell {
      sp::Mode mode;
      sp::metrics::EvalReport report;
    };
    std::vector<Cell> cells;
    for (sp::Mode mode : modes) {
      sp::metrics::PunctScore punct;
      sp::metrics::SegScore seg;
      for (std::size_t k = 0; k < corpus.size(); ++k) {
        const auto& ex = corpus[k];
        sp::SessionConfig config(mode, opt.max_buffer);
        std::vector<sp::Sentence> sentences;
        if (shared) {
          sentences = sp::run_batch(ex.tokens, segmentations[k], config, *shared);
        } else {
          sp::OracleTagger oracle(ex);
          sentences = sp::run_batch(ex.tokens, segmentations[k], config, oracle);
        }
        auto flat = sp::flatten(sentences);
        std::vector<sp::Token> hyp_tokens;
        std::vector<sp::PunctTag> hyp_tags;
        for (const auto& tt : flat) {
          hyp_tokens.push_back(tt.token);
          hyp_tags.push_back(tt.tag);
        }
        sp::metrics::verify_alignment(ex.tokens, hyp_tokens);
        punct = sp::metrics::score_punctuation(punct, sp::metrics::score_punctuation(ex.tags, hyp_tags));
        seg.counts += sp::metrics::score_segmentation(ex.tags, hyp_tags).counts;
      }
      sp::metrics::EvalReport report;
      report.punctuation = punct;
      report.segmentation = seg;
      cells.push_back({mode, std::move(report)});
    }

    const sp::metrics::EvalReport* baseline = nullptr;
    for (auto& cell : cells) {
      if (cell.mode == sp::Mode::InSegment) baseline = &cell.report;
    }
    if (baseline) {
      for (auto& cell : cells) {
        if (cell.mode != sp::Mode::InSegment) cell.report.add_gains_against(*baseline);
      }
    }

    table += "policy " + policy_text + "  (corpus " + opt.corpus + ", " +
             std::to_string(corpus.size()) + " examples, tagger " + opt.tagger + ")\n";
    table += "  mode            Seg-P  Seg-R  Seg-F1  F1-gain  Seg-F0.5  F0.5-gain  Punct-F1\n";
    for (const auto& cell : cells) {
      char row[160];
      const auto& seg = cell.report.segmentation;
      std::string f1_gain = "      -", f05_gain = "        -";
      if (cell.report.gains) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%+6.1f%%", cell.report.gains->seg_f1);
        f1_gain = buf;
        std::snprintf(buf, sizeof(buf), "%+8.1f%%", cell.report.gains->seg_f05);
        f05_gain = buf;
      }
      std::snprintf(row, sizeof(row), "  %-14s  %5.1f  %5.1f  %6.1f  %s  %8.1f  %s  %8.1f\n",
                    std::string(sp::mode_name(cell.mode)).c_str(), seg.precision(), seg.recall(),
                    seg.f1(), f1_gain.c_str(), seg.f05(), f05_gain.c_str(),
                    cell.report.punctuation.overall.f(1.0));
      table += row;

      if (cells_out.is_open() || opt.format == "jsonl") {
        nlohmann::json line = nlohmann::json::parse(sp::metrics::report_to_json(cell.report));
        line["mode"] = sp::mode_name(cell.mode);
        line["policy"] = policy_text;
        if (cells_out.is_open()) cells_out << line.dump() << '\n';
        if (opt.format == "jsonl") std::cout << line.dump() << '\n';
      }
    }
    table += "\n";
  }

  if (opt.format != "jsonl") std::cout << table;
  if (!opt.output_dir.empty()) {
    std::ofstream table_out(std::filesystem::path(opt.output_dir) / "table.txt");
    table_out << table;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"streaming punctuation toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file; command-line flags win");
  app.fallthrough();  // inherited: app-level flags may follow a subcommand

  PrepareOptions prepare_opt;
  auto* prepare = app.add_subcommand("prepare", "turn paragraph-per-line text into labeled records");
  prepare->add_option("--input", prepare_opt.input, "paragraph-per-line UTF-8 text")->required();
  prepare->add_option("--output", prepare_opt.output, "labeled jsonl output")->required();
  prepare->add_option("--max-tokens", prepare_opt.max_tokens,
                      "trim each paragraph to its last sentence within this many tokens");
  prepare->add_option("--seed", prepare_opt.seed, "unused; every command takes --seed");

  SplitOptions split_opt;
  auto* split = app.add_subcommand("split", "deterministic train/valid split");
  split->add_option("--input", split_opt.input)->required();
  split->add_option("--train", split_opt.train_out)->required();
  split->add_option("--valid", split_opt.valid_out)->required();
  split->add_option("--fraction", split_opt.fraction, "validation fraction");
  split->add_option("--cap", split_opt.cap, "validation size cap");
  split->add_option("--seed", split_opt.seed);

  TrainOptionsCli train_opt;
  auto* train = app.add_subcommand("train", "train the averaged-perceptron tagger");
  train->add_option("--input", train_opt.input)->required();
  train->add_option("--model", train_opt.model_out)->required();
  train->add_option("--epochs", train_opt.epochs);
  train->add_option("--look-behind", train_opt.look_behind);
  train->add_option("--look-ahead", train_opt.look_ahead);
  train->add_option("--seed", train_opt.seed);

  TagOptions tag_opt;
  auto* tag = app.add_subcommand("tag", "re-tag labeled records with a tagger");
  tag->add_option("--input", tag_opt.input)->required();
  tag->add_option("--output", tag_opt.output)->required();
  tag->add_option("--tagger", tag_opt.tagger, "oracle | model:<path> | external:<cmd>");
  tag->add_option("--seed", tag_opt.seed, "unused; every command takes --seed");

  SimulateOptions sim_opt;
  auto* simulate = app.add_subcommand("simulate", "cut labeled records into decoder-style segments");
  simulate->add_option("--input", sim_opt.input)->required();
  simulate->add_option("--output", sim_opt.output, "segment lines ('-' or empty for stdout)");
  simulate->add_option("--seg-kind", sim_opt.kind, "fixed | geometric | pause_noise")
      ->check(CLI::IsMember({"fixed", "geometric", "pause_noise"}));
  simulate->add_option("--seg-mean", sim_opt.mean, "mean tokens per segment");
  simulate->add_option("--seg-max", sim_opt.max, "forced split cap");
  simulate->add_option("--seg-affinity", sim_opt.affinity, "chance a cut snaps to a true boundary");
  simulate->add_option("--seed", sim_opt.seed);

  StreamOptions stream_opt;
  auto* stream = app.add_subcommand("stream",
                                    "read one segment per stdin line, write one step record per line");
  stream->add_option("--tagger", stream_opt.tagger, "oracle | model:<path> | external:<cmd>")
      ->required();
  stream->add_option("--reference", stream_opt.reference, "labeled jsonl backing an oracle tagger");
  stream->add_option("--mode", stream_opt.mode,
                     "in_segment | left_context | right_context | streaming")
      ->check(CLI::IsMember({"in_segment", "left_context", "right_context", "streaming"}));
  stream->add_option("--max-buffer", stream_opt.max_buffer, "forced-flush cap in tokens");
  stream->add_flag("--capitalize,!--no-capitalize", stream_opt.capitalize,
                   "capitalize rendered output");
  stream->add_option("--seed", stream_opt.seed, "unused; every command takes --seed");

  EvalOptions eval_opt;
  auto* eval = app.add_subcommand("eval", "score hypothesis tags against reference tags");
  eval->add_option("--ref", eval_opt.ref)->required();
  eval->add_option("--hyp", eval_opt.hyp)->required();
  eval->add_option("--format", eval_opt.format, "table | jsonl")
      ->check(CLI::IsMember({"table", "jsonl"}));
  eval->add_option("--seed", eval_opt.seed, "unused; every command takes --seed");

  ExperimentOptions exp_opt;
  auto* experiment = app.add_subcommand("experiment", "mode x policy grid with gain columns");
  experiment->add_option("--corpus", exp_opt.corpus, "labeled jsonl reference corpus")->required();
  experiment->add_option("--tagger", exp_opt.tagger, "oracle | model:<path> | external:<cmd>");
  experiment->add_option("--modes", exp_opt.modes, "comma-separated mode list");
  experiment->add_option("--policies", exp_opt.policies,
                         "semicolon-separated kind:mean:max:affinity list");
  experiment->add_option("--max-buffer", exp_opt.max_buffer);
  experiment->add_option("--seed", exp_opt.seed);
  experiment->add_option("--output-dir", exp_opt.output_dir, "write cells.jsonl and table.txt here");
  experiment->add_option("--format", exp_opt.format, "table | jsonl")
      ->check(CLI::IsMember({"table", "jsonl"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (prepare->parsed()) return cmd_prepare(prepare_opt);
    if (split->parsed()) return cmd_split(split_opt);
    if (train->parsed()) return cmd_train(train_opt);
    if (tag->parsed()) return cmd_tag(tag_opt);
    if (simulate->parsed()) return cmd_simulate(sim_opt);
    if (stream->parsed()) return cmd_stream(stream_opt);
    if (eval->parsed()) return cmd_eval(eval_opt);
    if (experiment->parsed()) return cmd_experiment(exp_opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
