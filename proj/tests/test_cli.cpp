#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "streampunct/datapipe.hpp"
#include "streampunct/external_tagger.hpp"
#include "streampunct/subprocess.hpp"

using namespace streampunct;
namespace fs = std::filesystem;

namespace {

const char* kCli = STREAMPUNCT_CLI_PATH;
const char* kEchoTagger = ECHO_TAGGER_PATH;

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("streampunct_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path file(const std::string& name) const { return path / name; }
};

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p);
  out << content;
}

// Runs a shell command, captures combined stdout+stderr, returns exit code.
int run(const std::string& command, std::string* output = nullptr) {
  FILE* pipe = popen((command + " 2>&1").c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string captured;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) captured.append(buf, n);
  const int status = pclose(pipe);
  if (output) *output = captured;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string quoted(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_CASE("external tagger speaks the line protocol") {
  ExternalTagger tagger(kEchoTagger);
  std::vector<Token> tokens = {Token{"it"}, Token{"can"}, Token{"happen"}};
  CHECK(tagger.predict(tokens) ==
        std::vector<PunctTag>{PunctTag::None, PunctTag::None, PunctTag::Period});

  std::vector<Token> question = {Token{"right"}};
  CHECK(tagger.predict(question) == std::vector<PunctTag>{PunctTag::Question});
  CHECK(tagger.predict(std::vector<Token>{}).empty());

  // Repeated calls over the same pipe.
  for (int i = 0; i < 20; ++i) {
    CHECK(tagger.predict(tokens).size() == 3);
  }
}

TEST_CASE("prepare writes labeled records and reports drops") {
  TempDir dir;
  write_file(dir.file("in.txt"),
             "It can happen in New York City, right?\n"
             "?!? ---\n"
             "\n"
             "Stop! Now...\n");
  std::string log;
  const int rc = run(std::string(kCli) + " prepare --input " + quoted(dir.file("in.txt")) +
                         " --output " + quoted(dir.file("out.jsonl")),
                     &log);
  CHECK(rc == 0);
  CHECK(log.find("prepared 2 records") != std::string::npos);
  CHECK(log.find("1 empty after cleaning") != std::string::npos);

  std::ifstream in(dir.file("out.jsonl"));
  auto examples = read_jsonl(in);
  REQUIRE(examples.size() == 2);
  CHECK(examples[0].tokens.size() == 8);
  CHECK(examples[0].tags.back() == PunctTag::Question);
}

TEST_CASE("prepare handles an empty input file") {
  TempDir dir;
  write_file(dir.file("empty.txt"), "");
  const int rc = run(std::string(kCli) + " prepare --input " + quoted(dir.file("empty.txt")) +
                     " --output " + quoted(dir.file("out.jsonl")));
  CHECK(rc == 0);
  CHECK(fs::file_size(dir.file("out.jsonl")) == 0);
}

TEST_CASE("exit codes: usage 1, data error 2") {
  std::string ignored;
  CHECK(run(std::string(kCli) + " prepare --no-such-flag", &ignored) == 1);
  CHECK(run(std::string(kCli), &ignored) == 1);

  TempDir dir;
  CHECK(run(std::string(kCli) + " prepare --input " + quoted(dir.file("missing.txt")) +
            " --output " + quoted(dir.file("out.jsonl"))) == 2);

  write_file(dir.file("ref.jsonl"), "{\"tokens\": [\"a\"], \"tags\": [\"O\"]}\n");
  write_file(dir.file("hyp.jsonl"), "{\"tokens\": [\"b\"], \"tags\": [\"O\"]}\n");
  CHECK(run(std::string(kCli) + " eval --ref " + quoted(dir.file("ref.jsonl")) + " --hyp " +
            quoted(dir.file("hyp.jsonl"))) == 2);
}

TEST_CASE("stream answers each input line before the next arrives") {
  TempDir dir;
  LabeledExample ref = strip_and_tag("It can happen in New York City, right?");
  write_file(dir.file("ref.jsonl"), to_jsonl_line(ref) + "\n");

  Subprocess proc(std::string(kCli) + " stream --tagger oracle --reference " +
                  quoted(dir.file("ref.jsonl")));
  proc.write_line("it can happen");
  auto first = nlohmann::json::parse(proc.read_line());
  CHECK(first["finalized"].empty());
  CHECK(first["hypothesis"] == "It can happen");

  proc.write_line("in new york city right");
  auto second = nlohmann::json::parse(proc.read_line());
  REQUIRE(second["finalized"].size() == 1);
  CHECK(second["finalized"][0] == "It can happen in new york city, right?");
  CHECK(second["hypothesis"] == "");

  proc.close_stdin();
  auto last = nlohmann::json::parse(proc.read_line());
  CHECK(last["finalized"].empty());
  CHECK(proc.wait() == 0);
}

TEST_CASE("stream normalizes raw written-form input lines") {
  TempDir dir;
  LabeledExample ref = strip_and_tag("It can happen in New York City, right?");
  write_file(dir.file("ref.jsonl"), to_jsonl_line(ref) + "\n");

  Subprocess proc(std::string(kCli) + " stream --tagger oracle --reference " +
                  quoted(dir.file("ref.jsonl")) + " --no-capitalize");
  proc.write_line("It Can HAPPEN in new YORK city right");
  auto record = nlohmann::json::parse(proc.read_line());
  REQUIRE(record["finalized"].size() == 1);
  CHECK(record["finalized"][0] == "it can happen in new york city, right?");
  proc.close_stdin();
  proc.read_line();
  CHECK(proc.wait() == 0);
}

TEST_CASE("stream works with an external tagger") {
  Subprocess proc(std::string(kCli) + " stream --tagger 'external:" + std::string(kEchoTagger) +
                  "' --no-capitalize");
  proc.write_line("hello there");
  auto record = nlohmann::json::parse(proc.read_line());
  REQUIRE(record["finalized"].size() == 1);
  CHECK(record["finalized"][0] == "hello there.");
  proc.close_stdin();
  proc.read_line();
  CHECK(proc.wait() == 0);
}

TEST_CASE("tag plus eval on identical files yields a perfect report") {
  TempDir dir;
  LabeledExample ref = strip_and_tag("It can happen in New York City, right?");
  write_file(dir.file("ref.jsonl"), to_jsonl_line(ref) + "\n");

  const int rc = run(std::string(kCli) + " tag --input " + quoted(dir.file("ref.jsonl")) +
                     " --output " + quoted(dir.file("hyp.jsonl")) + " --tagger oracle");
  CHECK(rc == 0);

  std::string out;
  const int rc2 = run(std::string(kCli) + " eval --ref " + quoted(dir.file("ref.jsonl")) +
                          " --hyp " + quoted(dir.file("hyp.jsonl")) + " --format jsonl",
                      &out);
  CHECK(rc2 == 0);
  auto report = nlohmann::json::parse(out.substr(0, out.find('\n')));
  CHECK(report["punctuation"]["OVERALL"]["f1"] == 100.0);
  CHECK(report["segmentation"]["f1"] == 100.0);
  CHECK(report["segmentation"]["f05"] == 100.0);
}

TEST_CASE("simulate emits segment lines that cover the stream") {
  TempDir dir;
  LabeledExample ref = strip_and_tag("It can happen in New York City, right?");
  write_file(dir.file("ref.jsonl"), to_jsonl_line(ref) + "\n");

  std::string out;
  const int rc = run(std::string(kCli) + " simulate --input " + quoted(dir.file("ref.jsonl")) +
                         " --seg-kind fixed --seg-mean 3 --seg-max 100 --output -",
                     &out);
  CHECK(rc == 0);
  CHECK(out.find("it can happen\n") != std::string::npos);
  CHECK(out.find("in new york\n") != std::string::npos);
  CHECK(out.find("city right\n") != std::string::npos);
}

TEST_CASE("experiment prints a grid with gain columns") {
  TempDir dir;
  std::string rows;
  for (int i = 0; i < 12; ++i) {
    rows += to_jsonl_line(strip_and_tag("It can happen in New York City, right? We ship today.")) +
            "\n";
  }
  write_file(dir.file("corpus.jsonl"), rows);

  std::string out;
  const int rc = run(std::string(kCli) + " experiment --corpus " + quoted(dir.file("corpus.jsonl")) +
                         " --tagger oracle --policies 'fixed:3:50:0' --seed 3 --output-dir " +
                         quoted(dir.file("expdir")),
                     &out);
  CHECK(rc == 0);
  CHECK(out.find("in_segment") != std::string::npos);
  CHECK(out.find("streaming") != std::string::npos);
  CHECK(out.find("F0.5-gain") != std::string::npos);
  CHECK(fs::exists(dir.file("expdir") / "cells.jsonl"));
  CHECK(fs::exists(dir.file("expdir") / "table.txt"));
}

TEST_CASE("config file supplies defaults and flags win") {
  TempDir dir;
  write_file(dir.file("in.txt"), "Stop! Now we go home.\n");
  write_file(dir.file("conf.ini"),
             "[prepare]\nmax-tokens=3\n");

  std::string log;
  int rc = run(std::string(kCli) + " --config " + quoted(dir.file("conf.ini")) +
                   " prepare --input " + quoted(dir.file("in.txt")) + " --output " +
                   quoted(dir.file("out.jsonl")),
               &log);
  CHECK(rc == 0);
  {
    std::ifstream in(dir.file("out.jsonl"));
    auto examples = read_jsonl(in);
    REQUIRE(examples.size() == 1);
    CHECK(examples[0].tokens.size() == 1);  // trimmed at the config limit
  }

  rc = run(std::string(kCli) + " --config " + quoted(dir.file("conf.ini")) +
           " prepare --max-tokens 250 --input " + quoted(dir.file("in.txt")) + " --output " +
           quoted(dir.file("out2.jsonl")));
  CHECK(rc == 0);
  std::ifstream in(dir.file("out2.jsonl"));
  auto examples = read_jsonl(in);
  REQUIRE(examples.size() == 1);
  CHECK(examples[0].tokens.size() == 5);  // flag overrode the config file
}
