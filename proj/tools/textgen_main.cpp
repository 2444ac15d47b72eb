#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "streampunct/datapipe.hpp"
#include "streampunct/textgen.hpp"

namespace sp = streampunct;

// Emits a deterministic synthetic corpus, either as written-form
// paragraph-per-line text (the prepare command's input format) or directly
// as labeled jsonl records.
int main(int argc, char** argv) {
  CLI::App app{"synthetic corpus generator"};
  std::size_t paragraphs = 1000;
  std::uint64_t seed = 1;
  std::string format = "text";
  std::string output;
  bool serial = false;
  app.add_option("--paragraphs", paragraphs, "number of paragraph rows");
  app.add_option("--seed", seed);
  app.add_option("--format", format, "text | jsonl");
  app.add_option("--output", output, "output path ('-' or empty for stdout)");
  app.add_flag("--serial-tokens", serial, "replace every word with a unique serial token");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  sp::TextGenOptions opts;
  opts.seed = seed;
  opts.serial_tokens = serial;
  auto corpus = sp::generate_corpus(opts, paragraphs);

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!output.empty() && output != "-") {
    file.open(output);
    if (!file) {
      std::cerr << "error: cannot write " << output << "\n";
      return 2;
    }
    out = &file;
  }
  if (format == "jsonl") {
    sp::write_jsonl(*out, corpus);
  } else {
    for (const auto& ex : corpus) *out << sp::written_form(ex) << '\n';
  }
  return 0;
}
