#include <iostream>
#include <string>

#include <json.hpp>

// Toy implementation of the external-tagger protocol: one JSON array of
// tokens per request line, one JSON array of tag names per reply line.
// Tags the last token of each request PERIOD ("right" gets QUESTION),
// everything else O.
int main() {
  std::string line;
  while (std::getline(std::cin, line)) {
    if (line.empty()) continue;
    nlohmann::json tokens = nlohmann::json::parse(line);
    nlohmann::json tags = nlohmann::json::array();
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i + 1 < tokens.size()) {
        tags.push_back("O");
      } else if (tokens[i].get<std::string>() == "right") {
        tags.push_back("QUESTION");
      } else {
        tags.push_back("PERIOD");
      }
    }
    std::cout << tags.dump() << '\n' << std::flush;
  }
  return 0;
}
