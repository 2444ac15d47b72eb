#include "streampunct/external_tagger.hpp"

#include <json.hpp>

namespace streampunct {

ExternalTagger::ExternalTagger(const std::string& command) : process_(command) {}

std::vector<PunctTag> ExternalTagger::predict(std::span<const Token> tokens) const {
  if (tokens.empty()) return {};
  nlohmann::json request = nlohmann::json::array();
  for (const auto& t : tokens) request.push_back(t.text);

  std::lock_guard lock(mutex_);
  process_.write_line(request.dump());
  nlohmann::json reply = nlohmann::json::parse(process_.read_line());
  if (!reply.is_array() || reply.size() != tokens.size()) {
    throw std::runtime_error("external tagger returned " + std::to_string(reply.size()) +
                             " tags for " + std::to_string(tokens.size()) + " tokens");
  }
  std::vector<PunctTag> tags;
  tags.reserve(tokens.size());
  for (const auto& name : reply) {
    auto tag = tag_from_name(name.get<std::string>());
    if (!tag) throw std::runtime_error("external tagger returned unknown tag: " + name.dump());
    tags.push_back(*tag);
  }
  return tags;
}

}  // namespace streampunct
