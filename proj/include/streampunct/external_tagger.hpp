#ifndef STREAMPUNCT_EXTERNAL_TAGGER_HPP
#define STREAMPUNCT_EXTERNAL_TAGGER_HPP

#include <memory>
#include <mutex>
#include <string>

#include "streampunct/subprocess.hpp"
#include "streampunct/tagger.hpp"

namespace streampunct {

/// Adapter that delegates tagging to a child process. One request per
/// line: a JSON array of token strings; the reply line is a JSON array of
/// tag names ("O", "COMMA", "PERIOD", "QUESTION") of the same length.
/// Statelessness and determinism are the external program's obligation.
/// Calls are serialized, so one adapter can back concurrent sessions.
class ExternalTagger final : public Tagger {
 public:
  explicit ExternalTagger(const std::string& command);

  std::vector<PunctTag> predict(std::span<const Token> tokens) const override;

 private:
  mutable std::mutex mutex_;
  mutable Subprocess process_;
};

}  // namespace streampunct

#endif
