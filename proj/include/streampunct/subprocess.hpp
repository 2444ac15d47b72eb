#ifndef STREAMPUNCT_SUBPROCESS_HPP
#define STREAMPUNCT_SUBPROCESS_HPP

#include <string>

namespace streampunct {

/// Child process with line-oriented stdin/stdout pipes, run via /bin/sh -c.
class Subprocess {
 public:
  explicit Subprocess(const std::string& command);
  ~Subprocess();

  Subprocess(const Subprocess&) = delete;
  Subprocess& operator=(const Subprocess&) = delete;

  void write_line(const std::string& line);
  /// Blocks for the next line (without the newline). Throws on EOF.
  std::string read_line();
  void close_stdin();
  /// Waits for exit; returns the exit status.
  int wait();

 private:
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string read_buffer_;
};

}  // namespace streampunct

#endif
