// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 crowdbench authors

#pragma once

#include <chrono>
#include <optional>
#include <string>

namespace crowdbench {

/// Child process running `/bin/sh -c command`, with its stdin and stdout
/// attached to one end of a Unix socket pair. Line-oriented I/O only.
class LineProcess {
 public:
  explicit LineProcess(const std::string &command);
  ~LineProcess();

  LineProcess(const LineProcess &) = delete;
  LineProcess &operator=(const LineProcess &) = delete;
  LineProcess(LineProcess &&) = delete;
  LineProcess &operator=(LineProcess &&) = delete;

  /// Writes `line` plus '\n'. False if the child has gone away.
  bool write_line(const std::string &line);

  enum class ReadStatus { Ok, Timeout, Closed };

  /// Reads up to the next '\n' (excluded) within `timeout`.
  ReadStatus read_line(std::string &line, std::chrono::milliseconds timeout);

 private:
  int fd_{-1};
  int pid_{-1};
  std::string buffer_;
};

}  // namespace crowdbench
