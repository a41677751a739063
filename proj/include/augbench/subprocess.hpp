//
// Copyright 2026 The Augbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef AUGBENCH_SUBPROCESS_HPP_
#define AUGBENCH_SUBPROCESS_HPP_

#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstring>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

// Minimal one-shot subprocess runner: write a payload to the child's
// stdin, collect stdout until EOF, enforce a wall-clock timeout. stderr
// is inherited so external pipelines can log freely.

namespace augbench {

class process_error : public std::runtime_error {
 public:
  explicit process_error(const std::string& what) : std::runtime_error(what) {}
};

struct ProcessResult {
  std::string output;
  int exit_code = -1;
  double elapsed_seconds = 0.0;
};

namespace subprocess_detail {

// Writes to a pipe whose reader exited must not kill the harness.
inline void ignore_sigpipe_once() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

inline void set_nonblocking(int fd) {
  const int flags = ::fcntl(fd, F_GETFL, 0);
  ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}

}  // namespace subprocess_detail

/// Runs argv with the given stdin payload. Throws process_error when the
/// process cannot be spawned or exceeds the timeout; a nonzero exit code
/// is reported in the result, not thrown.
inline ProcessResult run_process(const std::vector<std::string>& argv,
                                 const std::string& input,
                                 double timeout_seconds) {
  if (argv.empty()) throw process_error("empty command");
  subprocess_detail::ignore_sigpipe_once();

  int in_pipe[2];   // parent writes -> child stdin
  int out_pipe[2];  // child stdout -> parent reads
  if (::pipe(in_pipe) != 0 || ::pipe(out_pipe) != 0) {
    throw process_error("pipe() failed: " + std::string(std::strerror(errno)));
  }

  const auto start = std::chrono::steady_clock::now();
  const pid_t pid = ::fork();
  if (pid < 0) {
    throw process_error("fork() failed: " + std::string(std::strerror(errno)));
  }
  if (pid == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    std::vector<char*> args;
    args.reserve(argv.size() + 1);
    for (const std::string& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);
    ::execvp(args[0], args.data());
    ::_exit(127);
  }

  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  int write_fd = in_pipe[1];
  const int read_fd = out_pipe[0];
  subprocess_detail::set_nonblocking(write_fd);
  subprocess_detail::set_nonblocking(read_fd);

  const auto deadline =
      start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                  std::chrono::duration<double>(timeout_seconds));

  ProcessResult result;
  std::size_t written = 0;
  bool timed_out = false;
  char buffer[65536];

  while (true) {
    struct pollfd fds[2];
    int nfds = 0;
    fds[nfds].fd = read_fd;
    fds[nfds].events = POLLIN;
    ++nfds;
    if (write_fd >= 0) {
      fds[nfds].fd = write_fd;
      fds[nfds].events = POLLOUT;
      ++nfds;
    }
    const auto now = std::chrono::steady_clock::now();
    if (now >= deadline) {
      timed_out = true;
      break;
    }
    const auto remaining =
        std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now);
    const int rc = ::poll(fds, static_cast<nfds_t>(nfds),
                          static_cast<int>(remaining.count()) + 1);
    if (rc < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (rc == 0) {
      timed_out = true;
      break;
    }

    bool read_eof = false;
    if (fds[0].revents & (POLLIN | POLLHUP)) {
      while (true) {
        const ssize_t n = ::read(read_fd, buffer, sizeof(buffer));
        if (n > 0) {
          result.output.append(buffer, static_cast<std::size_t>(n));
        } else if (n == 0) {
          read_eof = true;
          break;
        } else {
          if (errno == EAGAIN || errno == EWOULDBLOCK) break;
          read_eof = true;
          break;
        }
      }
    }
    if (read_eof) break;

    if (write_fd >= 0 && nfds > 1 &&
        (fds[1].revents & (POLLOUT | POLLERR | POLLHUP))) {
      if (fds[1].revents & (POLLERR | POLLHUP)) {
        ::close(write_fd);  // reader is gone; stop feeding it
        write_fd = -1;
      } else {
        while (written < input.size()) {
          const ssize_t n = ::write(write_fd, input.data() + written,
                                    input.size() - written);
          if (n > 0) {
            written += static_cast<std::size_t>(n);
          } else {
            if (n < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) break;
            ::close(write_fd);
            write_fd = -1;
            break;
          }
        }
        if (written >= input.size() && write_fd >= 0) {
          ::close(write_fd);
          write_fd = -1;
        }
      }
    }
  }

  if (write_fd >= 0) ::close(write_fd);
  ::close(read_fd);

  if (timed_out) {
    ::kill(pid, SIGKILL);
    int status = 0;
    ::waitpid(pid, &status, 0);
    throw process_error("process '" + argv[0] + "' timed out after " +
                        std::to_string(timeout_seconds) + " s");
  }

  int status = 0;
  ::waitpid(pid, &status, 0);
  if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    result.exit_code = 128 + WTERMSIG(status);
  }
  result.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return result;
}

}  // namespace augbench

#endif  // AUGBENCH_SUBPROCESS_HPP_
