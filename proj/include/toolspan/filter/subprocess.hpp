#pragma once

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <csignal>
#include <chrono>
#include <cstring>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "toolspan/core/errors.hpp"
#include "toolspan/core/text.hpp"
#include "toolspan/filter/executor.hpp"

namespace toolspan {

struct ProcessResult {
    bool timed_out = false;
    int exit_status = -1;  // valid when exited normally
    bool signaled = false;
    std::string stdout_text;
};

// Spawns argv in its own process group, writes `input` to its stdin, captures
// stdout (stderr is discarded) and kills the whole group once `timeout`
// elapses.
inline ProcessResult run_process(const std::vector<std::string>& argv, std::string_view input, Seconds timeout) {
    if (argv.empty()) throw ConfigError("empty runner command");
    // A runner that exits without draining stdin must not kill us with SIGPIPE.
    static const bool sigpipe_ignored = [] {
        std::signal(SIGPIPE, SIG_IGN);
        return true;
    }();
    (void)sigpipe_ignored;
    int in_pipe[2];
    int out_pipe[2];
    if (pipe2(in_pipe, O_CLOEXEC) != 0) throw Error(Error::Category::Config, "pipe failed");
    if (pipe2(out_pipe, O_CLOEXEC) != 0) {
        close(in_pipe[0]);
        close(in_pipe[1]);
        throw Error(Error::Category::Config, "pipe failed");
    }

    std::vector<char*> args;
    for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);

    const pid_t pid = fork();
    if (pid < 0) throw Error(Error::Category::Config, std::string("fork failed: ") + std::strerror(errno));
    if (pid == 0) {
        setpgid(0, 0);
        dup2(in_pipe[0], STDIN_FILENO);
        dup2(out_pipe[1], STDOUT_FILENO);
        int devnull = open("/dev/null", O_WRONLY);
        if (devnull >= 0) dup2(devnull, STDERR_FILENO);
        execvp(args[0], args.data());
        _exit(127);
    }
    setpgid(pid, pid);
    close(in_pipe[0]);
    close(out_pipe[1]);

    const auto deadline = std::chrono::steady_clock::now() + std::chrono::duration_cast<std::chrono::nanoseconds>(timeout);
    ProcessResult result;

    // The snippet is small; write it fully unless the child stops reading.
    fcntl(in_pipe[1], F_SETFL, O_NONBLOCK);
    fcntl(out_pipe[0], F_SETFL, O_NONBLOCK);
    std::size_t written = 0;
    int in_fd = in_pipe[1];
    if (input.empty()) {
        close(in_fd);
        in_fd = -1;
    }
    int out_fd = out_pipe[0];
    char buf[4096];
    while (out_fd >= 0) {
        const auto now = std::chrono::steady_clock::now();
        if (now >= deadline) {
            result.timed_out = true;
            break;
        }
        const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
        pollfd fds[2];
        nfds_t nfds = 0;
        fds[nfds++] = {out_fd, POLLIN, 0};
        if (in_fd >= 0) fds[nfds++] = {in_fd, POLLOUT, 0};
        int rc = poll(fds, nfds, static_cast<int>(std::max<long long>(1, left)));
        if (rc < 0) {
            if (errno == EINTR) continue;
            break;
        }
        if (in_fd >= 0 && nfds > 1 && (fds[1].revents & (POLLOUT | POLLERR | POLLHUP))) {
            ssize_t n = write(in_fd, input.data() + written, input.size() - written);
            if (n > 0) written += static_cast<std::size_t>(n);
            if (n < 0 && errno != EAGAIN) written = input.size();
            if (written >= input.size()) {
                close(in_fd);
                in_fd = -1;
            }
        }
        if (fds[0].revents & (POLLIN | POLLHUP | POLLERR)) {
            ssize_t n = read(out_fd, buf, sizeof buf);
            if (n > 0) {
                result.stdout_text.append(buf, static_cast<std::size_t>(n));
            } else if (n == 0 || errno != EAGAIN) {
                close(out_fd);
                out_fd = -1;
            }
        }
    }
    if (in_fd >= 0) close(in_fd);
    if (out_fd >= 0) close(out_fd);

    int status = 0;
    if (result.timed_out) {
        kill(-pid, SIGKILL);
        waitpid(pid, &status, 0);
        return result;
    }
    // stdout closed; the child may still be running until the deadline. The
    // leader is left unreaped (WNOWAIT) until its group has been killed, so the
    // group id cannot be recycled in between.
    for (;;) {
        siginfo_t info{};
        int r = waitid(P_PID, static_cast<id_t>(pid), &info, WEXITED | WNOHANG | WNOWAIT);
        if (r == 0 && info.si_pid == pid) break;
        if (r < 0 && errno != EINTR) break;
        if (std::chrono::steady_clock::now() >= deadline) {
            result.timed_out = true;
            kill(-pid, SIGKILL);
            waitpid(pid, &status, 0);
            return result;
        }
        usleep(2000);
    }
    kill(-pid, SIGKILL);
    waitpid(pid, &status, 0);
    if (WIFEXITED(status)) result.exit_status = WEXITSTATUS(status);
    if (WIFSIGNALED(status)) result.signaled = true;
    return result;
}

inline std::vector<std::string> split_command(std::string_view command) {
    std::vector<std::string> out;
    std::string cur;
    char quote = 0;
    bool have = false;
    for (char c : command) {
        if (quote) {
            if (c == quote)
                quote = 0;
            else
                cur.push_back(c);
        } else if (c == '\'' || c == '"') {
            quote = c;
            have = true;
        } else if (text::is_space(c)) {
            if (have || !cur.empty()) out.push_back(std::move(cur));
            cur.clear();
            have = false;
        } else {
            cur.push_back(c);
        }
    }
    if (have || !cur.empty()) out.push_back(std::move(cur));
    return out;
}

// Executor adapter for the external runner process:
//   <runner...> --mode exec   (snippet on stdin)
// exit 0 -> Captured(trimmed stdout); any other exit -> Failed;
// still running at the deadline -> killed, Timeout.
class SubprocessExecutor final : public Executor {
public:
    explicit SubprocessExecutor(std::vector<std::string> runner) : runner_(std::move(runner)) {
        if (runner_.empty()) throw ConfigError("empty runner command");
    }

    ExecOutcome run(const CodeSnippet& code, Seconds timeout) override {
        auto argv = runner_;
        argv.push_back("--mode");
        argv.push_back("exec");
        auto r = run_process(argv, code.source, timeout);
        if (r.timed_out) return Timeout{};
        if (r.signaled || r.exit_status != 0) return Failed{};
        return Captured{text::trim(r.stdout_text)};
    }

private:
    std::vector<std::string> runner_;
};

// Syntax-tree triviality check through the same runner:
//   <runner...> --mode check-trivial   -> exit 2 trivial, exit 3 not trivial.
class SubprocessTrivialityOracle {
public:
    explicit SubprocessTrivialityOracle(std::vector<std::string> runner, Seconds timeout = Seconds(10))
        : runner_(std::move(runner)), timeout_(timeout) {}

    // nullopt when the runner misbehaves (other exit codes, timeout).
    std::optional<bool> is_trivial(const CodeSnippet& code) const {
        auto argv = runner_;
        argv.push_back("--mode");
        argv.push_back("check-trivial");
        auto r = run_process(argv, code.source, timeout_);
        if (r.timed_out || r.signaled) return std::nullopt;
        if (r.exit_status == 2) return true;
        if (r.exit_status == 3) return false;
        return std::nullopt;
    }

private:
    std::vector<std::string> runner_;
    Seconds timeout_;
};

}  // namespace toolspan
