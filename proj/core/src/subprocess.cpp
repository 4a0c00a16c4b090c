#include "aprkit/subprocess.hpp"

#include <cerrno>
#include <csignal>
#include <cstring>
#include <mutex>

#include <fcntl.h>
#include <poll.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

extern char** environ;

namespace aprkit::proc {

namespace {

using Clock = std::chrono::steady_clock;

void ignore_sigpipe()
{
    static std::once_flag once;
    std::call_once(once, [] { std::signal(SIGPIPE, SIG_IGN); });
}

std::string errno_message(const char* what)
{
    return std::string(what) + ": " + std::strerror(errno);
}

// Everything the child needs is prepared before fork(); between fork() and
// exec() only async-signal-safe calls are made.
struct ExecPlan {
    std::string cwd;
    std::vector<std::string> env_storage;
    std::vector<char*> envp;
    std::string command;

    ExecPlan(const std::string& cmd, const std::filesystem::path& dir, const Environment& extra)
        : cwd(dir.string())
        , command(cmd)
    {
        for (char** e = environ; e && *e; ++e) {
            std::string_view entry(*e);
            auto eq = entry.find('=');
            auto key = entry.substr(0, eq);
            bool overridden = false;
            for (const auto& [k, v] : extra) {
                if (k == key)
                    overridden = true;
            }
            if (!overridden)
                env_storage.emplace_back(entry);
        }
        for (const auto& [k, v] : extra)
            env_storage.push_back(k + "=" + v);
        for (auto& s : env_storage)
            envp.push_back(s.data());
        envp.push_back(nullptr);
    }

    [[noreturn]] void exec_in_child() const
    {
        setpgid(0, 0);
        if (!cwd.empty() && chdir(cwd.c_str()) != 0)
            _exit(127);
        const char* argv[] = { "sh", "-c", command.c_str(), nullptr };
        execve("/bin/sh", const_cast<char* const*>(argv), envp.data());
        _exit(127);
    }
};

int wait_status_to_code(int status)
{
    if (WIFEXITED(status))
        return WEXITSTATUS(status);
    return -1;
}

}  // namespace

RunResult run_shell(const std::string& command, const std::filesystem::path& cwd,
                    std::chrono::milliseconds timeout, const Environment& extra_env, std::size_t output_cap)
{
    ignore_sigpipe();
    ExecPlan plan(command, cwd, extra_env);

    int out_pipe[2];
    if (pipe2(out_pipe, O_CLOEXEC) != 0)
        throw spawn_error(errno_message("pipe2"));
    int devnull = open("/dev/null", O_RDONLY | O_CLOEXEC);

    const auto start = Clock::now();
    pid_t pid = fork();
    if (pid < 0) {
        close(out_pipe[0]);
        close(out_pipe[1]);
        if (devnull >= 0)
            close(devnull);
        throw spawn_error(errno_message("fork"));
    }
    if (pid == 0) {
        if (devnull >= 0)
            dup2(devnull, STDIN_FILENO);
        dup2(out_pipe[1], STDOUT_FILENO);
        dup2(out_pipe[1], STDERR_FILENO);
        plan.exec_in_child();
    }
    setpgid(pid, pid);
    close(out_pipe[1]);
    if (devnull >= 0)
        close(devnull);

    const int fd = out_pipe[0];
    fcntl(fd, F_SETFL, fcntl(fd, F_GETFL) | O_NONBLOCK);
    const auto deadline = start + timeout;

    RunResult result;
    std::string& out = result.output;
    char buf[4096];
    auto drain = [&] {
        for (;;) {
            ssize_t r = read(fd, buf, sizeof buf);
            if (r <= 0)
                return r;
            out.append(buf, static_cast<std::size_t>(r));
            if (out.size() > output_cap)
                out.erase(0, out.size() - output_cap);
        }
    };

    int status = 0;
    bool reaped = false;
    while (!reaped) {
        auto now = Clock::now();
        if (now >= deadline) {
            kill(-pid, SIGKILL);
            waitpid(pid, &status, 0);
            reaped = true;
            result.timed_out = true;
            break;
        }
        auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
        pollfd pfd { fd, POLLIN, 0 };
        poll(&pfd, 1, static_cast<int>(std::min<long long>(left, 50)));
        drain();
        pid_t w = waitpid(pid, &status, WNOHANG);
        if (w == pid)
            reaped = true;
    }
    // Stray grandchildren may still hold the pipe open.
    kill(-pid, SIGKILL);
    drain();
    close(fd);

    result.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start);
    result.exit_code = result.timed_out ? -1 : wait_status_to_code(status);
    return result;
}

LineChild LineChild::spawn(const std::string& command, const std::filesystem::path& cwd)
{
    ignore_sigpipe();
    ExecPlan plan(command, cwd, {});

    int to_child[2];
    int from_child[2];
    if (pipe2(to_child, O_CLOEXEC) != 0)
        throw spawn_error(errno_message("pipe2"));
    if (pipe2(from_child, O_CLOEXEC) != 0) {
        close(to_child[0]);
        close(to_child[1]);
        throw spawn_error(errno_message("pipe2"));
    }
    pid_t pid = fork();
    if (pid < 0) {
        for (int fd : { to_child[0], to_child[1], from_child[0], from_child[1] })
            close(fd);
        throw spawn_error(errno_message("fork"));
    }
    if (pid == 0) {
        dup2(to_child[0], STDIN_FILENO);
        dup2(from_child[1], STDOUT_FILENO);
        plan.exec_in_child();
    }
    setpgid(pid, pid);
    close(to_child[0]);
    close(from_child[1]);

    LineChild child;
    child.pid_ = pid;
    child.in_fd_ = to_child[1];
    child.out_fd_ = from_child[0];
    return child;
}

LineChild::LineChild(LineChild&& other) noexcept
    : pid_(std::exchange(other.pid_, -1))
    , in_fd_(std::exchange(other.in_fd_, -1))
    , out_fd_(std::exchange(other.out_fd_, -1))
    , buffer_(std::move(other.buffer_))
{
}

LineChild& LineChild::operator=(LineChild&& other) noexcept
{
    if (this != &other) {
        terminate();
        pid_ = std::exchange(other.pid_, -1);
        in_fd_ = std::exchange(other.in_fd_, -1);
        out_fd_ = std::exchange(other.out_fd_, -1);
        buffer_ = std::move(other.buffer_);
    }
    return *this;
}

LineChild::~LineChild()
{
    terminate();
}

void LineChild::write_line(std::string_view line)
{
    if (in_fd_ < 0)
        throw spawn_error("generator process is not running");
    std::string data(line);
    data.push_back('\n');
    std::size_t off = 0;
    while (off < data.size()) {
        ssize_t w = write(in_fd_, data.data() + off, data.size() - off);
        if (w < 0) {
            if (errno == EINTR)
                continue;
            throw spawn_error(errno_message("write to generator"));
        }
        off += static_cast<std::size_t>(w);
    }
}

std::optional<std::string> LineChild::read_line(std::chrono::milliseconds timeout)
{
    if (out_fd_ < 0)
        return std::nullopt;
    const auto deadline = Clock::now() + timeout;
    for (;;) {
        auto nl = buffer_.find('\n');
        if (nl != std::string::npos) {
            std::string line = buffer_.substr(0, nl);
            buffer_.erase(0, nl + 1);
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            return line;
        }
        auto now = Clock::now();
        if (now >= deadline)
            return std::nullopt;
        auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
        pollfd pfd { out_fd_, POLLIN, 0 };
        int rc = poll(&pfd, 1, static_cast<int>(std::min<long long>(left, 1000)));
        if (rc < 0 && errno != EINTR)
            return std::nullopt;
        if (rc <= 0)
            continue;
        char buf[4096];
        ssize_t r = read(out_fd_, buf, sizeof buf);
        if (r < 0 && errno == EINTR)
            continue;
        if (r <= 0)
            return std::nullopt;
        buffer_.append(buf, static_cast<std::size_t>(r));
    }
}

bool LineChild::running()
{
    if (pid_ < 0)
        return false;
    int status = 0;
    if (waitpid(pid_, &status, WNOHANG) == 0)
        return true;
    pid_ = -1;
    return false;
}

void LineChild::terminate()
{
    if (in_fd_ >= 0) {
        close(in_fd_);
        in_fd_ = -1;
    }
    if (pid_ > 0) {
        // Closing stdin asks the child to exit; give it a moment before killing.
        int status = 0;
        bool exited = false;
        for (int i = 0; i < 20 && !exited; ++i) {
            if (waitpid(pid_, &status, WNOHANG) == pid_)
                exited = true;
            else
                usleep(10 * 1000);
        }
        if (!exited) {
            kill(-pid_, SIGKILL);
            waitpid(pid_, &status, 0);
        }
        pid_ = -1;
    }
    if (out_fd_ >= 0) {
        close(out_fd_);
        out_fd_ = -1;
    }
}

}  // namespace aprkit::proc
