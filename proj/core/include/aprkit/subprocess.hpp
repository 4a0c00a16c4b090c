#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace aprkit::proc {

class spawn_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Environment = std::vector<std::pair<std::string, std::string>>;

struct RunResult {
    int exit_code = -1;  // -1 when killed by a signal
    bool timed_out = false;
    std::chrono::milliseconds elapsed { 0 };
    std::string output;  // merged stdout/stderr, tail-capped

    bool ok() const { return !timed_out && exit_code == 0; }
};

/// Runs `command` through /bin/sh in `cwd`, in its own process group.
/// On timeout the whole group is killed. Throws spawn_error if the process
/// cannot be started.
RunResult run_shell(const std::string& command, const std::filesystem::path& cwd,
                    std::chrono::milliseconds timeout, const Environment& extra_env = {},
                    std::size_t output_cap = 64 * 1024);

/// A long-lived child speaking a line protocol over its stdin/stdout.
/// stderr is inherited. Not thread-safe; callers serialize access.
class LineChild {
public:
    static LineChild spawn(const std::string& command, const std::filesystem::path& cwd = {});

    LineChild(LineChild&& other) noexcept;
    LineChild& operator=(LineChild&& other) noexcept;
    LineChild(const LineChild&) = delete;
    LineChild& operator=(const LineChild&) = delete;
    ~LineChild();

    /// Throws spawn_error if the child has gone away.
    void write_line(std::string_view line);

    /// Next line without its terminator; nullopt on EOF or timeout.
    std::optional<std::string> read_line(std::chrono::milliseconds timeout);

    bool running();
    void terminate();

private:
    LineChild() = default;

    int pid_ = -1;
    int in_fd_ = -1;
    int out_fd_ = -1;
    std::string buffer_;
};

}  // namespace aprkit::proc
