#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "aprkit/language.hpp"
#include "aprkit/validation.hpp"

namespace aprkit::bench {

class manifest_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bug accounting of one benchmark.
struct BenchmarkStats {
    std::size_t bugs = 0;
    std::size_t removed = 0;
    std::size_t remained = 0;
    std::size_t attempted = 0;

    /// remained == bugs - removed and attempted <= remained.
    bool consistent() const;
};

struct ManifestBug {
    validation::BugUnderRepair bug;
    std::vector<std::string> hunk_sources;   // buggy lines per hunk, joined with '\n'
    std::vector<std::string> hunk_contexts;  // enclosing function per hunk, "" when absent
    std::vector<std::optional<std::string>> developer_fixes;  // per hunk, when known
};

/// One benchmark, read from a JSON file:
///
///   {"benchmark": str, "language": str?,
///    "stats": {"bugs", "removed", "remained", "attempted"}?,
///    "bugs": [{
///      "id": str, "language": str?, "workdir": path (relative to the manifest),
///      "hunks": [{"file", "start", "end", "fix"?, "context"?: [first, last] | "auto"}]
///        or "localize": {"fixed": dir, "files": [path], "context"?: "auto"},
///      "build_cmd"?, "test_cmd"?, "trigger_cmds"?, "trigger_tests"?, "flaky"?,
///      "timeout_s"?: 300, "selective_tests"?: true}]}
struct Manifest {
    std::filesystem::path path;
    std::string benchmark;
    std::optional<Language> language;
    std::optional<BenchmarkStats> stats;
    std::vector<ManifestBug> bugs;
};

/// Throws manifest_error naming the file and the problem.
Manifest load_manifest(const std::filesystem::path& file);

/// A single manifest file, or every *.json file of a directory in name order.
std::vector<Manifest> load_manifests(const std::filesystem::path& file_or_dir);

}  // namespace aprkit::bench
