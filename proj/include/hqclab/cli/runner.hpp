#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hqclab/cli/manifest.hpp"
#include "hqclab/cli/scenario.hpp"
#include "hqclab/core/error.hpp"

namespace hqclab::cli
{
struct Artifact
{
    std::string name;  //!< file name inside the run directory
    std::string content;
};

struct RunResult
{
    std::vector<Artifact> artifacts;  //!< primary CSV first, then summary.txt, then plots
    std::vector<StageOutcome> stages;
    int exit_code = 0;
    std::string error;

    Artifact const* find(std::string const& name) const;
    std::string const& csv() const;
    std::string const& summary() const;
};

//! Process exit code for an error kind.
int exit_code(ErrorKind kind);

//! Human-readable code table for --help.
std::string exit_code_table();

/*!
 * Run one experiment in memory.
 *
 * Library errors are caught and mapped to their exit code; a failed stage
 * check gives the StageFailure code. Nothing is written to disk.
 */
RunResult run_experiment(Scenario const& scenario);

enum class OutputFormat
{
    csv,
    summary,
};

//! Run, write the artifacts and manifest.json to `out_dir` (when given) and
//! print the primary CSV or the summary to stdout. Returns the exit code.
int run_scenario(Scenario const& scenario,
                 std::optional<std::filesystem::path> const& out_dir,
                 OutputFormat format,
                 std::size_t threads);

}  // namespace hqclab::cli
