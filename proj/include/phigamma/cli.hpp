#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "phigamma/zq.hpp"

namespace phigamma {

struct Job {
    std::string command;
    nlohmann::json params = nlohmann::json::object();
};

struct RunConfig {
    u64 p = 3;
    int N = 12;
    int D = 60;
    int G = 4;
    int witt_length = 3;
    int m = 3;
    u64 seed = 1;
    bool timing = false;
    std::string output;
    std::vector<Job> jobs;

    nlohmann::json to_json() const;
};

enum ExitCode { kExitOk = 0, kExitNotConverged = 2, kExitPrecondition = 3 };

/// Throws PreconditionError on an invalid configuration.
void validate(const RunConfig& c);
/// Fields present in j override the ones in c.
RunConfig config_from_json(const nlohmann::json& j, RunConfig c = {});

struct JobResult {
    int exit = kExitOk;
    nlohmann::json report;
};

JobResult run_job(const RunConfig& c, const Job& job);

struct RunResult {
    int exit = kExitOk;
    nlohmann::json report;
};

/// Runs every job in order; the exit code is the largest job exit code.
RunResult run_all(const RunConfig& c);

}  // namespace phigamma
