#pragma once

#include <stdexcept>
#include <string>

namespace netdiff {

// Input/usage problems (bad files, malformed rows, unknown formats). CLI exit code 2.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Analysis-level problems (empty node intersection, infeasible instance). CLI exit code 1.
class AnalysisError : public std::runtime_error {
public:
    explicit AnalysisError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace netdiff
