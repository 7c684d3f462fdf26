#pragma once

#include <stdexcept>
#include <string>

namespace polarseq {

// File-system failure (open/read/write), as opposed to validation failures
// which use std::invalid_argument. Lets callers map the two to different
// exit codes.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace polarseq
