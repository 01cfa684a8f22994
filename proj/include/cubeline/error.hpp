#pragma once

/**
 * @file error.hpp
 * @brief Exception types shared by every cubeline module.
 *
 * Three failure classes matter to callers (and map onto CLI exit codes):
 *  - invalid_input:  malformed arguments or files, violated preconditions;
 *  - resource_bound: a computation would exceed a configured size limit;
 *  - checkpoint_error: a sweep checkpoint does not match the requested run.
 */

#include <stdexcept>
#include <string>

namespace cubeline {

struct invalid_input : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct resource_bound : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct checkpoint_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

[[noreturn]] inline void fail_input(const std::string& what) { throw invalid_input(what); }

inline void require(bool cond, const char* what) {
    if (!cond) throw invalid_input(what);
}

}  // namespace detail
}  // namespace cubeline
