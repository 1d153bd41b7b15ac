#pragma once

#include <stdexcept>
#include <string>

namespace curv {

// Malformed or out-of-domain input: bad CLI arguments, unparsable files,
// nonpositive weights, and similar. CLI maps this to exit code 2.
class bad_input : public std::runtime_error {
public:
    explicit bad_input(const std::string& msg) : std::runtime_error(msg) {}
};

// A documented precondition of an operation does not hold for otherwise
// well-formed input (eps too large, square not nested, ...). Exit code 3.
class precondition_error : public std::runtime_error {
public:
    explicit precondition_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace curv
