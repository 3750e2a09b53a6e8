#ifndef DRIFTCAUSE_ERRORS_HPP
#define DRIFTCAUSE_ERRORS_HPP

#include <stdexcept>

namespace driftcause {

/// Malformed user-supplied input: files, streams, queries naming unknown
/// features, invalid nets. The CLI maps these to exit code 2.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace driftcause

#endif  // DRIFTCAUSE_ERRORS_HPP
