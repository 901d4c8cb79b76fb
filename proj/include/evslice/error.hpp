#ifndef EVSLICE_ERROR_HPP
#define EVSLICE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace evslice {

// Data/usage error raised by library operations. The message is a single
// line and carries location info (byte offset, line number) where known.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

[[noreturn]] inline void fail(const std::string& msg) {
    throw Error(msg);
}

} // namespace evslice

#endif
