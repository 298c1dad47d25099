#ifndef SHOQ_SUPPORT_HPP
#define SHOQ_SUPPORT_HPP

#include <sstream>
#include <stdexcept>
#include <string>

namespace shoq {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input text.
struct ParseError : Error {
    ParseError(int line, int col, const std::string& what)
        : Error("parse error at " + std::to_string(line) + ":" + std::to_string(col) + ": " + what),
          line(line),
          col(col) {}
    int line;
    int col;
};

// Well-formed input that violates a side condition (e.g. a non-simple role
// inside a number restriction).
struct ValidationError : Error {
    using Error::Error;
};

// A configurable budget (ILP nodes, engine steps, oracle enumeration) was
// exhausted.  Never converted into a SAT/UNSAT answer.
struct ResourceLimitError : Error {
    using Error::Error;
};

// An internal invariant failed.  Indicates a defect, not bad input.
struct EngineDefect : Error {
    using Error::Error;
};

namespace detail {
[[noreturn]] inline void check_failed(const char* expr, const char* file, int line) {
    std::ostringstream os;
    os << "internal check failed: " << expr << " (" << file << ":" << line << ")";
    throw EngineDefect(os.str());
}
}  // namespace detail

// Always-on invariant check; unlike assert() it survives release builds and
// surfaces as EngineDefect so the CLI can report exit code 3.
#define SHOQ_CHECK(expr) \
    do {                 \
        if (!(expr)) ::shoq::detail::check_failed(#expr, __FILE__, __LINE__); \
    } while (0)

inline void hash_combine(std::size_t& seed, std::size_t v) {
    seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

}  // namespace shoq

#endif  // SHOQ_SUPPORT_HPP
