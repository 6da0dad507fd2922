#pragma once

#include <stdexcept>

namespace isteg {

struct PayloadTooLongError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct EmptyTraceError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct EmptyLexiconError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct EmptyCorpusError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct EmptyInputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ZeroDurationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Bad config file, bad CLI value, unreadable input file.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace isteg
