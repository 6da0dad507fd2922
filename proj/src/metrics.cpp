#include "isteg/metrics.hpp"

#include <algorithm>
#include <cstdlib>

namespace isteg {

double ber(const Bits& sent, const Bits& received) {
    const std::size_t overlap = std::min(sent.size(), received.size());
    const std::size_t longest = std::max(sent.size(), received.size());

    std::size_t errors = longest - overlap; // inserted or deleted symbols count as errors
    for (std::size_t i = 0; i < overlap; ++i) {
        if (sent[i] != received[i]) ++errors;
    }
    return static_cast<double>(errors) / static_cast<double>(std::max<std::size_t>(longest, 1));
}

double goodput(std::size_t payload_len, double elapsed_s) {
    if (elapsed_s <= 0.0) throw ZeroDurationError("goodput needs a positive on-air duration");
    return static_cast<double>(payload_len) / elapsed_s;
}

} // namespace isteg
