#pragma once

#include <cstddef>

#include "isteg/symbolcodec.hpp"

namespace isteg {

struct ChannelMetrics {
    double ber = 0.0;            // [0,1]
    double goodput_Bps = 0.0;    // delivered payload bytes / on-air seconds
    double symbol_rate_sps = 0.0;
    double elapsed_s = 0.0;
};

/// Hamming distance over the overlap plus the length difference, divided by
/// the longer length. Symmetric, 0 for identical inputs, never above 1.
double ber(const Bits& sent, const Bits& received);

/// payload_len / elapsed_s. Throws ZeroDurationError when elapsed_s <= 0.
double goodput(std::size_t payload_len, double elapsed_s);

} // namespace isteg
