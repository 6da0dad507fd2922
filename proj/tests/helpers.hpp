#pragma once

#include <random>
#include <string>

#include "isteg/symbolcodec.hpp"
#include "isteg/trace_io.hpp"

namespace isteg::test {

inline Bytes random_payload(std::mt19937_64& rng, std::size_t len) {
    Bytes out(len);
    for (auto& b : out) b = static_cast<std::uint8_t>(rng() & 0xff);
    return out;
}

inline Bits bits_of(const std::string& text) { return bits_from_string(text); }

} // namespace isteg::test
