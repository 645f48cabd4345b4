#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace alfa {

// Model-2 QR symbol versions 1..40; side length in modules is 17 + 4*v.
constexpr int kMinVersion = 1;
constexpr int kMaxVersion = 40;

// Largest version the encoder supports (decoding/extraction handles all 40).
constexpr int kMaxEncodeVersion = 10;

inline int side_modules(int version) {
    if (version < kMinVersion || version > kMaxVersion) {
        throw std::invalid_argument("version out of range [1,40]: " + std::to_string(version));
    }
    return 17 + 4 * version;
}

enum class EccLevel : uint8_t { L = 0, M = 1, Q = 2, H = 3 };

// 2-bit indicator used inside the format information word.
inline int ecc_indicator_bits(EccLevel e) {
    switch (e) {
        case EccLevel::L: return 0b01;
        case EccLevel::M: return 0b00;
        case EccLevel::Q: return 0b11;
        case EccLevel::H: return 0b10;
    }
    throw std::logic_error("bad EccLevel");
}

inline EccLevel ecc_from_indicator(int bits) {
    switch (bits & 0b11) {
        case 0b01: return EccLevel::L;
        case 0b00: return EccLevel::M;
        case 0b11: return EccLevel::Q;
        case 0b10: return EccLevel::H;
    }
    throw std::logic_error("unreachable");
}

inline char ecc_name(EccLevel e) {
    static constexpr char names[4] = {'L', 'M', 'Q', 'H'};
    return names[static_cast<int>(e)];
}

inline EccLevel ecc_from_name(char c) {
    switch (c) {
        case 'L': case 'l': return EccLevel::L;
        case 'M': case 'm': return EccLevel::M;
        case 'Q': case 'q': return EccLevel::Q;
        case 'H': case 'h': return EccLevel::H;
    }
    throw std::invalid_argument(std::string("unknown ECC level: ") + c);
}

} // namespace alfa
