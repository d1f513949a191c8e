#pragma once

#include <array>
#include <cstdint>

namespace tkrylov {

/// One of the three index directions of a third-order tensor.
/// Mode numbering follows the usual 1,2,3 convention.
enum class Mode : std::uint8_t { one = 1, two = 2, three = 3 };

constexpr int mode_index(Mode m) { return static_cast<int>(m); }

constexpr Mode mode_from_index(int m) { return static_cast<Mode>(m); }

/// The two modes other than `m`, in ascending order.
constexpr std::array<Mode, 2> other_modes(Mode m) {
    switch (m) {
        case Mode::one: return {Mode::two, Mode::three};
        case Mode::two: return {Mode::one, Mode::three};
        default: return {Mode::one, Mode::two};
    }
}

/// The mode that is neither `a` nor `b`. Requires a != b.
constexpr Mode remaining_mode(Mode a, Mode b) {
    return mode_from_index(6 - mode_index(a) - mode_index(b));
}

constexpr const char* mode_name(Mode m) {
    switch (m) {
        case Mode::one: return "mode-1";
        case Mode::two: return "mode-2";
        default: return "mode-3";
    }
}

}  // namespace tkrylov
