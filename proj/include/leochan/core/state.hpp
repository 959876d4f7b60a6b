#pragma once

#include "leochan/core/error.hpp"
#include "leochan/core/time.hpp"
#include "leochan/core/vec3.hpp"

#include <string>
#include <string_view>

namespace leochan {

enum class Frame { TEME, ECI, ECEF, LOCAL };

constexpr std::string_view to_string(Frame f)
{
    switch (f) {
    case Frame::TEME: return "TEME";
    case Frame::ECI: return "ECI";
    case Frame::ECEF: return "ECEF";
    case Frame::LOCAL: return "LOCAL";
    }
    return "?";
}

/// Position (km) and velocity (km/s) tagged with the frame they are expressed in.
struct StateVector {
    Frame frame{Frame::TEME};
    Instant t;
    Vec3 position;
    Vec3 velocity;
};

inline void require_frame(const StateVector& s, Frame expected, std::string_view op)
{
    if (s.frame != expected)
        throw Error(ErrorCode::FrameMismatch, std::string(op) + " expects a " + std::string(to_string(expected)) +
                                                  " state, got " + std::string(to_string(s.frame)));
}

} // namespace leochan
