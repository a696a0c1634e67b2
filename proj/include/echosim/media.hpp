#pragma once

#include <string>

#include "echosim/errors.hpp"

namespace echosim {

enum class Medium { Radio, Ultrasound };

inline const char* to_string(Medium m) { return m == Medium::Radio ? "radio" : "ultrasound"; }

// Physical constants of the two broadcast channels: signal speeds c and s,
// channel bandwidths b0 (radio) and bi (ultrasound).
struct MediaParams {
  double radio_speed = 3e8;        // c, m/s
  double sound_speed = 343.0;      // s, m/s
  double radio_bandwidth = 1e6;    // b0, bit/s
  double sound_bandwidth = 41000;  // bi, bit/s

  double speed(Medium m) const { return m == Medium::Radio ? radio_speed : sound_speed; }
  double bandwidth(Medium m) const { return m == Medium::Radio ? radio_bandwidth : sound_bandwidth; }

  void validate() const {
    if (!(radio_speed > 0) || !(sound_speed > 0))
      throw InvalidParameterError("media: speeds must be strictly positive");
    if (!(radio_bandwidth > 0) || !(sound_bandwidth > 0))
      throw InvalidParameterError("media: bandwidths must be strictly positive");
    if (!(radio_speed > sound_speed))
      throw InvalidParameterError("media: radio_speed must exceed sound_speed");
  }

  friend bool operator==(const MediaParams&, const MediaParams&) = default;
};

// Time for a signal front to travel d meters.
inline double propagation_delay(double d, double speed) {
  if (!(speed > 0)) throw InvalidParameterError("propagation_delay: speed must be > 0");
  if (d < 0) throw InvalidParameterError("propagation_delay: distance must be >= 0");
  return d / speed;
}

// Airtime of a payload: bits / bandwidth.
inline double transmission_duration(double bits, double bandwidth) {
  if (!(bandwidth > 0)) throw InvalidParameterError("transmission_duration: bandwidth must be > 0");
  if (!(bits >= 1)) throw InvalidParameterError("transmission_duration: payload must be >= 1 bit");
  return bits / bandwidth;
}

}  // namespace echosim
