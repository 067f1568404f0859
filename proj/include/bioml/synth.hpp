#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "bioml/data.hpp"

namespace bioml {

// Synthetic stand-in for the field data set. The formulas are defined by this
// repository; they are shaped like erosion/soil-condition indices but are not
// outputs of any agronomic model.
//
// Features, drawn per row in this order:
//   corn_yield            U(6, 13)
//   soybean_yield         U(2, 4.5)
//   wheat_yield           U(3, 7)
//   soil_erodibility      {0.26, 0.38} + U(-0.01, 0.01)   (two soil classes)
//   clay                  U(0.05, 0.40)
//   silt                  U(0.10, 0.55)
//   sand                  1 - clay - silt                  (no draw)
//   organic_matter        U(0.5, 6)
//   rainfall_erosivity    {120, 180} + U(-3, 3)            (two climate zones)
//   slope                 U(0.5, 12)
//   slope_length          {25, 75} + U(-2, 2)              (two length classes)
//   k_factor              U(0.1, 0.5)
//   crop_rotation         uniform code in {0, 1, 2, 3}
//   residue_removal_rate  U(0, 0.9)
//   noise_1               N(0, 1)
//   noise_2               U(0, 1)
// Level choices use one uniform draw: the low level iff u < 0.5.
//
// Targets (logistic(t) = 1 / (1 + exp(-t))):
//   SEF = (R/150) (K/0.32) sqrt(L/22.13) (0.5 + logistic(slope - 6)) exp(-(1 - rr))
//   SCI = 0.7 tanh(2 (om - 2.5)) + 0.06 (1 - rr) corn + a[rot] - 0.8 (sand - 0.45)^2
//         a = {-0.25, 0.15, 0.30, 0.0}
//   OMF = 0.8 tanh(1.5 (om - 2)) + 0.75 (1 - rr) clay + 0.03 (1 - rr) wheat
//         - 1.2 max(0, rr - 0.5) + b[rot],   b = {0.0, 0.2, 0.35, 0.1}
//   RRR = logistic(z / 2),
//         z = 1.5 (SCI - 0.53)/0.66 + 1.2 (OMF - 0.59)/0.65 - 0.8 (SEF - 0.89)/0.58
//             + 10 (clay - 0.225) + 0.4 (corn - 9.5)
// where R = rainfall_erosivity, K = soil_erodibility, L = slope_length,
// rr = residue_removal_rate, om = organic_matter. RRR is computed from the
// emitted (noisy) SEF, SCI and OMF. After the features of a row are drawn,
// each target in the order SEF, SCI, OMF, RRR receives
// noise_sigma * scale * N(0, 1) with the scales below, which approximate the
// noiseless standard deviation of each target; noise_sigma = 0.1 therefore
// gives a signal-to-noise ratio of about 20 dB.
struct SynthScales {
  static constexpr double sef = 0.58;
  static constexpr double sci = 0.66;
  static constexpr double omf = 0.65;
  static constexpr double rrr = 0.29;
};

DataTable synth_generate(std::size_t n, double noise_sigma, std::uint64_t seed);

// Features each target's formula reads directly.
std::vector<std::string> synth_generative_features(const std::string& target);
std::vector<std::string> synth_noise_features();

}  // namespace bioml
