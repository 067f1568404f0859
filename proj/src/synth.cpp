#include "bioml/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "bioml/error.hpp"
#include "bioml/rng.hpp"

namespace bioml {

namespace {

double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }

double two_level(Rng& rng, double low, double high, double jitter) {
  const double level = rng.uniform() < 0.5 ? low : high;
  return level + rng.uniform(-jitter, jitter);
}

constexpr std::array<double, 4> kSciRotation = {-0.25, 0.15, 0.30, 0.0};
constexpr std::array<double, 4> kOmfRotation = {0.0, 0.2, 0.35, 0.1};

}  // namespace

DataTable synth_generate(std::size_t n, double noise_sigma, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorCode::InvalidSize, "sample count must be at least 1");
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma))
    throw Error(ErrorCode::Config, "noise sigma must be finite and >= 0");

  DataTable table{FeatureSchema::biomass(), Matrix(static_cast<Eigen::Index>(n), 20)};
  Rng rng(seed);
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
    const double corn = rng.uniform(6.0, 13.0);
    const double soybean = rng.uniform(2.0, 4.5);
    const double wheat = rng.uniform(3.0, 7.0);
    const double erodibility = two_level(rng, 0.26, 0.38, 0.01);
    const double clay = rng.uniform(0.05, 0.40);
    const double silt = rng.uniform(0.10, 0.55);
    const double sand = 1.0 - clay - silt;
    const double om = rng.uniform(0.5, 6.0);
    const double erosivity = two_level(rng, 120.0, 180.0, 3.0);
    const double slope = rng.uniform(0.5, 12.0);
    const double slope_length = two_level(rng, 25.0, 75.0, 2.0);
    const double k_factor = rng.uniform(0.1, 0.5);
    const auto rotation = static_cast<std::size_t>(rng.below(4));
    const double rr = rng.uniform(0.0, 0.9);
    const double noise_1 = rng.normal();
    const double noise_2 = rng.uniform();

    double sef = (erosivity / 150.0) * (erodibility / 0.32) * std::sqrt(slope_length / 22.13) *
                 (0.5 + logistic(slope - 6.0)) * std::exp(-(1.0 - rr));
    double sci = 0.7 * std::tanh(2.0 * (om - 2.5)) + 0.06 * (1.0 - rr) * corn + kSciRotation[rotation] -
                 0.8 * (sand - 0.45) * (sand - 0.45);
    double omf = 0.8 * std::tanh(1.5 * (om - 2.0)) + 0.75 * (1.0 - rr) * clay + 0.03 * (1.0 - rr) * wheat -
                 1.2 * std::max(0.0, rr - 0.5) + kOmfRotation[rotation];
    sef += noise_sigma * SynthScales::sef * rng.normal();
    sci += noise_sigma * SynthScales::sci * rng.normal();
    omf += noise_sigma * SynthScales::omf * rng.normal();
    const double z = 1.5 * (sci - 0.53) / 0.66 + 1.2 * (omf - 0.59) / 0.65 - 0.8 * (sef - 0.89) / 0.58 +
                     10.0 * (clay - 0.225) + 0.4 * (corn - 9.5);
    const double rrr = logistic(0.5 * z) + noise_sigma * SynthScales::rrr * rng.normal();

    table.rows.row(i) << corn, soybean, wheat, erodibility, clay, silt, sand, om, erosivity, slope,
        slope_length, k_factor, static_cast<double>(rotation), rr, noise_1, noise_2, sef, sci, omf, rrr;
  }
  return table;
}

std::vector<std::string> synth_generative_features(const std::string& target) {
  if (target == "SEF")
    return {"soil_erodibility", "rainfall_erosivity", "slope", "slope_length", "residue_removal_rate"};
  if (target == "SCI")
    return {"corn_yield", "clay", "silt", "sand", "organic_matter", "crop_rotation", "residue_removal_rate"};
  if (target == "OMF")
    return {"wheat_yield", "clay", "organic_matter", "crop_rotation", "residue_removal_rate"};
  if (target == "RRR") return {"corn_yield", "clay", "SEF", "SCI", "OMF"};
  throw Error(ErrorCode::MissingColumn, "unknown synthetic target '" + target + "'");
}

std::vector<std::string> synth_noise_features() { return {"noise_1", "noise_2"}; }

}  // namespace bioml
