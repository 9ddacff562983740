#pragma once

#include <span>
#include <vector>

#include "apsel/random.hpp"

namespace apsel {

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kBoltzmann = 1.3803e-23;
inline constexpr double kNoiseTemperatureK = 290.0;

/// Radio and propagation constants for the two-slope WiFi channel
/// (IEEE TGn model B shape: free space up to the breakpoint, steeper beyond).
struct ChannelParams {
    double tx_power = 25.0;           // raw configured value, used as-is in the SNR budget
    bool tx_power_as_mw = false;      // when set, tx_power is converted mW -> dBm first
    double op_bandwidth_hz = 2e7;
    double frequency_hz = 5e9;
    double noise_figure_db = 7.0;
    double breakpoint_m = 5.0;
    double slope_pre = 2.0;
    double slope_post = 3.5;
    double shadow_sigma_pre_db = 3.0;
    double shadow_sigma_post_db = 4.0;
    double penetration_loss_db = 7.0;
    double fixed_shadow_db = 18.0;
    double min_distance_m = 0.1;
    bool shadow_enabled = true;

    /// Throws DomainError when an invariant does not hold.
    void validate() const;

    /// tx_power after the optional mW -> dBm conversion.
    double effective_tx_power() const;
};

struct SnrBounds {
    double snr_min_db = 0.0;
    double snr_max_db = 1.0;
};

/// Thermal noise power in watts for the given bandwidth and noise figure.
double noise_power(double op_bandwidth_hz, double noise_figure_db);

/// Two-slope loss without the penetration and fixed-shadow offsets.
double two_slope_loss_db(double distance_m, const ChannelParams& params);

/// Two-slope loss plus penetration and fixed-shadow offsets, no random fading.
double path_loss_deterministic(double distance_m, const ChannelParams& params);

/// Deterministic loss plus zero-mean Gaussian shadow fading; the standard
/// deviation switches at the breakpoint. No draw is taken when fading is off.
double path_loss(double distance_m, const ChannelParams& params, RandomStream& rng);

double snr_db(double tx_power, double ploss_db, double noise_power_w);

/// SNR of a link at the given distance with fading excluded.
double deterministic_snr_db(double distance_m, const ChannelParams& params);

/// Min-max scaling onto [0,1] with clamping.
double normalize_snr(double snr, const SnrBounds& bounds);
std::vector<double> normalize_snr(std::span<const double> snr_values, const SnrBounds& bounds);

/// Normalization frame of a square world: the best link is at min_distance_m,
/// the worst across the diagonal.
SnrBounds scenario_snr_bounds(double world_size_m, const ChannelParams& params);

}  // namespace apsel
