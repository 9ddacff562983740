#include "apsel/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "apsel/errors.hpp"

namespace apsel {

void ChannelParams::validate() const
{
    auto require = [](bool ok, const char* what) {
        if (!ok)
            throw DomainError(std::string("channel: ") + what);
    };
    require(op_bandwidth_hz > 0.0, "op_bandwidth_hz must be positive");
    require(frequency_hz > 0.0, "frequency_hz must be positive");
    require(breakpoint_m > 0.0, "breakpoint_m must be positive");
    require(min_distance_m > 0.0, "min_distance_m must be positive");
    require(slope_pre > 0.0, "slope_pre must be positive");
    require(slope_post >= slope_pre, "slope_post must be >= slope_pre");
    require(shadow_sigma_pre_db >= 0.0 && shadow_sigma_post_db >= 0.0, "shadow sigmas must be non-negative");
    require(!tx_power_as_mw || tx_power > 0.0, "tx_power must be positive when given in mW");
}

double ChannelParams::effective_tx_power() const
{
    return tx_power_as_mw ? 10.0 * std::log10(tx_power) : tx_power;
}

double noise_power(double op_bandwidth_hz, double noise_figure_db)
{
    if (op_bandwidth_hz < 0.0)
        throw DomainError("noise_power: negative bandwidth");
    return std::pow(10.0, noise_figure_db / 10.0) * kBoltzmann * kNoiseTemperatureK * op_bandwidth_hz;
}

namespace {

double pre_breakpoint_loss(double d, const ChannelParams& p)
{
    double fspl = 20.0 * std::log10(4.0 * std::numbers::pi * d * p.frequency_hz / kSpeedOfLight);
    return fspl * p.slope_pre / 2.0;
}

}  // namespace

double two_slope_loss_db(double distance_m, const ChannelParams& params)
{
    double d = std::max(distance_m, params.min_distance_m);
    if (d <= params.breakpoint_m)
        return pre_breakpoint_loss(d, params);
    return pre_breakpoint_loss(params.breakpoint_m, params)
         + 10.0 * params.slope_post * std::log10(d / params.breakpoint_m);
}

double path_loss_deterministic(double distance_m, const ChannelParams& params)
{
    return two_slope_loss_db(distance_m, params) + params.penetration_loss_db + params.fixed_shadow_db;
}

double path_loss(double distance_m, const ChannelParams& params, RandomStream& rng)
{
    double loss = path_loss_deterministic(distance_m, params);
    if (!params.shadow_enabled)
        return loss;
    double d = std::max(distance_m, params.min_distance_m);
    double sigma = d <= params.breakpoint_m ? params.shadow_sigma_pre_db : params.shadow_sigma_post_db;
    return loss + rng.normal(0.0, sigma);
}

double snr_db(double tx_power, double ploss_db, double noise_power_w)
{
    if (!(noise_power_w > 0.0))
        throw DomainError("snr_db: noise power must be positive");
    return tx_power - ploss_db - 30.0 - 10.0 * std::log10(noise_power_w);
}

double deterministic_snr_db(double distance_m, const ChannelParams& params)
{
    return snr_db(params.effective_tx_power(), path_loss_deterministic(distance_m, params),
                  noise_power(params.op_bandwidth_hz, params.noise_figure_db));
}

double normalize_snr(double snr, const SnrBounds& bounds)
{
    double scaled = (snr - bounds.snr_min_db) / (bounds.snr_max_db - bounds.snr_min_db);
    // NaN maps to 0 so the observation stays inside the unit box.
    if (!(scaled >= 0.0))
        return 0.0;
    return std::min(scaled, 1.0);
}

std::vector<double> normalize_snr(std::span<const double> snr_values, const SnrBounds& bounds)
{
    if (!(bounds.snr_max_db > bounds.snr_min_db))
        throw DomainError("normalize_snr: snr_max_db must exceed snr_min_db");
    std::vector<double> out(snr_values.size());
    std::transform(snr_values.begin(), snr_values.end(), out.begin(),
                   [&](double v) { return normalize_snr(v, bounds); });
    return out;
}

SnrBounds scenario_snr_bounds(double world_size_m, const ChannelParams& params)
{
    if (!(world_size_m > 0.0))
        throw DomainError("scenario_snr_bounds: world must have positive size");
    params.validate();
    double diagonal = std::sqrt(2.0) * world_size_m;
    SnrBounds bounds{deterministic_snr_db(diagonal, params), deterministic_snr_db(params.min_distance_m, params)};
    if (!(bounds.snr_max_db > bounds.snr_min_db))
        throw DomainError("scenario_snr_bounds: world diagonal is not beyond the minimum distance");
    return bounds;
}

}  // namespace apsel
