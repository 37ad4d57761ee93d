#pragma once

#include <cstdint>
#include <span>

namespace apsim {

// MAC/PHY timing and framing constants. Durations in seconds, lengths in
// bits. Defaults are the 802.11ax single-user values used throughout.
struct MacParameters {
    double t_phy_legacy = 20e-6;  // legacy preamble
    double t_phy_he_su = 52e-6;   // HE single-user preamble
    double symbol = 16e-6;        // OFDM symbol duration
    double legacy_symbol = 4e-6;  // legacy OFDM symbol duration
    double sifs = 16e-6;
    double difs = 34e-6;
    double mean_backoff_slots = 7.5;
    double t_empty_slot = 9e-6;
    std::int64_t service_field_bits = 32;
    std::int64_t mac_header_bits = 272;
    std::int64_t tail_bits = 6;
    std::int64_t ack_bits = 112;
    std::int64_t frame_bits = 12000;  // data payload per frame

    void validate() const;
};

// Downlink demand of one station.
struct Demand {
    double throughput_bps = 0.0;
    std::int64_t frame_bits = 12000;
};

// Data frame on air: preamble plus whole OFDM symbols for the framed payload.
double data_duration(std::int64_t frame_bits, int bits_per_symbol, const MacParameters& mac);
double data_duration(int bits_per_symbol, const MacParameters& mac);

// Ack on air at the legacy rate.
double ack_duration(int legacy_bits_per_symbol, const MacParameters& mac);

// One full frame exchange: data + SIFS + ack + DIFS + one empty slot.
double exchange_duration(int bits_per_symbol, int legacy_bits_per_symbol, const MacParameters& mac);

// Channel-time fraction per second needed to carry the demand, mean backoff
// included. May exceed 1 when the demand cannot fit even an empty channel.
double required_airtime(const Demand& demand, int bits_per_symbol, int legacy_bits_per_symbol,
                        const MacParameters& mac);

// Capped sum of the airtimes contending at one AP. Inputs must be >= 0.
double ap_occupancy(std::span<const double> airtimes);

// Airtime actually received by a station whose own requirement is
// own_airtime, under proportional sharing with every airtime in its
// contention set (own value included in the span).
double station_reward(double own_airtime, std::span<const double> airtimes_in_set);

}  // namespace apsim
