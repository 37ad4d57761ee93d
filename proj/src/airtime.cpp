#include "apsim/airtime.hpp"

#include <algorithm>
#include <stdexcept>

namespace apsim {

namespace {
std::int64_t ceil_div(std::int64_t num, std::int64_t den) { return (num + den - 1) / den; }
}  // namespace

void MacParameters::validate() const {
    const bool ok = t_phy_legacy > 0 && t_phy_he_su > 0 && symbol > 0 && legacy_symbol > 0 &&
                    sifs > 0 && difs > 0 && mean_backoff_slots > 0 && t_empty_slot > 0 &&
                    service_field_bits > 0 && mac_header_bits > 0 && tail_bits > 0 &&
                    ack_bits > 0 && frame_bits > 0;
    if (!ok) throw std::invalid_argument("mac parameters: all fields must be > 0");
}

double data_duration(std::int64_t frame_bits, int bits_per_symbol, const MacParameters& mac) {
    if (bits_per_symbol <= 0) throw std::domain_error("data_duration: bits_per_symbol must be > 0");
    const std::int64_t framed =
        mac.service_field_bits + mac.mac_header_bits + frame_bits + mac.tail_bits;
    return mac.t_phy_he_su + static_cast<double>(ceil_div(framed, bits_per_symbol)) * mac.symbol;
}

double data_duration(int bits_per_symbol, const MacParameters& mac) {
    return data_duration(mac.frame_bits, bits_per_symbol, mac);
}

double ack_duration(int legacy_bits_per_symbol, const MacParameters& mac) {
    if (legacy_bits_per_symbol <= 0)
        throw std::domain_error("ack_duration: legacy_bits_per_symbol must be > 0");
    const std::int64_t framed = mac.service_field_bits + mac.ack_bits + mac.tail_bits;
    return mac.t_phy_legacy +
           static_cast<double>(ceil_div(framed, legacy_bits_per_symbol)) * mac.legacy_symbol;
}

double exchange_duration(int bits_per_symbol, int legacy_bits_per_symbol, const MacParameters& mac) {
    return data_duration(bits_per_symbol, mac) + mac.sifs + ack_duration(legacy_bits_per_symbol, mac) +
           mac.difs + mac.t_empty_slot;
}

double required_airtime(const Demand& demand, int bits_per_symbol, int legacy_bits_per_symbol,
                        const MacParameters& mac) {
    if (demand.throughput_bps < 0) throw std::domain_error("required_airtime: demand must be >= 0");
    if (demand.frame_bits <= 0) throw std::domain_error("required_airtime: frame_bits must be > 0");
    const double per_frame =
        mac.mean_backoff_slots * mac.t_empty_slot +
        data_duration(demand.frame_bits, bits_per_symbol, mac) + mac.sifs +
        ack_duration(legacy_bits_per_symbol, mac) + mac.difs + mac.t_empty_slot;
    return demand.throughput_bps / static_cast<double>(demand.frame_bits) * per_frame;
}

double ap_occupancy(std::span<const double> airtimes) {
    double sum = 0.0;
    for (double u : airtimes) sum += u;
    return std::min(1.0, sum);
}

double station_reward(double own_airtime, std::span<const double> airtimes_in_set) {
    double sum = 0.0;
    for (double u : airtimes_in_set) sum += u;
    return own_airtime / std::max(1.0, sum);
}

}  // namespace apsim
