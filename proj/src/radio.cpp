#include "apsim/radio.hpp"

#include <cmath>
#include <stdexcept>

namespace apsim {

void PathLossParams::validate() const {
    if (!(exponent > 0.0)) throw std::invalid_argument("path loss: exponent must be > 0");
    if (wall_attenuation_db < 0.0) throw std::invalid_argument("path loss: wall attenuation must be >= 0");
    if (walls_per_meter < 0.0) throw std::invalid_argument("path loss: wall density must be >= 0");
    if (shadowing_max_db < 0.0) throw std::invalid_argument("path loss: shadowing bound must be >= 0");
}

void RatePolicy::validate() const {
    if (entries.empty()) throw std::invalid_argument("rate policy: no entries");
    double prev = -1e300;
    for (const auto& e : entries) {
        if (!(e.min_rx_dbm > prev))
            throw std::invalid_argument("rate policy: entries must be sorted by min_rx_dbm strictly ascending");
        if (e.bits_per_symbol <= 0 || e.legacy_bits_per_symbol <= 0)
            throw std::invalid_argument("rate policy: bits per symbol must be > 0");
        prev = e.min_rx_dbm;
    }
    if (detection_threshold_dbm > entries.front().min_rx_dbm)
        throw std::invalid_argument("rate policy: detection threshold above the lowest rate step");
}

RatePolicy RatePolicy::default_he20() {
    RatePolicy p;
    p.detection_threshold_dbm = -82.0;
    p.entries = {
        {-82.0, 117, 24},   // BPSK 1/2
        {-79.0, 234, 48},   // QPSK 1/2
        {-77.0, 351, 48},   // QPSK 3/4
        {-74.0, 468, 96},   // 16-QAM 1/2
        {-70.0, 702, 96},   // 16-QAM 3/4
        {-66.0, 936, 96},   // 64-QAM 2/3
        {-65.0, 1053, 96},  // 64-QAM 3/4
        {-64.0, 1170, 96},  // 64-QAM 5/6
        {-59.0, 1404, 96},  // 256-QAM 3/4
        {-57.0, 1560, 96},  // 256-QAM 5/6
        {-54.0, 1755, 96},  // 1024-QAM 3/4
        {-52.0, 1950, 96},  // 1024-QAM 5/6
    };
    return p;
}

double path_loss_db(double distance_m, const PathLossParams& p, double shadowing_db) {
    if (!(distance_m > 0.0)) throw std::domain_error("path loss: distance must be > 0");
    if (shadowing_db < 0.0 || shadowing_db > p.shadowing_max_db)
        throw std::invalid_argument("path loss: shadowing outside [0, shadowing_max_db]");
    return p.l0_db + 10.0 * p.exponent * std::log10(distance_m) +
           p.wall_attenuation_db * p.walls_per_meter * distance_m + shadowing_db;
}

double received_power_dbm(double tx_power_dbm, double path_loss_db) {
    return tx_power_dbm - path_loss_db;
}

std::optional<SelectedRates> select_rates(double rx_dbm, const RatePolicy& policy) {
    if (rx_dbm < policy.detection_threshold_dbm) return std::nullopt;
    const RateEntry* best = nullptr;
    for (const auto& e : policy.entries) {
        if (e.min_rx_dbm <= rx_dbm) best = &e;
        else break;
    }
    if (best == nullptr) return std::nullopt;
    return SelectedRates{best->bits_per_symbol, best->legacy_bits_per_symbol};
}

}  // namespace apsim
