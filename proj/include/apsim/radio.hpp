#pragma once

#include <optional>
#include <vector>

namespace apsim {

// Indoor 5 GHz log-distance path loss with a linear wall-density term and a
// frozen uniform shadowing offset (TMB-style). Defaults follow the published
// TMB measurement fit; the shadowing support is deployment configuration.
struct PathLossParams {
    double l0_db = 54.12;              // loss at 1 m
    double exponent = 2.06067;         // distance exponent
    double wall_attenuation_db = 5.25; // per traversed wall
    double walls_per_meter = 0.1467;   // average walls crossed per meter
    double shadowing_max_db = 5.0;     // shadowing drawn from U[0, max]

    void validate() const;
};

struct RateEntry {
    double min_rx_dbm;          // weakest received power this step decodes at
    int bits_per_symbol;        // data bits per OFDM symbol
    int legacy_bits_per_symbol; // bits per legacy symbol, used for the ack
};

// Sensitivity ladder mapping received power to the modulation step used on a
// link. Entries sorted by min_rx_dbm strictly ascending; anything below
// detection_threshold_dbm is out of range.
struct RatePolicy {
    double detection_threshold_dbm = -82.0;
    std::vector<RateEntry> entries;

    void validate() const;

    // 20 MHz single-stream HE ladder (12 steps) with the standard minimum
    // sensitivities; legacy column is the highest basic rate not above the
    // step's data rate.
    static RatePolicy default_he20();
};

struct SelectedRates {
    int bits_per_symbol;
    int legacy_bits_per_symbol;
};

// One STA-AP pair.
struct LinkBudget {
    double distance_m = 0.0;
    double path_loss_db = 0.0;
    double received_power_dbm = 0.0;
    int bits_per_symbol = 0;        // 0 when not detectable
    int legacy_bits_per_symbol = 0; // 0 when not detectable
    bool detectable = false;
};

// l0 + 10*exponent*log10(d) + wall_attenuation*walls_per_meter*d + shadowing.
// Requires d > 0 and 0 <= shadowing_db <= shadowing_max_db.
double path_loss_db(double distance_m, const PathLossParams& p, double shadowing_db);

double received_power_dbm(double tx_power_dbm, double path_loss_db);

// Highest entry whose min_rx_dbm <= rx_dbm (inclusive boundary); nullopt when
// the link is below detection or below every entry.
std::optional<SelectedRates> select_rates(double rx_dbm, const RatePolicy& policy);

}  // namespace apsim
