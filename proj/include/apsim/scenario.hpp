#pragma once

#include <cstdint>
#include <vector>

#include "apsim/airtime.hpp"
#include "apsim/radio.hpp"
#include "apsim/rng.hpp"

namespace apsim {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

struct Area {
    double width = 80.0;   // meters
    double height = 80.0;  // meters
};

struct ApPlacementSpec {
    enum class Kind { grid, uniform };
    Kind kind = Kind::grid;
    int rows = 4;    // grid only
    int cols = 4;    // grid only
    int count = 16;  // uniform only

    int n_aps() const { return kind == Kind::grid ? rows * cols : count; }
};

struct StaPlacementSpec {
    enum class Kind { uniform, clustered };
    Kind kind = Kind::uniform;
    int count = 64;
    int per_cluster = 10;      // clustered only; last cluster takes the remainder
    double cluster_side = 10;  // clustered only; side of the square around each center
};

struct ScenarioSpec {
    Area area;
    ApPlacementSpec aps;
    StaPlacementSpec stas;
    int n_channels = 8;
    double tx_power_dbm = 20.0;
    double demand_bps = 4e6;  // same downlink demand for every station
    PathLossParams path_loss;
    RatePolicy rate_policy = RatePolicy::default_he20();
    MacParameters mac;

    void validate() const;
};

struct Ap {
    Vec2 pos;
    int channel = 1;
    double tx_power_dbm = 20.0;
};

struct Sta {
    Vec2 pos;
    Demand demand;
};

// Immutable deployment: placements, channels and the full link-budget matrix,
// all reproducible from (spec, seed). Shadowing is sampled once per STA-AP
// pair and frozen for the whole run.
struct Scenario {
    Area area;
    std::vector<Ap> aps;
    std::vector<Sta> stas;
    std::vector<std::vector<LinkBudget>> links;          // [sta][ap]
    std::vector<std::vector<int>> detected_aps;          // per STA, ascending AP index
    std::vector<std::vector<int>> co_channel_neighbors;  // per AP: same-channel APs in coverage
    MacParameters mac;
    std::uint64_t seed = 0;

    int n_aps() const { return static_cast<int>(aps.size()); }
    int n_stas() const { return static_cast<int>(stas.size()); }
};

// Cell centers of a rows x cols partition of the area, row-major. No RNG.
std::vector<Vec2> place_aps_grid(int rows, int cols, const Area& area);

std::vector<Vec2> place_aps_uniform(int count, const Area& area, Rng& rng);

std::vector<Vec2> place_stas_uniform(int count, const Area& area, Rng& rng);

// Cluster centers drawn uniformly so the full cluster square fits inside the
// area; members drawn uniformly within their cluster square.
std::vector<Vec2> place_stas_clustered(const std::vector<int>& cluster_sizes, double cluster_side,
                                       const Area& area, Rng& rng);
std::vector<Vec2> place_stas_clustered(int cluster_count, int per_cluster, double cluster_side,
                                       const Area& area, Rng& rng);

// Independent uniform draws from {1..n_channels}.
std::vector<int> assign_channels(int n_aps, int n_channels, Rng& rng);

// Full link matrix. Shadowing for pair (i, j) comes from its own derived
// stream, so the matrix is independent of evaluation order and of the counts
// of other rows/columns. Distances are clamped to a 0.1 m near-field floor.
std::vector<std::vector<LinkBudget>> build_links(const std::vector<Sta>& stas,
                                                 const std::vector<Ap>& aps,
                                                 const PathLossParams& path_loss,
                                                 const RatePolicy& rate_policy,
                                                 std::uint64_t shadowing_seed);

Scenario build_scenario(const ScenarioSpec& spec, std::uint64_t seed);

}  // namespace apsim
