#include "apsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace apsim {

namespace {
constexpr double kMinDistanceM = 0.1;  // near-field floor for co-located nodes

double clamped_distance(const Vec2& a, const Vec2& b) {
    return std::max(std::hypot(a.x - b.x, a.y - b.y), kMinDistanceM);
}
}  // namespace

void ScenarioSpec::validate() const {
    if (!(area.width > 0.0) || !(area.height > 0.0))
        throw std::invalid_argument("scenario: area sides must be > 0");
    if (aps.kind == ApPlacementSpec::Kind::grid) {
        if (aps.rows <= 0 || aps.cols <= 0)
            throw std::invalid_argument("scenario: grid dimensions must be > 0");
    } else if (aps.count <= 0) {
        throw std::invalid_argument("scenario: AP count must be > 0");
    }
    if (stas.count <= 0) throw std::invalid_argument("scenario: STA count must be > 0");
    if (stas.kind == StaPlacementSpec::Kind::clustered) {
        if (stas.per_cluster <= 0)
            throw std::invalid_argument("scenario: cluster size must be > 0");
        if (stas.cluster_side < 0.0 ||
            stas.cluster_side > std::min(area.width, area.height))
            throw std::invalid_argument("scenario: cluster side must fit inside the area");
    }
    if (n_channels < 1) throw std::invalid_argument("scenario: need at least one channel");
    if (demand_bps < 0.0) throw std::invalid_argument("scenario: demand must be >= 0");
    path_loss.validate();
    rate_policy.validate();
    mac.validate();
}

std::vector<Vec2> place_aps_grid(int rows, int cols, const Area& area) {
    if (rows <= 0 || cols <= 0) throw std::invalid_argument("grid placement: dimensions must be > 0");
    std::vector<Vec2> out;
    out.reserve(static_cast<std::size_t>(rows) * cols);
    const double cell_w = area.width / cols;
    const double cell_h = area.height / rows;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            out.push_back({(c + 0.5) * cell_w, (r + 0.5) * cell_h});
    return out;
}

std::vector<Vec2> place_aps_uniform(int count, const Area& area, Rng& rng) {
    if (count <= 0) throw std::invalid_argument("uniform placement: count must be > 0");
    std::vector<Vec2> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        const double x = rng.uniform(0.0, area.width);
        const double y = rng.uniform(0.0, area.height);
        out.push_back({x, y});
    }
    return out;
}

std::vector<Vec2> place_stas_uniform(int count, const Area& area, Rng& rng) {
    return place_aps_uniform(count, area, rng);
}

std::vector<Vec2> place_stas_clustered(const std::vector<int>& cluster_sizes, double cluster_side,
                                       const Area& area, Rng& rng) {
    if (cluster_side < 0.0 || cluster_side > std::min(area.width, area.height))
        throw std::invalid_argument("clustered placement: cluster side must fit inside the area");
    const double half = cluster_side / 2.0;
    std::vector<Vec2> out;
    for (int size : cluster_sizes) {
        if (size <= 0) throw std::invalid_argument("clustered placement: cluster sizes must be > 0");
        // Center over the shrunk rectangle keeps the whole square in-area
        // without rejection sampling.
        const double cx = rng.uniform(half, area.width - half);
        const double cy = rng.uniform(half, area.height - half);
        for (int k = 0; k < size; ++k) {
            const double x = rng.uniform(cx - half, cx + half);
            const double y = rng.uniform(cy - half, cy + half);
            out.push_back({x, y});
        }
    }
    return out;
}

std::vector<Vec2> place_stas_clustered(int cluster_count, int per_cluster, double cluster_side,
                                       const Area& area, Rng& rng) {
    if (cluster_count <= 0 || per_cluster <= 0)
        throw std::invalid_argument("clustered placement: counts must be > 0");
    return place_stas_clustered(std::vector<int>(cluster_count, per_cluster), cluster_side, area,
                                rng);
}

std::vector<int> assign_channels(int n_aps, int n_channels, Rng& rng) {
    if (n_channels < 1) throw std::invalid_argument("channel assignment: need at least one channel");
    std::vector<int> out;
    out.reserve(n_aps);
    for (int j = 0; j < n_aps; ++j)
        out.push_back(1 + static_cast<int>(rng.uniform_index(n_channels)));
    return out;
}

std::vector<std::vector<LinkBudget>> build_links(const std::vector<Sta>& stas,
                                                 const std::vector<Ap>& aps,
                                                 const PathLossParams& path_loss,
                                                 const RatePolicy& rate_policy,
                                                 std::uint64_t shadowing_seed) {
    std::vector<std::vector<LinkBudget>> links(stas.size(), std::vector<LinkBudget>(aps.size()));
    for (std::size_t i = 0; i < stas.size(); ++i) {
        for (std::size_t j = 0; j < aps.size(); ++j) {
            LinkBudget& lb = links[i][j];
            lb.distance_m = clamped_distance(stas[i].pos, aps[j].pos);
            const double gs = Rng(derive_seed(shadowing_seed, i, j))
                                  .uniform(0.0, path_loss.shadowing_max_db);
            lb.path_loss_db = path_loss_db(lb.distance_m, path_loss, gs);
            lb.received_power_dbm = received_power_dbm(aps[j].tx_power_dbm, lb.path_loss_db);
            if (auto rates = select_rates(lb.received_power_dbm, rate_policy)) {
                lb.detectable = true;
                lb.bits_per_symbol = rates->bits_per_symbol;
                lb.legacy_bits_per_symbol = rates->legacy_bits_per_symbol;
            }
        }
    }
    return links;
}

Scenario build_scenario(const ScenarioSpec& spec, std::uint64_t seed) {
    spec.validate();

    Scenario scn;
    scn.area = spec.area;
    scn.mac = spec.mac;
    scn.seed = seed;

    std::vector<Vec2> ap_pos;
    if (spec.aps.kind == ApPlacementSpec::Kind::grid) {
        ap_pos = place_aps_grid(spec.aps.rows, spec.aps.cols, spec.area);
    } else {
        Rng rng(derive_seed(seed, streams::ap_placement));
        ap_pos = place_aps_uniform(spec.aps.count, spec.area, rng);
    }

    std::vector<int> channels;
    {
        Rng rng(derive_seed(seed, streams::channels));
        channels = assign_channels(static_cast<int>(ap_pos.size()), spec.n_channels, rng);
    }
    for (std::size_t j = 0; j < ap_pos.size(); ++j)
        scn.aps.push_back({ap_pos[j], channels[j], spec.tx_power_dbm});

    std::vector<Vec2> sta_pos;
    {
        Rng rng(derive_seed(seed, streams::sta_placement));
        if (spec.stas.kind == StaPlacementSpec::Kind::uniform) {
            sta_pos = place_stas_uniform(spec.stas.count, spec.area, rng);
        } else {
            std::vector<int> sizes;
            int remaining = spec.stas.count;
            while (remaining > 0) {
                sizes.push_back(std::min(remaining, spec.stas.per_cluster));
                remaining -= sizes.back();
            }
            sta_pos = place_stas_clustered(sizes, spec.stas.cluster_side, spec.area, rng);
        }
    }
    for (const Vec2& pos : sta_pos)
        scn.stas.push_back({pos, Demand{spec.demand_bps, spec.mac.frame_bits}});

    scn.links = build_links(scn.stas, scn.aps, spec.path_loss, spec.rate_policy,
                            derive_seed(seed, streams::shadowing));

    scn.detected_aps.resize(scn.stas.size());
    for (std::size_t i = 0; i < scn.stas.size(); ++i)
        for (std::size_t j = 0; j < scn.aps.size(); ++j)
            if (scn.links[i][j].detectable) scn.detected_aps[i].push_back(static_cast<int>(j));

    // AP-to-AP coverage uses the same path loss with zero shadowing; two APs
    // interfere only when co-channel and within detection range.
    scn.co_channel_neighbors.resize(scn.aps.size());
    for (std::size_t j = 0; j < scn.aps.size(); ++j) {
        for (std::size_t k = 0; k < scn.aps.size(); ++k) {
            if (j == k || scn.aps[j].channel != scn.aps[k].channel) continue;
            const double d = clamped_distance(scn.aps[j].pos, scn.aps[k].pos);
            const double rx =
                received_power_dbm(scn.aps[k].tx_power_dbm, path_loss_db(d, spec.path_loss, 0.0));
            if (rx >= spec.rate_policy.detection_threshold_dbm)
                scn.co_channel_neighbors[j].push_back(static_cast<int>(k));
        }
    }

    return scn;
}

}  // namespace apsim
