#ifndef CONTINUUM_TOPOLOGY_HPP
#define CONTINUUM_TOPOLOGY_HPP

#include <continuum/scenario.hpp>

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace continuum {

/// Tunable parameters of the bundled evaluation topology. Capacities and the
/// user placement are fixed; link and power figures are stand-ins.
struct TopologyDefaults
{
    double edge_bandwidth = 100.0;   // Mbit/s
    std::int64_t edge_latency = 1;   // ms
    double cloud_bandwidth = 1000.0; // Mbit/s, links touching the gateway or CLOUD
    std::int64_t cloud_latency = 10; // ms
    double edge_power_idle = 90.0;
    double edge_power_max = 180.0;
    double cloud_power_idle = 300.0;
    double cloud_power_max = 600.0;
    std::int64_t horizon = 1000;
    std::array<std::string, 6> server_sites{"BS1", "BS7", "BS8", "BS9", "BS12", "BS15"}; // ES1..ES6
    std::vector<std::string> gateway_sites{"BS1", "BS4", "BS13", "BS16"};               // uplinked to NS17
};

/// Seven servers (ES1..ES6 and CLOUD), sixteen base stations BS1..BS16 laid
/// out as a 4x4 grid, and the NS17 aggregation switch that uplinks the grid
/// corners to the cloud. 35 links with the cloud, 34 without. No tasks.
inline Scenario builtin_paper_topology(bool cloud_enabled, const TopologyDefaults& d = {})
{
    Scenario s;
    s.cloud_enabled = cloud_enabled;
    s.horizon = d.horizon;

    auto edge = [&](std::string id, std::int64_t cpu, std::int64_t ram) {
        s.nodes.push_back({std::move(id), Tier::edge, {cpu, ram, 131072}, d.edge_power_idle, d.edge_power_max});
    };
    if (cloud_enabled)
        s.nodes.push_back({"CLOUD", Tier::cloud, {9000, 9000000, 90000000}, d.cloud_power_idle, d.cloud_power_max});
    edge("ES1", 8, 16384);
    edge("ES2", 8, 16384);
    edge("ES3", 8, 8192);
    edge("ES4", 8, 8192);
    edge("ES5", 12, 16384);
    edge("ES6", 12, 16384);

    for (int i = 1; i <= 16; ++i)
        s.elements.push_back({"BS" + std::to_string(i), ElementKind::base_station});
    s.elements.push_back({"NS17", ElementKind::network_switch});

    auto edge_link = [&](std::string a, std::string b) {
        s.links.push_back({std::move(a), std::move(b), d.edge_bandwidth, d.edge_latency, unconstrained_delay_ms});
    };
    auto cloud_link = [&](std::string a, std::string b) {
        s.links.push_back({std::move(a), std::move(b), d.cloud_bandwidth, d.cloud_latency, unconstrained_delay_ms});
    };
    auto bs = [](int row, int col) { return "BS" + std::to_string(row * 4 + col + 1); };
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            if (c < 3)
                edge_link(bs(r, c), bs(r, c + 1));
            if (r < 3)
                edge_link(bs(r, c), bs(r + 1, c));
        }
    }
    for (const auto& site : d.gateway_sites)
        cloud_link(site, "NS17");
    for (std::size_t i = 0; i < d.server_sites.size(); ++i)
        edge_link("ES" + std::to_string(i + 1), d.server_sites[i]);
    if (cloud_enabled)
        cloud_link("CLOUD", "NS17");

    s.users = {{"us1", "BS4"}, {"us2", "BS6"}, {"us3", "BS10"}, {"us4", "BS4"}, {"us5", "BS11"}, {"us6", "BS14"}};
    return s;
}

/// Two servers, three applications. S1 (5 CPU, 5 RAM) sits next to the users
/// of APP1 and APP3, S2 (4 CPU, 4 RAM) next to the user of APP2. Storage is
/// vacuous (capacity 1, demand 0) and transfers are free.
inline Scenario builtin_toy_scenario()
{
    Scenario s;
    s.cloud_enabled = false;
    s.horizon = 15;
    s.nodes = {
        {"S1", Tier::edge, {5, 5, 1}, 90.0, 180.0},
        {"S2", Tier::edge, {4, 4, 1}, 90.0, 180.0},
    };
    s.elements = {{"BS1", ElementKind::base_station}, {"BS2", ElementKind::base_station}};
    s.links = {
        {"S1", "BS1", 100.0, 0, unconstrained_delay_ms},
        {"S2", "BS2", 100.0, 0, unconstrained_delay_ms},
        {"BS1", "BS2", 100.0, 1, unconstrained_delay_ms},
    };
    s.users = {{"u1", "BS1"}, {"u2", "BS2"}, {"u3", "BS1"}};
    s.tasks = {
        {"APP1", "u1", {2, 2, 0}, 10, 0.0, 0, 20, 1.0},
        {"APP2", "u2", {1, 2, 0}, 10, 0.0, 0, 10, 1.0},
        {"APP3", "u3", {4, 1, 0}, 10, 0.0, 0, 30, 1.0},
    };
    return s;
}

} // namespace continuum

#endif // CONTINUUM_TOPOLOGY_HPP
