#ifndef CONTINUUM_WORKLOAD_HPP
#define CONTINUUM_WORKLOAD_HPP

#include <continuum/errors.hpp>
#include <continuum/scenario.hpp>
#include <continuum/scenario_io.hpp>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace continuum {

struct Range
{
    std::int64_t min = 0;
    std::int64_t max = 0;

    friend bool operator==(const Range&, const Range&) = default;
};

/// Distribution of synthetic applications; every quantity is drawn uniformly
/// from its inclusive integer range.
struct WorkloadSpec
{
    Range cpu{2, 8};
    Range ram{2048, 8192};
    Range storage{0, 0};
    Range processing_time{20, 60};
    Range deadline{20, 100};
    Range data_size{1, 10};
    std::int64_t arrival_window = 0; // arrivals drawn from [0, arrival_window]
    std::int64_t tasks_per_user = 1;
    double penalty = 1.0;

    friend bool operator==(const WorkloadSpec&, const WorkloadSpec&) = default;

    static WorkloadSpec low() { return {}; }

    static WorkloadSpec high()
    {
        WorkloadSpec s;
        s.cpu = {6, 12};
        s.ram = {2048, 16384};
        return s;
    }
};

inline void validate_workload(const WorkloadSpec& s)
{
    auto check = [](const Range& r, const char* name, std::int64_t floor) {
        if (r.min > r.max)
            throw std::invalid_argument(std::string("workload: ") + name + " range has min > max");
        if (r.min < floor)
            throw std::invalid_argument(std::string("workload: ") + name + " range below " + std::to_string(floor));
    };
    check(s.cpu, "cpu", 0);
    check(s.ram, "ram", 0);
    check(s.storage, "storage", 0);
    check(s.processing_time, "processing_time", 0);
    check(s.deadline, "deadline", 1);
    check(s.data_size, "data_size", 0);
    if (s.cpu.min + s.ram.min + s.storage.min <= 0)
        throw std::invalid_argument("workload: demands may be all zero");
    if (s.arrival_window < 0)
        throw std::invalid_argument("workload: arrival_window must be non-negative");
    if (s.tasks_per_user < 1)
        throw std::invalid_argument("workload: tasks_per_user must be at least 1");
    if (s.penalty < 0.0)
        throw std::invalid_argument("workload: penalty must be non-negative");
}

namespace detail {

inline std::int64_t draw(std::mt19937_64& rng, const Range& r)
{
    const auto span = static_cast<std::uint64_t>(r.max - r.min) + 1;
    return r.min + static_cast<std::int64_t>(rng() % span);
}

} // namespace detail

/// `tasks_per_user` tasks for each user, in user order. Deterministic per seed.
inline std::vector<Task> generate_workload(const WorkloadSpec& spec, const std::vector<User>& users, std::uint64_t seed)
{
    validate_workload(spec);
    std::mt19937_64 rng(seed);
    std::vector<Task> tasks;
    for (const auto& user : users) {
        for (std::int64_t k = 0; k < spec.tasks_per_user; ++k) {
            Task t;
            t.id = "app-" + user.id + "-" + std::to_string(k);
            t.user = user.id;
            t.demand.cpu = detail::draw(rng, spec.cpu);
            t.demand.ram = detail::draw(rng, spec.ram);
            t.demand.storage = detail::draw(rng, spec.storage);
            t.processing_time = detail::draw(rng, spec.processing_time);
            t.deadline = detail::draw(rng, spec.deadline);
            t.data_size = static_cast<double>(detail::draw(rng, spec.data_size));
            t.arrival = detail::draw(rng, {0, spec.arrival_window});
            t.penalty = spec.penalty;
            tasks.push_back(std::move(t));
        }
    }
    return tasks;
}

inline Json to_json(const Range& r) { return Json::array({r.min, r.max}); }

inline Json to_json(const WorkloadSpec& s)
{
    Json j;
    j["cpu_range"] = to_json(s.cpu);
    j["ram_range"] = to_json(s.ram);
    j["storage_range"] = to_json(s.storage);
    j["processing_time_range"] = to_json(s.processing_time);
    j["deadline_range"] = to_json(s.deadline);
    j["data_size_range"] = to_json(s.data_size);
    j["arrival_window"] = s.arrival_window;
    j["tasks_per_user"] = s.tasks_per_user;
    j["penalty"] = s.penalty;
    return j;
}

inline WorkloadSpec workload_from_json(const Json& j, const std::string& where)
{
    detail::require_keys(j, where,
                         {"cpu_range", "ram_range", "storage_range", "processing_time_range", "deadline_range",
                          "data_size_range", "arrival_window", "tasks_per_user", "penalty"});
    auto range = [&](const char* key) {
        const auto& v = detail::member(j, where, key);
        if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer())
            throw ParseError(where + "." + key + ": expected [min, max] integers");
        return Range{v[0].get<std::int64_t>(), v[1].get<std::int64_t>()};
    };
    WorkloadSpec s;
    s.cpu = range("cpu_range");
    s.ram = range("ram_range");
    s.storage = range("storage_range");
    s.processing_time = range("processing_time_range");
    s.deadline = range("deadline_range");
    s.data_size = range("data_size_range");
    s.arrival_window = detail::get_int(j, where, "arrival_window");
    s.tasks_per_user = detail::get_int(j, where, "tasks_per_user");
    s.penalty = detail::get_number(j, where, "penalty");
    return s;
}

} // namespace continuum

#endif // CONTINUUM_WORKLOAD_HPP
