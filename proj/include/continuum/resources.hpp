#ifndef CONTINUUM_RESOURCES_HPP
#define CONTINUUM_RESOURCES_HPP

#include <cstdint>
#include <ostream>

namespace continuum {

/// Multi-resource quantity: CPU cores, RAM (MB) and storage (MB).
struct ResourceVector
{
    std::int64_t cpu = 0;
    std::int64_t ram = 0;
    std::int64_t storage = 0;

    friend constexpr bool operator==(const ResourceVector&, const ResourceVector&) = default;

    constexpr ResourceVector& operator+=(const ResourceVector& o) noexcept
    {
        cpu += o.cpu;
        ram += o.ram;
        storage += o.storage;
        return *this;
    }

    constexpr ResourceVector& operator-=(const ResourceVector& o) noexcept
    {
        cpu -= o.cpu;
        ram -= o.ram;
        storage -= o.storage;
        return *this;
    }

    friend constexpr ResourceVector operator+(ResourceVector a, const ResourceVector& b) noexcept { return a += b; }
    friend constexpr ResourceVector operator-(ResourceVector a, const ResourceVector& b) noexcept { return a -= b; }

    constexpr bool non_negative() const noexcept { return cpu >= 0 && ram >= 0 && storage >= 0; }
    constexpr bool all_positive() const noexcept { return cpu > 0 && ram > 0 && storage > 0; }
    constexpr bool is_zero() const noexcept { return cpu == 0 && ram == 0 && storage == 0; }
};

/// Componentwise `demand <= available`.
constexpr bool fits(const ResourceVector& demand, const ResourceVector& available) noexcept
{
    return demand.cpu <= available.cpu && demand.ram <= available.ram && demand.storage <= available.storage;
}

inline std::ostream& operator<<(std::ostream& os, const ResourceVector& r)
{
    return os << '(' << r.cpu << ", " << r.ram << ", " << r.storage << ')';
}

} // namespace continuum

#endif // CONTINUUM_RESOURCES_HPP
