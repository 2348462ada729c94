#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rstar {

/// Base error type for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inclusive range of calendar years.
struct YearRange {
    int first = 0;
    int last = 0;

    [[nodiscard]] bool contains(int year) const noexcept { return year >= first && year <= last; }
    [[nodiscard]] bool empty() const noexcept { return last < first; }
    [[nodiscard]] int length() const noexcept { return empty() ? 0 : last - first + 1; }

    friend bool operator==(const YearRange&, const YearRange&) = default;
};

} // namespace rstar
