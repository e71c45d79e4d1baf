#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hawkes {

/// Strictly increasing event timestamps (seconds from a chosen origin) for
/// one event type. Immutable after construction.
class EventSeries {
public:
    EventSeries() = default;

    explicit EventSeries(std::vector<double> times, std::string origin_label = {})
        : times_(std::move(times)), origin_label_(std::move(origin_label)) {
        validate();
    }

    EventSeries(std::initializer_list<double> times) : times_(times) { validate(); }

    const std::vector<double>& times() const noexcept { return times_; }
    const std::string& origin_label() const noexcept { return origin_label_; }

    std::size_t size() const noexcept { return times_.size(); }
    bool empty() const noexcept { return times_.empty(); }
    double operator[](std::size_t i) const { return times_[i]; }
    double front() const { return times_.front(); }
    double back() const { return times_.back(); }

    auto begin() const noexcept { return times_.begin(); }
    auto end() const noexcept { return times_.end(); }

private:
    void validate() const {
        for (std::size_t i = 0; i < times_.size(); ++i) {
            if (!(times_[i] >= 0.0)) {
                throw std::invalid_argument(
                    "EventSeries: timestamp at index " + std::to_string(i) +
                    " is negative or not a number");
            }
            if (i > 0 && !(times_[i - 1] < times_[i])) {
                throw std::invalid_argument(
                    "EventSeries: timestamps must be strictly increasing; violation at index " +
                    std::to_string(i));
            }
        }
    }

    std::vector<double> times_;
    std::string origin_label_;
};

} // namespace hawkes
