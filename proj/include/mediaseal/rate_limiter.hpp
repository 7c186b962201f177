#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <string>

namespace mediaseal {

// Sliding-window limiter: at most `max_requests` grants per client in any
// window of `window_seconds`, over the full request trace. The clock is an
// argument so tests and simulations can drive virtual time.
class RateLimiter {
public:
    RateLimiter(size_t max_requests, double window_seconds)
        : max_(max_requests), window_(window_seconds) {}

    bool allow(const std::string& client, double now) {
        std::lock_guard<std::mutex> lock(mu_);
        auto& granted = granted_[client];
        while (!granted.empty() && granted.front() <= now - window_) granted.pop_front();
        if (granted.size() >= max_) return false;
        granted.push_back(now);
        return true;
    }

    // Earliest time at or after `now` when a request would be granted.
    double next_allowed(const std::string& client, double now) {
        std::lock_guard<std::mutex> lock(mu_);
        auto& granted = granted_[client];
        while (!granted.empty() && granted.front() <= now - window_) granted.pop_front();
        if (granted.size() < max_) return now;
        return granted.front() + window_;
    }

    size_t max_requests() const { return max_; }
    double window_seconds() const { return window_; }

private:
    size_t max_;
    double window_;
    std::mutex mu_;
    std::map<std::string, std::deque<double>> granted_;
};

} // namespace mediaseal
