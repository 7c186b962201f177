#include <doctest.h>

#include <algorithm>
#include <vector>

#include "mediaseal/rate_limiter.hpp"
#include "mediaseal/rng.hpp"

using namespace mediaseal;

TEST_CASE("limiter enforces the window on a simple trace") {
    RateLimiter limiter(3, 10.0);
    CHECK(limiter.allow("a", 0.0));
    CHECK(limiter.allow("a", 1.0));
    CHECK(limiter.allow("a", 2.0));
    CHECK(!limiter.allow("a", 9.9));
    // Clients are independent.
    CHECK(limiter.allow("b", 9.9));
    // The first grant leaves the window just after t=10.
    CHECK(limiter.next_allowed("a", 9.9) == doctest::Approx(10.0));
    CHECK(limiter.allow("a", 10.01));
}

TEST_CASE("no window in a random trace ever exceeds the cap") {
    const size_t cap = 5;
    const double window = 60.0;
    RateLimiter limiter(cap, window);
    Rng rng(900);

    std::vector<double> grants;
    double now = 0.0;
    for (int i = 0; i < 5000; ++i) {
        now += rng.next_double() * 20.0;
        if (limiter.allow("client", now)) grants.push_back(now);
    }

    // Sliding-window property: for every grant, the grants in the preceding
    // window (exclusive of points exactly one window old) stay within the cap.
    for (size_t i = 0; i < grants.size(); ++i) {
        size_t in_window = 0;
        for (size_t j = 0; j <= i; ++j)
            if (grants[j] > grants[i] - window) ++in_window;
        CHECK(in_window <= cap);
    }
    CHECK(grants.size() > cap); // the trace spans many windows
}

TEST_CASE("next_allowed agrees with allow") {
    RateLimiter limiter(2, 30.0);
    Rng rng(901);
    double now = 0.0;
    for (int i = 0; i < 500; ++i) {
        now += rng.next_double() * 10.0;
        const double eta = limiter.next_allowed("c", now);
        CHECK(eta >= now);
        if (eta == now) {
            CHECK(limiter.allow("c", now));
        } else {
            CHECK(!limiter.allow("c", now));
            // Waiting until the promised time succeeds.
            now = eta + 1e-9;
            CHECK(limiter.allow("c", now));
        }
    }
}
