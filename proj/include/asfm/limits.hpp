#ifndef ASFM_LIMITS_HPP
#define ASFM_LIMITS_HPP

#include <chrono>
#include <cstdint>
#include <string>

namespace asfm {

enum class SolveStatus { Optimal, Limit };

inline std::string to_string(SolveStatus s) {
    return s == SolveStatus::Optimal ? "optimal" : "limit";
}

/// Wall-clock / node budgets; zero node limit means unlimited.
struct SolveLimits {
    double time_limit_s = 0.0;  // 0 = unlimited
    std::uint64_t node_limit = 0;
};

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}

    double elapsed_s() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    }
    std::int64_t elapsed_ms() const {
        return static_cast<std::int64_t>(elapsed_s() * 1000.0);
    }

    bool expired(const SolveLimits& limits) const {
        return limits.time_limit_s > 0.0 && elapsed_s() >= limits.time_limit_s;
    }

private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace asfm

#endif
