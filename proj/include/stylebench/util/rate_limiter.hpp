#pragma once

#include <chrono>
#include <condition_variable>
#include <mutex>

namespace stylebench::util {

// Token bucket shared across worker threads: capacity = per_minute tokens,
// refilled continuously. acquire() blocks until a token is available.
class RateLimiter {
  public:
    // per_minute == 0 disables limiting.
    explicit RateLimiter(int per_minute) : per_minute_(per_minute), tokens_(per_minute) {}

    void acquire() {
        if (per_minute_ <= 0) return;
        std::unique_lock<std::mutex> lock(mu_);
        for (;;) {
            refill();
            if (tokens_ >= 1.0) {
                tokens_ -= 1.0;
                return;
            }
            const double needed = 1.0 - tokens_;
            const auto wait = std::chrono::duration<double>(needed * 60.0 / per_minute_);
            cv_.wait_for(lock, wait);
        }
    }

  private:
    void refill() {
        const auto now = std::chrono::steady_clock::now();
        const double elapsed = std::chrono::duration<double>(now - last_).count();
        last_ = now;
        tokens_ += elapsed * per_minute_ / 60.0;
        if (tokens_ > per_minute_) tokens_ = per_minute_;
    }

    const int per_minute_;
    double tokens_;
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
    std::mutex mu_;
    std::condition_variable cv_;
};

}  // namespace stylebench::util
