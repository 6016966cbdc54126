#ifndef CFCC_WELFORD_HPP_
#define CFCC_WELFORD_HPP_

#include <cstdint>

namespace cfcc {

/// Streaming mean/variance accumulator (Welford's recurrence).
class WelfordAccumulator {
public:
    void add(double x) {
        ++count_;
        double delta = x - mean_;
        mean_ += delta / (double)count_;
        m2_ += delta * (x - mean_);
    }

    void merge(const WelfordAccumulator &other) {
        if (other.count_ == 0) return;
        if (count_ == 0) { *this = other; return; }
        int64_t total = count_ + other.count_;
        double delta = other.mean_ - mean_;
        mean_ += delta * (double)other.count_ / (double)total;
        m2_ += other.m2_ + delta * delta * (double)count_ * (double)other.count_ / (double)total;
        count_ = total;
    }

    int64_t count() const { return count_; }
    double mean() const { return mean_; }
    double variance() const { return count_ > 1 ? m2_ / (double)(count_ - 1) : 0.0; }

private:
    int64_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

} // namespace cfcc

#endif // CFCC_WELFORD_HPP_
