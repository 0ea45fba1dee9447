#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace sgfield {

/// Tolerances and budgets shared by the series/quadrature routines.
struct AccuracyPolicy {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    long max_terms = 20'000'000;
    int quadrature_nodes = 64;

    void validate() const {
        if (abs_tol <= 0.0 || rel_tol <= 0.0)
            throw std::domain_error("AccuracyPolicy: tolerances must be positive");
        if (max_terms < 1)
            throw std::domain_error("AccuracyPolicy: max_terms must be >= 1");
        if (quadrature_nodes < 1)
            throw std::domain_error("AccuracyPolicy: quadrature_nodes must be >= 1");
    }
};

/// A truncated-series result together with a bound on the discarded tail.
struct ValueWithTail {
    double value = 0.0;
    double tail_bound = 0.0;
};

struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// ln(x v e): logarithm floored at 1.
inline double log_floor(double x) {
    return std::log(std::max(x, std::exp(1.0)));
}

/// |log x| with the same floor convention, so the value is >= 1 for all x > 0.
/// For small x this is ln(1/x); near x = 1 it saturates at 1.
inline double abs_log(double x) {
    if (x <= 0.0) throw std::domain_error("abs_log: x must be positive");
    return std::max(std::fabs(std::log(x)), 1.0);
}

/// Compensated (Kahan) accumulator for long series.
class KahanSum {
  public:
    void add(double x) {
        double y = x - comp_;
        double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Block-partitioned worker pool. Results must be written by index so the
/// output is independent of the thread count.
void parallel_for(std::int64_t n, int threads, const std::function<void(std::int64_t)>& body);

int default_thread_count();

}  // namespace sgfield
