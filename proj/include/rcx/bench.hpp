#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rcx/fitting.hpp"

// Matrix-multiplication benchmark harness: four kernels with timing and
// instrumented peak-allocation tracking, correctness spot checks and
// measurement-set emission.

namespace rcx::bench {

// High-water tracking of matrix element storage. The window peak starts from
// whatever is currently live, so kernel inputs count toward the peak.
struct AllocStats {
    std::int64_t current_bytes = 0;
    std::int64_t peak_bytes = 0;
};

void alloc_window_begin();
AllocStats alloc_stats();

namespace detail {
void alloc_add(std::size_t bytes);
void alloc_sub(std::size_t bytes);
} // namespace detail

template <typename T>
struct TrackingAllocator {
    using value_type = T;

    TrackingAllocator() = default;
    template <typename U>
    TrackingAllocator(const TrackingAllocator<U>&) {}

    T* allocate(std::size_t count) {
        detail::alloc_add(count * sizeof(T));
        return static_cast<T*>(::operator new(count * sizeof(T)));
    }

    void deallocate(T* ptr, std::size_t count) {
        detail::alloc_sub(count * sizeof(T));
        ::operator delete(ptr);
    }

    template <typename U>
    bool operator==(const TrackingAllocator<U>&) const {
        return true;
    }
};

// Dense square matrix, row-major, zero-initialized.
class Matrix {
  public:
    explicit Matrix(std::size_t order);

    std::size_t order() const { return order_; }
    double& operator()(std::size_t i, std::size_t j) { return elems_[i * order_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return elems_[i * order_ + j]; }
    double* data() { return elems_.data(); }
    const double* data() const { return elems_.data(); }

    // Elements uniform in [-1, 1] from a seeded PRNG; bit-identical per
    // (order, seed) across runs.
    static Matrix random(std::size_t order, std::uint64_t seed);

    bool operator==(const Matrix&) const = default;

  private:
    std::size_t order_;
    std::vector<double, TrackingAllocator<double>> elems_;
};

// Largest relative elementwise gap measured through Frobenius norms.
double frobenius_relative_difference(const Matrix& a, const Matrix& b);

Matrix multiply_naive(const Matrix& a, const Matrix& b);
Matrix multiply_loop_reordered(const Matrix& a, const Matrix& b);
Matrix multiply_blocked(const Matrix& a, const Matrix& b, std::size_t block_size);
Matrix multiply_strassen(const Matrix& a, const Matrix& b, std::size_t cutoff);

enum class Kernel { Naive, LoopReordered, Blocked, Strassen };

std::string to_string(Kernel kernel);
Kernel kernel_from_string(const std::string& name);

struct BenchPlan {
    Kernel kernel = Kernel::Naive;
    std::vector<std::size_t> sizes;
    int repetitions = 5;
    int warmups = 2;
    std::size_t block_size = 64;     // Blocked only
    std::size_t strassen_cutoff = 32; // Strassen only
    std::uint64_t seed = 42;
    std::string label; // defaults to the kernel name
};

void validate(const BenchPlan& plan);

struct RunRecord {
    Kernel kernel;
    std::size_t n;
    double elapsed_s; // median over repetitions
    std::int64_t peak_alloc_bytes;
    int repetitions;
    std::string timestamp; // ISO-8601 UTC
};

struct BenchOutput {
    std::vector<RunRecord> records;
    MeasurementSet time_set;   // (n, median seconds)
    MeasurementSet memory_set; // (n, peak bytes)
};

class BenchError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Runs the plan serially: seeded inputs per size, warmups discarded, median of
// repetition timings on a monotonic clock, peak allocation around the kernel.
// Results for n <= 256 are spot-checked against the naive kernel; a mismatch
// raises BenchError.
BenchOutput run_bench(const BenchPlan& plan);

} // namespace rcx::bench
