#include "rcx/bench.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <memory>
#include <random>

namespace rcx::bench {

namespace {

std::atomic<std::int64_t> g_current_bytes{0};
std::atomic<std::int64_t> g_peak_bytes{0};

void raise_peak(std::int64_t current) {
    std::int64_t peak = g_peak_bytes.load(std::memory_order_relaxed);
    while (current > peak &&
           !g_peak_bytes.compare_exchange_weak(peak, current, std::memory_order_relaxed)) {
    }
}

} // namespace

void detail::alloc_add(std::size_t bytes) {
    std::int64_t current =
        g_current_bytes.fetch_add(static_cast<std::int64_t>(bytes), std::memory_order_relaxed) +
        static_cast<std::int64_t>(bytes);
    raise_peak(current);
}

void detail::alloc_sub(std::size_t bytes) {
    g_current_bytes.fetch_sub(static_cast<std::int64_t>(bytes), std::memory_order_relaxed);
}

void alloc_window_begin() {
    g_peak_bytes.store(g_current_bytes.load(std::memory_order_relaxed),
                       std::memory_order_relaxed);
}

AllocStats alloc_stats() {
    return {g_current_bytes.load(std::memory_order_relaxed),
            g_peak_bytes.load(std::memory_order_relaxed)};
}

Matrix::Matrix(std::size_t order) : order_(order), elems_(order * order, 0.0) {
    if (order == 0) throw std::invalid_argument("matrix order must be positive");
}

Matrix Matrix::random(std::size_t order, std::uint64_t seed) {
    Matrix m(order);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (std::size_t i = 0; i < order * order; ++i) m.elems_[i] = dist(rng);
    return m;
}

double frobenius_relative_difference(const Matrix& a, const Matrix& b) {
    if (a.order() != b.order()) throw std::invalid_argument("matrix orders differ");
    double diff = 0.0;
    double ref = 0.0;
    for (std::size_t i = 0; i < a.order(); ++i)
        for (std::size_t j = 0; j < a.order(); ++j) {
            double d = a(i, j) - b(i, j);
            diff += d * d;
            ref += a(i, j) * a(i, j);
        }
    if (ref == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::sqrt(diff / ref);
}

namespace {

void require_same_order(const Matrix& a, const Matrix& b) {
    if (a.order() != b.order()) throw std::invalid_argument("matrix orders differ");
}

} // namespace

Matrix multiply_naive(const Matrix& a, const Matrix& b) {
    require_same_order(a, b);
    std::size_t n = a.order();
    Matrix c(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double sum = 0.0;
            for (std::size_t k = 0; k < n; ++k) sum += a(i, k) * b(k, j);
            c(i, j) = sum;
        }
    return c;
}

Matrix multiply_loop_reordered(const Matrix& a, const Matrix& b) {
    require_same_order(a, b);
    std::size_t n = a.order();
    Matrix c(n);
    // i-k-j order streams rows of b instead of columns.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            double aik = a(i, k);
            for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

Matrix multiply_blocked(const Matrix& a, const Matrix& b, std::size_t block_size) {
    require_same_order(a, b);
    if (block_size < 1) throw std::invalid_argument("block size must be >= 1");
    std::size_t n = a.order();
    Matrix c(n);
    for (std::size_t i0 = 0; i0 < n; i0 += block_size) {
        std::size_t i_end = std::min(n, i0 + block_size);
        for (std::size_t k0 = 0; k0 < n; k0 += block_size) {
            std::size_t k_end = std::min(n, k0 + block_size);
            for (std::size_t j0 = 0; j0 < n; j0 += block_size) {
                std::size_t j_end = std::min(n, j0 + block_size);
                for (std::size_t i = i0; i < i_end; ++i)
                    for (std::size_t k = k0; k < k_end; ++k) {
                        double aik = a(i, k);
                        for (std::size_t j = j0; j < j_end; ++j) c(i, j) += aik * b(k, j);
                    }
            }
        }
    }
    return c;
}

namespace {

// Scratch matrices for the Strassen recursion. Blocks are retained until the
// top-level product completes; nothing is reused across recursion levels, so
// the allocation high-water grows with the full 7-way recursion tree.
struct StrassenScratch {
    std::vector<std::unique_ptr<Matrix>> retained;

    Matrix& make(std::size_t order) {
        retained.push_back(std::make_unique<Matrix>(order));
        return *retained.back();
    }
};

void copy_quadrant(const Matrix& src, Matrix& dst, std::size_t row0, std::size_t col0) {
    std::size_t q = dst.order();
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = 0; j < q; ++j) dst(i, j) = src(row0 + i, col0 + j);
}

void add_into(const Matrix& x, const Matrix& y, Matrix& out) {
    std::size_t q = out.order();
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = 0; j < q; ++j) out(i, j) = x(i, j) + y(i, j);
}

void sub_into(const Matrix& x, const Matrix& y, Matrix& out) {
    std::size_t q = out.order();
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = 0; j < q; ++j) out(i, j) = x(i, j) - y(i, j);
}

void multiply_loop_reordered_into(const Matrix& a, const Matrix& b, Matrix& c) {
    std::size_t n = a.order();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            double aik = a(i, k);
            for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
        }
}

Matrix& strassen_rec(const Matrix& a, const Matrix& b, std::size_t cutoff,
                     StrassenScratch& scratch) {
    std::size_t n = a.order();
    Matrix& c = scratch.make(n);
    if (n <= cutoff) {
        multiply_loop_reordered_into(a, b, c);
        return c;
    }
    std::size_t q = n / 2;

    Matrix& a11 = scratch.make(q);
    Matrix& a12 = scratch.make(q);
    Matrix& a21 = scratch.make(q);
    Matrix& a22 = scratch.make(q);
    Matrix& b11 = scratch.make(q);
    Matrix& b12 = scratch.make(q);
    Matrix& b21 = scratch.make(q);
    Matrix& b22 = scratch.make(q);
    copy_quadrant(a, a11, 0, 0);
    copy_quadrant(a, a12, 0, q);
    copy_quadrant(a, a21, q, 0);
    copy_quadrant(a, a22, q, q);
    copy_quadrant(b, b11, 0, 0);
    copy_quadrant(b, b12, 0, q);
    copy_quadrant(b, b21, q, 0);
    copy_quadrant(b, b22, q, q);

    Matrix& s1 = scratch.make(q);
    Matrix& s2 = scratch.make(q);
    Matrix& s3 = scratch.make(q);
    Matrix& s4 = scratch.make(q);
    Matrix& s5 = scratch.make(q);
    Matrix& s6 = scratch.make(q);
    Matrix& s7 = scratch.make(q);
    Matrix& s8 = scratch.make(q);
    Matrix& s9 = scratch.make(q);
    Matrix& s10 = scratch.make(q);
    add_into(a11, a22, s1);  // a11 + a22
    add_into(b11, b22, s2);  // b11 + b22
    add_into(a21, a22, s3);  // a21 + a22
    sub_into(b12, b22, s4);  // b12 - b22
    sub_into(b21, b11, s5);  // b21 - b11
    add_into(a11, a12, s6);  // a11 + a12
    sub_into(a21, a11, s7);  // a21 - a11
    add_into(b11, b12, s8);  // b11 + b12
    sub_into(a12, a22, s9);  // a12 - a22
    add_into(b21, b22, s10); // b21 + b22

    Matrix& m1 = strassen_rec(s1, s2, cutoff, scratch);
    Matrix& m2 = strassen_rec(s3, b11, cutoff, scratch);
    Matrix& m3 = strassen_rec(a11, s4, cutoff, scratch);
    Matrix& m4 = strassen_rec(a22, s5, cutoff, scratch);
    Matrix& m5 = strassen_rec(s6, b22, cutoff, scratch);
    Matrix& m6 = strassen_rec(s7, s8, cutoff, scratch);
    Matrix& m7 = strassen_rec(s9, s10, cutoff, scratch);

    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = 0; j < q; ++j) {
            c(i, j) = m1(i, j) + m4(i, j) - m5(i, j) + m7(i, j);
            c(i, j + q) = m3(i, j) + m5(i, j);
            c(i + q, j) = m2(i, j) + m4(i, j);
            c(i + q, j + q) = m1(i, j) - m2(i, j) + m3(i, j) + m6(i, j);
        }
    return c;
}

} // namespace

Matrix multiply_strassen(const Matrix& a, const Matrix& b, std::size_t cutoff) {
    require_same_order(a, b);
    if (cutoff < 2) throw std::invalid_argument("strassen cutoff must be >= 2");
    std::size_t n = a.order();
    StrassenScratch scratch;
    std::size_t padded = std::bit_ceil(n);
    const Matrix* lhs = &a;
    const Matrix* rhs = &b;
    if (padded != n) {
        Matrix& pa = scratch.make(padded);
        Matrix& pb = scratch.make(padded);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                pa(i, j) = a(i, j);
                pb(i, j) = b(i, j);
            }
        lhs = &pa;
        rhs = &pb;
    }
    Matrix& product = strassen_rec(*lhs, *rhs, cutoff, scratch);
    if (padded == n) return product;
    Matrix result(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) result(i, j) = product(i, j);
    return result;
}

std::string to_string(Kernel kernel) {
    switch (kernel) {
        case Kernel::Naive: return "naive";
        case Kernel::LoopReordered: return "reordered";
        case Kernel::Blocked: return "blocked";
        case Kernel::Strassen: return "strassen";
    }
    return "?";
}

Kernel kernel_from_string(const std::string& name) {
    if (name == "naive") return Kernel::Naive;
    if (name == "reordered" || name == "loop-reordered") return Kernel::LoopReordered;
    if (name == "blocked") return Kernel::Blocked;
    if (name == "strassen") return Kernel::Strassen;
    throw std::invalid_argument("unknown kernel: " + name);
}

void validate(const BenchPlan& plan) {
    if (plan.sizes.empty()) throw std::invalid_argument("plan needs at least one size");
    for (std::size_t n : plan.sizes)
        if (n == 0) throw std::invalid_argument("sizes must be positive");
    if (plan.repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
    if (plan.warmups < 0) throw std::invalid_argument("warmups must be >= 0");
    if (plan.kernel == Kernel::Blocked && plan.block_size < 1)
        throw std::invalid_argument("block size must be >= 1");
    if (plan.kernel == Kernel::Strassen && plan.strassen_cutoff < 2)
        throw std::invalid_argument("strassen cutoff must be >= 2");
}

namespace {

Matrix run_kernel(const BenchPlan& plan, const Matrix& a, const Matrix& b) {
    switch (plan.kernel) {
        case Kernel::Naive: return multiply_naive(a, b);
        case Kernel::LoopReordered: return multiply_loop_reordered(a, b);
        case Kernel::Blocked: return multiply_blocked(a, b, plan.block_size);
        case Kernel::Strassen: return multiply_strassen(a, b, plan.strassen_cutoff);
    }
    throw std::invalid_argument("unknown kernel");
}

double correctness_tolerance(Kernel kernel) {
    // Strassen trades numerical headroom for fewer multiplications.
    return kernel == Kernel::Strassen ? 1e-6 : 1e-10;
}

std::string utc_timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

std::uint64_t input_seed(std::uint64_t plan_seed, std::size_t n, std::uint64_t which) {
    // splitmix-style spread so each (size, operand) pair gets its own stream
    std::uint64_t x = plan_seed ^ (0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(n) * 2 + which + 1));
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    return x;
}

} // namespace

BenchOutput run_bench(const BenchPlan& plan) {
    validate(plan);
    std::string label = plan.label.empty() ? to_string(plan.kernel) : plan.label;
    BenchOutput out{
        {},
        MeasurementSet{{}, MetricKind::TimeSeconds, label, std::nullopt},
        MeasurementSet{{}, MetricKind::PeakMemoryBytes, label, std::nullopt},
    };
    for (std::size_t n : plan.sizes) {
        Matrix a = Matrix::random(n, input_seed(plan.seed, n, 0));
        Matrix b = Matrix::random(n, input_seed(plan.seed, n, 1));

        for (int w = 0; w < plan.warmups; ++w) run_kernel(plan, a, b);

        alloc_window_begin();
        std::vector<double> timings;
        timings.reserve(static_cast<std::size_t>(plan.repetitions));
        Matrix last(n);
        for (int rep = 0; rep < plan.repetitions; ++rep) {
            auto t0 = std::chrono::steady_clock::now();
            Matrix result = run_kernel(plan, a, b);
            auto t1 = std::chrono::steady_clock::now();
            timings.push_back(std::chrono::duration<double>(t1 - t0).count());
            last = std::move(result);
        }
        std::int64_t peak = alloc_stats().peak_bytes;

        // Spot check against the classical product where that stays cheap.
        if (n <= 256 && plan.kernel != Kernel::Naive) {
            Matrix reference = multiply_naive(a, b);
            double diff = frobenius_relative_difference(reference, last);
            if (diff > correctness_tolerance(plan.kernel))
                throw BenchError("kernel " + to_string(plan.kernel) + " diverged from naive at n=" +
                                 std::to_string(n) + " (relative diff " + std::to_string(diff) +
                                 ")");
        }

        std::sort(timings.begin(), timings.end());
        double median = timings[timings.size() / 2];
        if (timings.size() % 2 == 0)
            median = 0.5 * (median + timings[timings.size() / 2 - 1]);
        // Clock granularity floor keeps elapsed strictly positive.
        median = std::max(median, 1e-9);

        out.records.push_back(RunRecord{plan.kernel, n, median, peak, plan.repetitions,
                                        utc_timestamp()});
        out.time_set.samples.emplace_back(static_cast<std::int64_t>(n), median);
        out.memory_set.samples.emplace_back(static_cast<std::int64_t>(n),
                                            static_cast<double>(peak));
    }
    return out;
}

} // namespace rcx::bench
