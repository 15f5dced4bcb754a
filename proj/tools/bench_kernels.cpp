/// @file
/// @brief Benchmark of the parallel stencil kernels against the serial
/// reference implementation, with a bit-for-bit agreement check.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "nsaudit/field.hpp"
#include "nsaudit/grid.hpp"
#include "nsaudit/operators.hpp"
#include "nsaudit/reference.hpp"

using namespace nsaudit;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
    fn(); // warm up
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

} // namespace

int main(int argc, char** argv) {
    const int n = argc > 1 ? std::atoi(argv[1]) : 256;
    const int reps = argc > 2 ? std::atoi(argv[2]) : 5;

    const GridSpec g = periodic_square(n, 6.283185307179586);
    std::mt19937 rng(42u);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    VectorField v(g, "m/s");
    for (double& x : v.data()) x = dist(rng);
    ScalarField s(g, "Pa");
    for (double& x : s.data()) x = dist(rng);

    std::printf("grid %dx%d, best of %d runs\n", n, n, reps);
    std::printf("%-18s %12s %12s %9s %8s\n", "kernel", "serial ms", "parallel ms", "speedup",
                "bitwise");

    bool all_equal = true;
    auto row = [&](const char* name, const std::vector<double>& par,
                   const std::vector<double>& ser, double tp, double ts) {
        const bool eq = same_bits(par, ser);
        all_equal = all_equal && eq;
        std::printf("%-18s %12.3f %12.3f %8.2fx %8s\n", name, ts, tp, ts / tp,
                    eq ? "yes" : "NO");
    };

    {
        VectorField a, b;
        const double tp = time_ms([&] { a = gradient(s); }, reps);
        const double ts = time_ms([&] { b = reference::gradient(s); }, reps);
        row("gradient", a.data(), b.data(), tp, ts);
    }
    {
        ScalarField a, b;
        const double tp = time_ms([&] { a = divergence(v); }, reps);
        const double ts = time_ms([&] { b = reference::divergence(v); }, reps);
        row("divergence", a.data(), b.data(), tp, ts);
    }
    {
        VectorField a, b;
        const double tp = time_ms([&] { a = curl(v); }, reps);
        const double ts = time_ms([&] { b = reference::curl(v); }, reps);
        row("curl", a.data(), b.data(), tp, ts);
    }
    {
        VectorField a, b;
        const double tp = time_ms([&] { a = vector_laplacian(v); }, reps);
        const double ts = time_ms([&] { b = reference::vector_laplacian(v); }, reps);
        row("vector_laplacian", a.data(), b.data(), tp, ts);
    }
    {
        ScalarField a, b;
        const double tp = time_ms([&] { a = scalar_laplacian(s); }, reps);
        const double ts = time_ms([&] { b = reference::scalar_laplacian(s); }, reps);
        row("scalar_laplacian", a.data(), b.data(), tp, ts);
    }
    {
        VectorField a, b;
        const double tp = time_ms([&] { a = advect(v); }, reps);
        const double ts = time_ms([&] { b = reference::advect(v); }, reps);
        row("advect", a.data(), b.data(), tp, ts);
    }

    if (!all_equal) {
        std::printf("MISMATCH: parallel kernels diverge from the serial reference\n");
        return 1;
    }
    std::printf("all kernels agree bit for bit with the serial reference\n");
    return 0;
}
