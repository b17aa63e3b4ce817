#pragma once

// Shared helpers for the test binaries: deterministic random instances and
// throwaway directories for file round-trips.

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "simplexproj/simplexproj.hpp"

namespace testsup {

using simplexproj::Matrix;
using simplexproj::Vec;

// C = G^T G + 0.01 I with G entries uniform in [-1, 1]; SPD by construction.
inline Matrix random_spd(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Matrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g(i, j) = u(rng);
    Matrix c(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += g(k, i) * g(k, j);
            c(i, j) = s + (i == j ? 0.01 : 0.0);
        }
    return c;
}

inline Vec random_point(std::size_t n, std::mt19937_64& rng, double lo = -2.0,
                        double hi = 2.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    Vec v(n);
    for (double& x : v) x = u(rng);
    return v;
}

// Uniform-ish point of the standard simplex (normalized exponentials).
inline Vec random_feasible(std::size_t n, std::mt19937_64& rng) {
    std::exponential_distribution<double> e(1.0);
    Vec v(n);
    double s = 0.0;
    for (double& x : v) {
        x = e(rng);
        s += x;
    }
    for (double& x : v) x /= s;
    return v;
}

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::mt19937_64 rng{std::random_device{}()};
        path_ = std::filesystem::temp_directory_path() /
                ("simplexproj_" + tag + "_" + std::to_string(rng()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::filesystem::path file(const std::string& name) const { return path_ / name; }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline std::string write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p);
    out << content;
    return p.string();
}

} // namespace testsup
