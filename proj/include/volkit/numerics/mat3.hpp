#pragma once

#include <array>
#include <cstddef>

namespace volkit::numerics {

using Vec3 = std::array<double, 3>;

/// Row-major 3x3 matrix.
struct Mat3 {
    std::array<double, 9> entries{};

    [[nodiscard]] double& operator()(std::size_t r, std::size_t c) { return entries[3 * r + c]; }
    [[nodiscard]] double operator()(std::size_t r, std::size_t c) const {
        return entries[3 * r + c];
    }

    [[nodiscard]] static Mat3 identity();
    [[nodiscard]] static Mat3 diagonal(double a, double b, double c);
    [[nodiscard]] static Mat3 outer(const Vec3& u, const Vec3& v);

    [[nodiscard]] double determinant() const;
    [[nodiscard]] bool is_symmetric(double tol = 0.0) const;
};

inline constexpr double kDefaultSingularityFloor = 1e-13;

[[nodiscard]] Mat3 operator*(const Mat3& a, const Mat3& b);
[[nodiscard]] Vec3 operator*(const Mat3& m, const Vec3& v);
[[nodiscard]] Mat3 operator+(const Mat3& a, const Mat3& b);
[[nodiscard]] Mat3 operator*(double s, const Mat3& m);
[[nodiscard]] double dot(const Vec3& a, const Vec3& b);

/**
 * Inverse via the adjugate. Throws SingularMatrix (carrying the determinant)
 * when |det| <= singularity_floor.
 */
[[nodiscard]] Mat3 invert3(const Mat3& m, double singularity_floor = kDefaultSingularityFloor);

}  // namespace volkit::numerics
