#pragma once

// 16-point Gauss-Legendre rule on [-1, 1], positive half; shared by the
// adaptive panel integrators.
namespace indexlab::detail {

inline constexpr int kGaussN = 8; // nodes per half
inline constexpr double kGaussX[kGaussN] = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
    0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
    0.9445750230732326, 0.9894009349916499,
};
inline constexpr double kGaussW[kGaussN] = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
    0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
    0.0622535239386479, 0.0271524594117541,
};

// Composite value of f over [a, b] with one 16-point panel.
template <typename F>
auto gauss16(const F& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    auto acc = f(mid + half * kGaussX[0]) * kGaussW[0];
    acc += f(mid - half * kGaussX[0]) * kGaussW[0];
    for (int i = 1; i < kGaussN; ++i) {
        acc += (f(mid + half * kGaussX[i]) + f(mid - half * kGaussX[i])) * kGaussW[i];
    }
    return acc * half;
}

// Recursive bisection until whole-vs-halves agreement meets tol_abs.
template <typename F>
auto gauss16_adaptive(const F& f, double a, double b, double tol_abs,
                      int depth) -> decltype(f(a)) {
    auto whole = gauss16(f, a, b);
    const double mid = 0.5 * (a + b);
    auto left = gauss16(f, a, mid);
    auto right = gauss16(f, mid, b);
    if (std::abs(whole - (left + right)) <= tol_abs || depth <= 0)
        return left + right;
    return gauss16_adaptive(f, a, mid, 0.5 * tol_abs, depth - 1) +
           gauss16_adaptive(f, mid, b, 0.5 * tol_abs, depth - 1);
}

} // namespace indexlab::detail
