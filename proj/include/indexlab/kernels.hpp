#pragma once

#include <complex>
#include <string>
#include <string_view>

#include "indexlab/quad.hpp"

namespace indexlab::kernels {

using cplx = std::complex<double>;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double g) const { return g > lo && g < hi; }
};

// Kernel family tags.  ExpKL and PowerExp are the named instances of the
// general e^{-x/t}/r(t) (Laplace-at-1/t) construction with r(t) = e^t and
// r(t) = e^{t^m}; OnePlusT/OnePlusT2 are the polynomial-denominator
// e^{-xt}/P(t) construction with P = (1+t)^n and (1+t^2)^n.  IncGamma is
// OnePlusT with n = 1.
enum class FamilyKind { TruncatedMellin, ExpKL, PowerExp, OnePlusT, OnePlusT2 };

class TransformFamily {
public:
    static TransformFamily truncated_mellin(double a = 1.0);
    static TransformFamily exp_kl();
    static TransformFamily power_exp(int m);
    static TransformFamily one_plus_t(int n);
    static TransformFamily inc_gamma() { return one_plus_t(1); }
    static TransformFamily one_plus_t2(int n);

    // CLI names: "truncated-mellin[:a]", "exp-kl", "power-exp:m",
    // "one-plus-t:n", "inc-gamma", "one-plus-t2:n".
    static TransformFamily parse(std::string_view name);

    FamilyKind kind() const { return kind_; }
    bool is_general_laplace() const {
        return kind_ == FamilyKind::ExpKL || kind_ == FamilyKind::PowerExp;
    }
    bool is_polynomial() const {
        return kind_ == FamilyKind::OnePlusT || kind_ == FamilyKind::OnePlusT2;
    }
    double shift_a() const { return a_; } // TruncatedMellin only
    int power_m() const { return m_; }    // PowerExp only
    int poly_n() const { return n_; }     // polynomial families only
    std::string name() const;

    // Series coefficients a_k of r(t) = sum a_k t^k (general families) or of
    // P_n(t) (polynomial families); zero beyond the support.
    double r_coefficient(int k) const;

    /// Re z bound of the forward analyticity region (half-plane or strip).
    bool forward_z_ok(cplx z, double c0) const;
    /// Region description used in diagnostics.
    std::string forward_region(double c0) const;

    /// gamma strip of the inversion formula, as each theorem states it.
    Interval inversion_strip(double c0) const;

    /// Convergence strip of rho(s).
    Interval rho_strip() const;

    /// True when forward_kernel_closed has a genuine closed form
    /// (ExpKL, OnePlusT n = 1, OnePlusT2).
    bool has_closed_form() const;

private:
    TransformFamily(FamilyKind k, double a, int m, int n);
    FamilyKind kind_;
    double a_ = 1.0;
    int m_ = 1;
    int n_ = 1;
};

/// Kernel by its defining integral (pointwise x^{-z} e^{-ax} for
/// TruncatedMellin).  RegionError when Re z violates the kernel's region.
cplx forward_kernel(const TransformFamily& family, cplx z, double x,
                    const quad::QuadratureControl& control = {});

/// Kernel by its special-function closed form where one exists; delegates to
/// forward_kernel (with has_closed_form() == false) otherwise.
cplx forward_kernel_closed(const TransformFamily& family, cplx z, double x,
                           const quad::QuadratureControl& control = {});

/// Inversion kernel.  Both the coefficient-series and the closed
/// hypergeometric route are computed and must agree; *agreement (when given)
/// receives their relative discrepancy.
cplx inverse_kernel(const TransformFamily& family, cplx z, double x,
                    double* agreement = nullptr);

/// Mellin multiplier rho(s) of 1/r resp. 1/P_n, closed gamma form.
/// StripError outside the convergence strip.
cplx rho(const TransformFamily& family, cplx s);

} // namespace indexlab::kernels
