#pragma once

namespace qrng {

/// Standard normal CDF Φ(x), complementary-error-function based.
/// Absolute error well below 1e-12 over the full double range.
double gaussian_cdf(double x);

/// Regularized upper incomplete gamma Q(a, x) = Γ(a,x)/Γ(a); a > 0, x ≥ 0.
/// Series for x < a+1, Lentz continued fraction otherwise.
double regularized_gamma_q(double a, double x);

/// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);

/// Two-sided Student-t critical value: the t with
/// P(|T_dof| ≤ t) = level. Inverted from the CDF by bisection.
double student_t_critical(double level, int dof);

/// Kolmogorov asymptotic tail Q_KS(λ) = 2 Σ_{j≥1} (−1)^{j−1} e^{−2 j² λ²}.
double kolmogorov_q(double lambda);

}  // namespace qrng
