#pragma once

#include <string>
#include <vector>

#include "qrng/errors.hpp"

namespace qrng {

/// One point of the detector power sweep: optical power in mW against the
/// variance of the output a.c. voltage in mV².
struct PowerSweepPoint {
    double power_mw = 0.0;
    double variance_mv2 = 0.0;
};

/// Coefficients of the variance model  var(P) = aq·P + ac·P² + f  with
/// per-coefficient confidence half-widths at level `alpha`.
///
/// aq is the quantum contribution per mW, ac the power-quadratic classical
/// phase-noise contribution, f the power-independent background. Only the
/// gain-folded products are observable, so they are stored as single
/// coefficients.
struct NoiseModelParams {
    double aq = 0.0;  // mV²/mW
    double ac = 0.0;  // mV²/mW²
    double f = 0.0;   // mV²
    double ci_aq = 0.0;
    double ci_ac = 0.0;
    double ci_f = 0.0;
    double alpha = 0.99;
    double rss = 0.0;  // residual sum of squares of the fit, mV⁴
    /// Set when any fitted coefficient came out negative. Reported, never
    /// clamped; the caller decides how to proceed.
    bool negative_coefficient = false;
};

struct SnrCurvePoint {
    double power_mw = 0.0;
    double gamma = 0.0;
};

/// Least-squares fit of the quadratic variance model on the basis
/// {P, P², 1}. Normal equations with a pivoted 3×3 solve; confidence
/// half-widths from the residual variance, the inverse normal matrix and
/// the Student-t quantile at level `alpha`.
///
/// Throws DegenerateSweep if fewer than 3 distinct powers are present.
NoiseModelParams fit_noise_model(const std::vector<PowerSweepPoint>& sweep, double alpha = 0.99);

/// Quantum-signal to classical-noise ratio  γ(P) = aq·P / (ac·P² + f).
/// Throws ZeroDenominator when ac and f are both zero.
double snr(const NoiseModelParams& params, double power_mw);

/// Curve samples of γ over a power grid (inclusive log-spaced grid).
std::vector<SnrCurvePoint> snr_curve(const NoiseModelParams& params, double p_min, double p_max,
                                     std::size_t points);

struct OptimalPower {
    double power_mw = 0.0;
    double gamma = 0.0;
};

/// Stationary maximum of γ: P* = sqrt(f/ac), γ(P*) = aq·P*/(2f).
/// Throws NoInteriorMaximum when ac or f is zero (γ is then monotone).
OptimalPower optimal_power(const NoiseModelParams& params);

/// Parse a power sweep from CSV with header `power_mw,variance_mv2`.
std::vector<PowerSweepPoint> load_sweep_csv(const std::string& path);

/// JSON object with keys aq, ac, f, ci_aq, ci_ac, ci_f, alpha, rss (plus
/// the negative-coefficient flag).
std::string params_to_json(const NoiseModelParams& params);
NoiseModelParams params_from_json(const std::string& text);

}  // namespace qrng
