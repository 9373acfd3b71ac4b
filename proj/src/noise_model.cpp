#include "qrng/noise_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qrng/special_functions.hpp"

namespace qrng {

namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;
using Vec3 = std::array<double, 3>;

// Gaussian elimination with partial pivoting; also accumulates the inverse.
// 3×3 systems only, so no scaling heroics are needed.
bool solve3_with_inverse(Mat3 a, Vec3 rhs, Vec3& x, Mat3& inv) {
    Mat3 id = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
        if (std::fabs(a[pivot][col]) < 1e-300) return false;
        std::swap(a[col], a[pivot]);
        std::swap(id[col], id[pivot]);
        std::swap(rhs[col], rhs[pivot]);
        const double inv_p = 1.0 / a[col][col];
        for (int c = 0; c < 3; ++c) {
            a[col][c] *= inv_p;
            id[col][c] *= inv_p;
        }
        rhs[col] *= inv_p;
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double factor = a[r][col];
            if (factor == 0.0) continue;
            for (int c = 0; c < 3; ++c) {
                a[r][c] -= factor * a[col][c];
                id[r][c] -= factor * id[col][c];
            }
            rhs[r] -= factor * rhs[col];
        }
    }
    x = rhs;
    inv = id;
    return true;
}

}  // namespace

NoiseModelParams fit_noise_model(const std::vector<PowerSweepPoint>& sweep, double alpha) {
    if (alpha <= 0.0 || alpha >= 1.0)
        throw std::invalid_argument("confidence level must lie in (0,1)");
    std::set<double> powers;
    for (const auto& pt : sweep) {
        if (pt.power_mw <= 0.0)
            throw std::invalid_argument("sweep powers must be positive");
        powers.insert(pt.power_mw);
    }
    if (powers.size() < 3)
        throw DegenerateSweep("need at least 3 distinct powers to fit the quadratic model");

    // Normal equations for the basis {P, P², 1}.
    Mat3 xtx = {};
    Vec3 xty = {};
    for (const auto& pt : sweep) {
        const Vec3 row = {pt.power_mw, pt.power_mw * pt.power_mw, 1.0};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) xtx[i][j] += row[i] * row[j];
            xty[i] += row[i] * pt.variance_mv2;
        }
    }

    Vec3 beta;
    Mat3 inv;
    if (!solve3_with_inverse(xtx, xty, beta, inv))
        throw DegenerateSweep("normal equations singular");

    double rss = 0.0;
    for (const auto& pt : sweep) {
        const double fitted = beta[0] * pt.power_mw + beta[1] * pt.power_mw * pt.power_mw + beta[2];
        const double r = pt.variance_mv2 - fitted;
        rss += r * r;
    }

    NoiseModelParams out;
    out.aq = beta[0];
    out.ac = beta[1];
    out.f = beta[2];
    out.alpha = alpha;
    out.rss = rss;
    out.negative_coefficient = beta[0] < 0.0 || beta[1] < 0.0 || beta[2] < 0.0;

    const int dof = static_cast<int>(sweep.size()) - 3;
    if (dof > 0 && rss > 0.0) {
        const double s2 = rss / dof;
        const double t = student_t_critical(alpha, dof);
        out.ci_aq = t * std::sqrt(s2 * inv[0][0]);
        out.ci_ac = t * std::sqrt(s2 * inv[1][1]);
        out.ci_f = t * std::sqrt(s2 * inv[2][2]);
    }
    // dof == 0 (interpolation) or an exact fit: zero-width intervals.
    return out;
}

double snr(const NoiseModelParams& params, double power_mw) {
    if (power_mw <= 0.0)
        throw std::invalid_argument("power must be positive");
    const double denom = params.ac * power_mw * power_mw + params.f;
    if (denom <= 0.0)
        throw ZeroDenominator("classical noise and background are both zero");
    return params.aq * power_mw / denom;
}

std::vector<SnrCurvePoint> snr_curve(const NoiseModelParams& params, double p_min, double p_max,
                                     std::size_t points) {
    if (p_min <= 0.0 || p_max <= p_min || points < 2)
        throw std::invalid_argument("snr_curve needs 0 < p_min < p_max and >= 2 points");
    std::vector<SnrCurvePoint> curve(points);
    const double step = std::log(p_max / p_min) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) {
        const double p = p_min * std::exp(step * static_cast<double>(i));
        curve[i] = {p, snr(params, p)};
    }
    return curve;
}

OptimalPower optimal_power(const NoiseModelParams& params) {
    if (params.ac <= 0.0 || params.f <= 0.0)
        throw NoInteriorMaximum("gamma is monotone when ac or f vanishes");
    OptimalPower out;
    out.power_mw = std::sqrt(params.f / params.ac);
    out.gamma = params.aq * out.power_mw / (2.0 * params.f);
    return out;
}

std::vector<PowerSweepPoint> load_sweep_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw FormatError("cannot open sweep CSV: " + path);
    std::string line;
    if (!std::getline(in, line))
        throw FormatError("empty sweep CSV: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "power_mw,variance_mv2")
        throw FormatError("sweep CSV must start with header power_mw,variance_mv2");
    std::vector<PowerSweepPoint> sweep;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        PowerSweepPoint pt;
        char comma = 0;
        if (!(row >> pt.power_mw >> comma >> pt.variance_mv2) || comma != ',')
            throw FormatError("bad sweep CSV row at line " + std::to_string(lineno));
        if (pt.power_mw <= 0.0 || pt.variance_mv2 < 0.0)
            throw FormatError("sweep CSV values out of range at line " + std::to_string(lineno));
        sweep.push_back(pt);
    }
    return sweep;
}

std::string params_to_json(const NoiseModelParams& p) {
    nlohmann::json j{{"aq", p.aq},       {"ac", p.ac},       {"f", p.f},
                     {"ci_aq", p.ci_aq}, {"ci_ac", p.ci_ac}, {"ci_f", p.ci_f},
                     {"alpha", p.alpha}, {"rss", p.rss},
                     {"negative_coefficient", p.negative_coefficient}};
    return j.dump(2);
}

NoiseModelParams params_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    NoiseModelParams p;
    p.aq = j.at("aq").get<double>();
    p.ac = j.at("ac").get<double>();
    p.f = j.at("f").get<double>();
    p.ci_aq = j.value("ci_aq", 0.0);
    p.ci_ac = j.value("ci_ac", 0.0);
    p.ci_f = j.value("ci_f", 0.0);
    p.alpha = j.value("alpha", 0.99);
    p.rss = j.value("rss", 0.0);
    p.negative_coefficient = j.value("negative_coefficient", false);
    return p;
}

}  // namespace qrng
