#pragma once

#include <cstdint>
#include <stdexcept>

namespace qrng {

/// Symmetric uniform quantizer: 2^bits equally spaced bins over [-a, a].
struct AdcConfig {
    int bits = 8;
    double range_a = 15.0;  // mV

    int code_count() const { return 1 << bits; }
    double bin_width() const { return 2.0 * range_a / code_count(); }

    void validate() const {
        if (bits < 1 || bits > 16)
            throw std::invalid_argument("adc bits must lie in [1,16]");
        if (!(range_a > 0.0))
            throw std::invalid_argument("adc range must be positive");
    }
};

/// code = floor((v + a)/Δ), clamped to [0, 2^bits - 1]. Bins are
/// lower-inclusive [-a + kΔ, -a + (k+1)Δ) with the top bin closed;
/// out-of-range voltages land in the edge bins.
inline std::uint16_t quantize(double voltage_mv, const AdcConfig& adc) {
    const double scaled = (voltage_mv + adc.range_a) / adc.bin_width();
    if (scaled <= 0.0) return 0;
    const auto top = static_cast<std::uint16_t>(adc.code_count() - 1);
    if (scaled >= adc.code_count()) return top;
    const auto code = static_cast<std::uint16_t>(scaled);
    return code > top ? top : code;
}

/// Bin midpoint -a + (k + 0.5)Δ; the de-quantization used for variance
/// estimates.
inline double dequantize_midpoint(std::uint16_t code, const AdcConfig& adc) {
    return -adc.range_a + (code + 0.5) * adc.bin_width();
}

}  // namespace qrng
