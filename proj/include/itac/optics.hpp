#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "itac/error.hpp"

namespace itac::optics {

inline constexpr double kReferenceWavelengthNm = 700.0;
inline constexpr double kCanonicalThicknessMm = 3.0;
inline constexpr double kNoiseFloor = 1e-6;
inline constexpr double kScanMinNm = 200.0;
inline constexpr double kScanMaxNm = 1000.0;

struct SpectrumPoint {
    double wavelength_nm;
    double transmission;
};

/// Transmission T(lambda) of one specimen; intensities are already divided by the instrument.
class TransmissionSpectrum {
public:
    TransmissionSpectrum(std::string label, double thickness_mm, std::vector<SpectrumPoint> points)
        : label_(std::move(label)), thickness_mm_(thickness_mm), points_(std::move(points)) {
        if (!(thickness_mm_ > 0.0)) {
            throw Error(ErrorCode::InvalidArgument, "thickness must be positive", "thickness_mm");
        }
        if (points_.empty()) {
            throw Error(ErrorCode::InvalidArgument, "spectrum has no points", label_);
        }
        for (std::size_t i = 0; i < points_.size(); ++i) {
            const auto& p = points_[i];
            if (p.wavelength_nm < kScanMinNm || p.wavelength_nm > kScanMaxNm) {
                throw Error(ErrorCode::OutOfRange,
                            "wavelength " + std::to_string(p.wavelength_nm) + " nm outside scan range",
                            label_);
            }
            if (!(p.transmission >= 0.0 && p.transmission <= 1.0)) {
                throw Error(ErrorCode::InvalidArgument, "transmission outside [0,1]", label_);
            }
            if (i > 0 && !(p.wavelength_nm > points_[i - 1].wavelength_nm)) {
                throw Error(ErrorCode::InvalidArgument, "wavelengths must be strictly increasing",
                            label_);
            }
        }
    }

    [[nodiscard]] const std::string& label() const { return label_; }
    [[nodiscard]] double thickness_mm() const { return thickness_mm_; }
    [[nodiscard]] const std::vector<SpectrumPoint>& points() const { return points_; }

private:
    std::string label_;
    double thickness_mm_;
    std::vector<SpectrumPoint> points_;
};

/// Linear interpolation between bracketing samples; exact at sample wavelengths.
inline double transmission_at(const TransmissionSpectrum& spectrum, double wavelength_nm) {
    const auto& pts = spectrum.points();
    if (wavelength_nm < pts.front().wavelength_nm || wavelength_nm > pts.back().wavelength_nm) {
        throw Error(ErrorCode::OutOfRange,
                    "wavelength " + std::to_string(wavelength_nm) + " nm outside spectrum range",
                    spectrum.label());
    }
    auto hi = std::lower_bound(pts.begin(), pts.end(), wavelength_nm,
                               [](const SpectrumPoint& p, double w) { return p.wavelength_nm < w; });
    if (hi->wavelength_nm == wavelength_nm) return hi->transmission;
    auto lo = std::prev(hi);
    const double t = (wavelength_nm - lo->wavelength_nm) / (hi->wavelength_nm - lo->wavelength_nm);
    return lo->transmission + t * (hi->transmission - lo->transmission);
}

/// T_mix + (1 - T_bias), clamped to [0,1].
inline double unbiased_transparency(double t_mix, double t_bias) {
    return std::clamp(t_mix + (1.0 - t_bias), 0.0, 1.0);
}

inline double absorbance(double t_unbiased) {
    if (!(t_unbiased > 0.0)) {
        throw Error(ErrorCode::ZeroTransmission, "unbiased transparency is zero; absorbance unbounded");
    }
    return -std::log10(std::max(t_unbiased, kNoiseFloor));
}

/**
 * @brief Beer-Lambert opacity density, absorbance per millimetre of elastomer.
 *
 * Carries the leading minus sign of the absorbance definition so the result is
 * non-negative for any physical transmission.
 */
inline double opacity_density(double t_mix, double t_bias, double thickness_mm) {
    if (!(thickness_mm > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "thickness must be positive", "thickness_mm");
    }
    const double a = absorbance(unbiased_transparency(t_mix, t_bias));
    return a / thickness_mm;
}

struct OpticalSummary {
    double t_mix;
    double t_unbiased;
    double absorbance;
    double opacity_density;
};

inline OpticalSummary summarize(const TransmissionSpectrum& spectrum, double t_bias,
                                double wavelength_nm = kReferenceWavelengthNm) {
    OpticalSummary s{};
    s.t_mix = transmission_at(spectrum, wavelength_nm);
    s.t_unbiased = unbiased_transparency(s.t_mix, t_bias);
    s.absorbance = absorbance(s.t_unbiased);
    s.opacity_density = s.absorbance / spectrum.thickness_mm();
    return s;
}

}  // namespace itac::optics
