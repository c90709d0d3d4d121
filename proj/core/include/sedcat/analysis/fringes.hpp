#pragma once

#include <optional>

#include "sedcat/analysis/histogram.hpp"
#include "sedcat/physics.hpp"

namespace sedcat::analysis {

struct ModalityOptions {
    double peak_over_median = 10.0;  // candidate peaks exceed this multiple of the median
    double valley_fraction = 0.2;    // valley between the peaks below this share of the lower peak
    double min_relative_height = 0.1;  // second peak at least this share of the highest
};

struct PacketSeparation {
    double a = 0.0;      // m
    double left = 0.0;   // m, refined left peak position
    double right = 0.0;  // m
};

// Peak-to-peak distance of a bimodal density: the global maximum and the
// highest other local maximum that passes the modality thresholds, each
// refined by a parabola through the neighbouring samples. Throws
// ModalityError when no such pair exists.
PacketSeparation packet_separation(const SampledDensity& rho, const ModalityOptions& options = {});

struct FringeOptions {
    double window_periods = 6.0;  // full width of the analysis window in predicted periods
    double centre = 0.0;          // m
    double band_low = 0.5;        // search band in units of the predicted wavenumber
    double band_high = 2.0;
    double detection_factor = 10.0;  // peak power over the noise floor
};

// Fringe metrics inside a Hann-weighted window centred on `centre`:
//   c(k) = sum_i w_i rho_i e^{-i k (x_i - centre)} dx.
// contrast is the fringe visibility 2 |c(k)| / c(0) at the measured
// wavenumber (the predicted one when no peak is detected), which equals
// (max - min)/(max + min) for sinusoidal fringes on a flat background.
// extrema_contrast is the raw (max - min)/(max + min) over the window.
// spectral_peak_ratio is |c(k_pred)|^2 / (N_w sum_i (w_i rho_i dx)^2), the
// share of the windowed power in the predicted fringe bin.
struct FringeReport {
    double separation = 0.0;        // m
    double predicted_lambda = 0.0;  // m, 2 pi hbar / (m w0 a)
    std::optional<double> measured_lambda;  // m
    double contrast = 0.0;
    double extrema_contrast = 0.0;
    double spectral_peak_ratio = 0.0;
    double wavenumber_used = 0.0;   // 1/m
    double window_half_width = 0.0; // m
    double peak_power = 0.0;
    double noise_power = 0.0;
};

// Throws ParameterError for window_periods < 5 or a non-positive
// separation, DataError when the density does not cover the window.
FringeReport fringe_analysis(const SampledDensity& rho, double a, const OscillatorParams& osc,
                             const FringeOptions& options = {});

}  // namespace sedcat::analysis
