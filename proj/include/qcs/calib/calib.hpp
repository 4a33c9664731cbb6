#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "qcs/plant.hpp"
#include "qcs/rng.hpp"

namespace qcs::calib {

struct CalibError : std::runtime_error {
    explicit CalibError(const std::string& msg) : std::runtime_error(msg) {}
};
struct NonPositiveDuration : CalibError {
    explicit NonPositiveDuration(const std::string& msg) : CalibError(msg) {}
};
struct DimensionMismatch : CalibError {
    explicit DimensionMismatch(const std::string& msg) : CalibError(msg) {}
};
struct SingularMatrix : CalibError {
    explicit SingularMatrix(const std::string& msg) : CalibError(msg) {}
};
struct FitDegenerate : CalibError {
    explicit FitDegenerate(const std::string& msg) : CalibError(msg) {}
};

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;  // row-major, rectangular

// -gain * (P5 - P7 + P9 - P11): the pulse-train flip-proportion correction.
double rabi_amplitude_correction(double p5, double p7, double p9, double p11, double gain);

// Upper bound on how fast an embedded re-calibration loop of total duration
// tau_tot can track drift: 1 / (8 * tau_tot).
double recalibration_bandwidth(double tau_tot_s);

Vec mat_vec(const Mat& m, const Vec& v);
Mat mat_mul(const Mat& a, const Mat& b);
// Gaussian elimination with partial pivoting.
Mat invert(const Mat& m);

struct UpdateMatrix {
    Mat m;  // params x outcomes, the inverse of the sensitivity
};

// One linearized estimation step: r_est + M * (p_ideal - p_meas).
Vec linear_update(const Vec& r_est, const UpdateMatrix& M, const Vec& p_ideal, const Vec& p_meas);

// Random sensitivity matrix with singular values log-uniform in
// [0.25, 4], so the condition number never exceeds 16.
Mat random_sensitivity(int dim, CounterRng& rng);

struct TrackingScenario {
    double gain = 0.1;
    int shots_per_round = 100;
    int rounds = 50;
    bool tracking_enabled = true;
    bool exact_probabilities = false;  // skip shot noise (analysis runs)
    // Ramsey only
    std::vector<double> tau_points_s = {1e-6, 2e-6, 3e-6, 4e-6};
    double deliberate_detuning_hz = 100e3;  // makes the detuning sign observable
    double search_range_hz = 80e3;
    double round_duration_s = 100e-6;
};

struct RabiRound {
    int round = 0;
    double amp_error = 0.0;  // effective relative amplitude error after the round
    double p5 = 0, p7 = 0, p9 = 0, p11 = 0;
};

// Closed-loop amplitude tracking: each round estimates the flip proportion
// after 5, 7, 9 and 11 half-pi pulses and feeds the correction back.
std::vector<RabiRound> simulate_rabi_tracking(const TrackingScenario& sc, PlantModel plant,
                                              uint64_t seed);

struct RamseyRound {
    int round = 0;
    double true_detuning_hz = 0.0;
    double estimated_detuning_hz = 0.0;  // of the residual seen this round
    double corrected_detuning_hz = 0.0;  // residual after any correction
};

// Closed-loop frequency tracking against a drifting plant using a few-point
// Ramsey fringe fit per round.
std::vector<RamseyRound> simulate_ramsey_tracking(const TrackingScenario& sc, PlantModel plant,
                                                  uint64_t seed);

std::string rabi_series_csv(const std::vector<RabiRound>& series);
std::string ramsey_series_csv(const std::vector<RamseyRound>& series);

double rms(const std::vector<double>& xs);

}  // namespace qcs::calib
