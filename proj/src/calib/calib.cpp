#include "qcs/calib/calib.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qcs::calib {

double rabi_amplitude_correction(double p5, double p7, double p9, double p11, double gain) {
    return -gain * (p5 - p7 + p9 - p11);
}

double recalibration_bandwidth(double tau_tot_s) {
    if (!(tau_tot_s > 0.0))
        throw NonPositiveDuration("loop duration must be positive, got " +
                                  std::to_string(tau_tot_s));
    return 1.0 / (8.0 * tau_tot_s);
}

// ---------------------------------------------------------------------------
// Small dense linear algebra

namespace {

void require_rectangular(const Mat& m, const char* what) {
    if (m.empty()) throw DimensionMismatch(std::string(what) + ": empty matrix");
    for (const auto& row : m)
        if (row.size() != m[0].size())
            throw DimensionMismatch(std::string(what) + ": ragged matrix");
}

}  // namespace

Vec mat_vec(const Mat& m, const Vec& v) {
    require_rectangular(m, "mat_vec");
    if (m[0].size() != v.size()) throw DimensionMismatch("mat_vec: shape mismatch");
    Vec out(m.size(), 0.0);
    for (size_t r = 0; r < m.size(); ++r)
        for (size_t c = 0; c < v.size(); ++c) out[r] += m[r][c] * v[c];
    return out;
}

Mat mat_mul(const Mat& a, const Mat& b) {
    require_rectangular(a, "mat_mul");
    require_rectangular(b, "mat_mul");
    if (a[0].size() != b.size()) throw DimensionMismatch("mat_mul: shape mismatch");
    Mat out(a.size(), Vec(b[0].size(), 0.0));
    for (size_t r = 0; r < a.size(); ++r)
        for (size_t k = 0; k < b.size(); ++k)
            for (size_t c = 0; c < b[0].size(); ++c) out[r][c] += a[r][k] * b[k][c];
    return out;
}

Mat invert(const Mat& m) {
    require_rectangular(m, "invert");
    size_t n = m.size();
    if (m[0].size() != n) throw DimensionMismatch("invert: matrix not square");
    Mat a = m;
    Mat inv(n, Vec(n, 0.0));
    for (size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
    for (size_t col = 0; col < n; ++col) {
        size_t pivot = col;
        for (size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (std::abs(a[pivot][col]) < 1e-300) throw SingularMatrix("invert: singular matrix");
        std::swap(a[col], a[pivot]);
        std::swap(inv[col], inv[pivot]);
        double d = a[col][col];
        for (size_t c = 0; c < n; ++c) {
            a[col][c] /= d;
            inv[col][c] /= d;
        }
        for (size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            double f = a[r][col];
            if (f == 0.0) continue;
            for (size_t c = 0; c < n; ++c) {
                a[r][c] -= f * a[col][c];
                inv[r][c] -= f * inv[col][c];
            }
        }
    }
    return inv;
}

Vec linear_update(const Vec& r_est, const UpdateMatrix& M, const Vec& p_ideal,
                  const Vec& p_meas) {
    if (p_ideal.size() != p_meas.size())
        throw DimensionMismatch("linear_update: outcome vectors differ in length");
    require_rectangular(M.m, "linear_update");
    if (M.m[0].size() != p_ideal.size() || M.m.size() != r_est.size())
        throw DimensionMismatch("linear_update: update matrix shape mismatch");
    Vec residual(p_ideal.size());
    for (size_t i = 0; i < residual.size(); ++i) residual[i] = p_ideal[i] - p_meas[i];
    Vec step = mat_vec(M.m, residual);
    Vec out = r_est;
    for (size_t i = 0; i < out.size(); ++i) out[i] += step[i];
    return out;
}

namespace {

// Random orthogonal matrix: Gram-Schmidt on a Gaussian matrix.
Mat random_orthogonal(int dim, CounterRng& rng) {
    Mat q(static_cast<size_t>(dim), Vec(static_cast<size_t>(dim)));
    for (auto& row : q)
        for (auto& v : row) v = rng.next_normal();
    for (size_t i = 0; i < q.size(); ++i) {
        for (size_t j = 0; j < i; ++j) {
            double dot = 0.0;
            for (size_t k = 0; k < q.size(); ++k) dot += q[i][k] * q[j][k];
            for (size_t k = 0; k < q.size(); ++k) q[i][k] -= dot * q[j][k];
        }
        double norm = 0.0;
        for (double v : q[i]) norm += v * v;
        norm = std::sqrt(norm);
        for (auto& v : q[i]) v /= norm;
    }
    return q;
}

}  // namespace

Mat random_sensitivity(int dim, CounterRng& rng) {
    if (dim < 1) throw DimensionMismatch("random_sensitivity: dimension must be positive");
    Mat q1 = random_orthogonal(dim, rng);
    Mat q2 = random_orthogonal(dim, rng);
    Mat d(static_cast<size_t>(dim), Vec(static_cast<size_t>(dim), 0.0));
    for (int i = 0; i < dim; ++i) {
        double u = rng.next_double();
        d[static_cast<size_t>(i)][static_cast<size_t>(i)] =
            std::exp(std::log(0.25) + u * (std::log(4.0) - std::log(0.25)));
    }
    return mat_mul(mat_mul(q1, d), q2);
}

// ---------------------------------------------------------------------------
// Closed-loop scenarios

namespace {

double estimate_p(double p, int shots, bool exact, CounterRng& rng) {
    if (exact) return p;
    int hits = 0;
    for (int i = 0; i < shots; ++i)
        if (rng.bernoulli(p)) ++hits;
    return static_cast<double>(hits) / static_cast<double>(shots);
}

}  // namespace

std::vector<RabiRound> simulate_rabi_tracking(const TrackingScenario& sc, PlantModel plant,
                                              uint64_t seed) {
    if (sc.shots_per_round < 1 && !sc.exact_probabilities)
        throw CalibError("shots_per_round must be at least 1");
    CounterRng rng(seed, rng_stream::scenario);
    std::vector<RabiRound> series;
    series.reserve(static_cast<size_t>(sc.rounds));
    for (int round = 0; round < sc.rounds; ++round) {
        RabiRound row;
        row.round = round;
        double est[4];
        const int pulses[4] = {5, 7, 9, 11};
        for (int i = 0; i < 4; ++i) {
            double p = rabi_flip_probability(pulses[i], plant.amp_error);
            est[i] = estimate_p(p, sc.shots_per_round, sc.exact_probabilities, rng);
        }
        row.p5 = est[0];
        row.p7 = est[1];
        row.p9 = est[2];
        row.p11 = est[3];
        if (sc.tracking_enabled) {
            double delta = rabi_amplitude_correction(est[0], est[1], est[2], est[3], sc.gain);
            plant.apply_amplitude_correction(delta);
        }
        row.amp_error = plant.amp_error;
        series.push_back(row);
    }
    return series;
}

namespace {

double ramsey_p(double detuning_hz, double tau_s) {
    return 0.5 * (1.0 - std::cos(2.0 * M_PI * detuning_hz * tau_s));
}

// Least squares over a scanned detuning grid with one parabolic refinement.
double fit_detuning(const std::vector<double>& tau_s, const std::vector<double>& p_hat,
                    double delta0_hz, double range_hz) {
    const int grid = 321;
    auto sse = [&](double delta) {
        double s = 0.0;
        for (size_t i = 0; i < tau_s.size(); ++i) {
            double m = ramsey_p(delta0_hz + delta, tau_s[i]);
            s += (m - p_hat[i]) * (m - p_hat[i]);
        }
        return s;
    };
    double best = 0.0, best_sse = sse(0.0);
    double step = 2.0 * range_hz / (grid - 1);
    for (int i = 0; i < grid; ++i) {
        double d = -range_hz + i * step;
        double s = sse(d);
        if (s < best_sse) {
            best_sse = s;
            best = d;
        }
    }
    // parabola through the best grid point and its neighbours
    if (best_sse == 0.0) return best;
    double l = sse(best - step), r = sse(best + step);
    double denom = l - 2.0 * best_sse + r;
    if (denom > 0.0) {
        double shift = 0.5 * (l - r) / denom * step;
        if (std::abs(shift) <= step) best += shift;
    }
    return best;
}

}  // namespace

std::vector<RamseyRound> simulate_ramsey_tracking(const TrackingScenario& sc, PlantModel plant,
                                                  uint64_t seed) {
    if (sc.tau_points_s.empty()) throw FitDegenerate("no Ramsey delay points");
    bool all_zero = true;
    for (double t : sc.tau_points_s)
        if (t > 0.0) all_zero = false;
    if (all_zero) throw FitDegenerate("Ramsey delays cannot distinguish detunings");
    if (sc.shots_per_round < 1 && !sc.exact_probabilities)
        throw CalibError("shots_per_round must be at least 1");

    CounterRng rng(seed, rng_stream::scenario);
    CounterRng drift_rng(seed, rng_stream::plant);
    std::vector<RamseyRound> series;
    series.reserve(static_cast<size_t>(sc.rounds));
    double correction_hz = 0.0;
    for (int round = 0; round < sc.rounds; ++round) {
        RamseyRound row;
        row.round = round;
        double t = round * sc.round_duration_s;
        row.true_detuning_hz = plant.drift_hz(t, drift_rng);
        double residual = row.true_detuning_hz - correction_hz;
        std::vector<double> p_hat;
        p_hat.reserve(sc.tau_points_s.size());
        for (double tau : sc.tau_points_s) {
            double p = ramsey_p(sc.deliberate_detuning_hz + residual, tau);
            p_hat.push_back(estimate_p(p, sc.shots_per_round, sc.exact_probabilities, rng));
        }
        row.estimated_detuning_hz =
            fit_detuning(sc.tau_points_s, p_hat, sc.deliberate_detuning_hz, sc.search_range_hz);
        if (sc.tracking_enabled) correction_hz += row.estimated_detuning_hz;
        row.corrected_detuning_hz = row.true_detuning_hz - correction_hz;
        series.push_back(row);
    }
    return series;
}

std::string rabi_series_csv(const std::vector<RabiRound>& series) {
    std::ostringstream o;
    o << "round,amp_error,p5,p7,p9,p11\n";
    for (const auto& r : series)
        o << r.round << "," << r.amp_error << "," << r.p5 << "," << r.p7 << "," << r.p9 << ","
          << r.p11 << "\n";
    return o.str();
}

std::string ramsey_series_csv(const std::vector<RamseyRound>& series) {
    std::ostringstream o;
    o << "round,true_detuning_hz,estimated_detuning_hz,corrected_detuning_hz\n";
    for (const auto& r : series)
        o << r.round << "," << r.true_detuning_hz << "," << r.estimated_detuning_hz << ","
          << r.corrected_detuning_hz << "\n";
    return o.str();
}

double rms(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    double s = 0.0;
    for (double x : xs) s += x * x;
    return std::sqrt(s / static_cast<double>(xs.size()));
}

}  // namespace qcs::calib
