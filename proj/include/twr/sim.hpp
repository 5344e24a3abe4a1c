#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "twr/common.hpp"
#include "twr/fft.hpp"
#include "twr/rng.hpp"

namespace twr::sim {

// System parameters of the simulated transceiver. Defaults are the uniform
// simulated/measured system values (LFM dechirped to beat form, SISO).
struct RadarParams {
    double carrier_freq_hz = 1.5e9;
    double bandwidth_hz = 2.0e9;
    double observation_s = 4.0;
    int num_pri = 1024;
    int fast_samples = 1024;
    double range_window_m = 4.0;  // [0, 4] m display window

    double pri_s() const { return observation_s / num_pri; }
    double chirp_slope() const { return bandwidth_hz / pri_s(); }  // mu*Ts == B exactly
    double slow_dt() const { return observation_s / num_pri; }
    double fast_dt() const { return pri_s() / fast_samples; }
    // beat-spectrum bin spacing in metres: r = c*f_beat/(2*mu), f_beat bin = 1/Ts
    double range_bin_m() const { return kSpeedOfLight / (2.0 * bandwidth_hz); }
};

enum class ActivityClass : int {
    S1_Empty = 0,
    S2_Punching,
    S3_Kicking,
    S4_Grabbing,
    S5_SittingDown,
    S6_StandingUp,
    S7_Rotating,
    S8_Walking,
    S9_SittingToWalking,
    S10_WalkingToSitting,
    S11_FallingToWalking,
    S12_WalkingToFalling,
};

inline constexpr int kNumClasses = 12;
inline constexpr int kNumNodes = 6;  // torso, head, two arms, two legs

inline const char* class_name(ActivityClass c) {
    static const char* names[kNumClasses] = {"S1", "S2", "S3",  "S4",  "S5",  "S6",
                                             "S7", "S8", "S9", "S10", "S11", "S12"};
    return names[static_cast<int>(c)];
}

inline ActivityClass class_from_name(const std::string& s) {
    for (int i = 0; i < kNumClasses; ++i)
        if (s == class_name(static_cast<ActivityClass>(i))) return static_cast<ActivityClass>(i);
    throw ConfigError("unknown activity class: " + s);
}

struct SceneConfig {
    double wall_thickness_m = 0.12;
    double wall_dielectric = 6.0;
    double wall_range_m = 0.6;
    double wall_reflectivity = 10.0;   // relative to unit body reflectivity
    double target_snr_db = -15.0;      // image-domain SNR of raw data
    double height_scale = 1.0;         // tester height / 1.8 m
};

// Radial range of each limb node per PRI plus per-node reflectivity.
struct BodyTrajectory {
    Matrix node_ranges_m;              // kNumNodes x M
    Vector node_amplitudes;            // kNumNodes
};

struct EchoMatrix {
    CMatrix data;                      // fast_samples x num_pri
    RadarParams params;
};

// ---------------------------------------------------------------------------
// Kinematic templates.
//
// The body is six scattering centres. Each class is a parametric template:
// a torso range profile (translation + optional one-shot step + sway) and
// five limb oscillators riding on it. Envelope selects when an oscillator is
// active relative to the transition time of two-phase activities.
// ---------------------------------------------------------------------------

enum class Envelope : int { Always = 0, BeforeSwitch = 1, AfterSwitch = 2, BurstAtSwitch = 3 };

struct LimbTemplate {
    double offset_m = 0.0;   // mean radial offset from torso, scaled by height
    double amp_m = 0.0;      // oscillation amplitude at height 1.8 m
    double freq_hz = 0.0;
    double phase_rad = 0.0;
    Envelope envelope = Envelope::Always;
};

struct ClassTemplate {
    double torso_vel_mps = 0.0;        // bulk translation speed (magnitude)
    bool vel_sign_seeded = false;      // approach/recede chosen per sample
    Envelope vel_envelope = Envelope::Always;
    double torso_step_m = 0.0;         // one-shot radial step (sit, stand, fall)
    double torso_step_width_s = 0.4;
    double torso_sway_amp_m = 0.0;
    double torso_sway_freq_hz = 0.0;
    double switch_min_s = 1.5;         // transition time window
    double switch_max_s = 2.5;
    std::array<LimbTemplate, kNumNodes - 1> limbs{};  // head, L arm, R arm, L leg, R leg
    std::array<double, kNumNodes> reflectivity{1.0, 0.4, 0.35, 0.35, 0.45, 0.45};
    bool empty_scene = false;
};

inline std::array<ClassTemplate, kNumClasses> default_templates() {
    std::array<ClassTemplate, kNumClasses> t{};
    constexpr double pi = M_PI;
    auto limb = [](double off, double amp, double f, double ph,
                   Envelope env = Envelope::Always) {
        return LimbTemplate{off, amp, f, ph, env};
    };

    // S1 empty scene
    t[0].empty_scene = true;

    // S2 punching: static torso, alternating fast arms
    t[1].torso_sway_amp_m = 0.02;
    t[1].torso_sway_freq_hz = 1.6;
    t[1].limbs = {limb(-0.05, 0.03, 1.6, 0.3), limb(0.15, 0.26, 1.6, 0.0),
                  limb(0.15, 0.30, 1.6, pi), limb(0.05, 0.02, 1.6, 0.5),
                  limb(0.05, 0.02, 1.6, 1.2)};

    // S3 kicking: one dominant slower leg, slight counter-sway
    t[2].torso_sway_amp_m = 0.03;
    t[2].torso_sway_freq_hz = 1.0;
    t[2].limbs = {limb(-0.05, 0.04, 1.0, 0.2), limb(0.1, 0.08, 1.0, pi),
                  limb(0.1, 0.08, 1.0, 0.0), limb(0.1, 0.06, 1.0, pi / 2),
                  limb(0.12, 0.34, 1.0, 0.0)};

    // S4 grabbing: slow single-arm reach
    t[3].torso_sway_amp_m = 0.02;
    t[3].torso_sway_freq_hz = 0.5;
    t[3].limbs = {limb(-0.05, 0.02, 0.5, 0.1), limb(0.1, 0.06, 0.5, pi),
                  limb(0.15, 0.28, 0.5, 0.0), limb(0.05, 0.015, 0.5, 0.4),
                  limb(0.05, 0.015, 0.5, 1.0)};

    // S5 sitting down: monotone torso descent mid-window, brief limb burst
    t[4].torso_step_m = 0.22;
    t[4].torso_step_width_s = 0.45;
    t[4].limbs = {limb(-0.05, 0.03, 0.9, 0.0, Envelope::BurstAtSwitch),
                  limb(0.1, 0.10, 0.9, 0.3, Envelope::BurstAtSwitch),
                  limb(0.1, 0.10, 0.9, pi, Envelope::BurstAtSwitch),
                  limb(0.08, 0.12, 0.9, 0.8, Envelope::BurstAtSwitch),
                  limb(0.08, 0.12, 0.9, 2.1, Envelope::BurstAtSwitch)};

    // S6 standing up: mirror of S5
    t[5] = t[4];
    t[5].torso_step_m = -0.22;

    // S7 rotating: phase-staggered limbs, no net translation
    t[6].torso_sway_amp_m = 0.04;
    t[6].torso_sway_freq_hz = 0.7;
    t[6].limbs = {limb(-0.05, 0.06, 0.7, 0.0), limb(0.12, 0.24, 0.7, 0.0),
                  limb(0.12, 0.24, 0.7, pi), limb(0.1, 0.20, 0.7, pi / 2),
                  limb(0.1, 0.20, 0.7, 3 * pi / 2)};

    // S8 walking: translating torso, counter-phase arm/leg swing
    t[7].torso_vel_mps = 0.45;
    t[7].vel_sign_seeded = true;
    t[7].limbs = {limb(-0.05, 0.04, 1.4, 0.2), limb(0.1, 0.20, 1.4, 0.0),
                  limb(0.1, 0.20, 1.4, pi), limb(0.08, 0.30, 1.4, pi),
                  limb(0.08, 0.30, 1.4, 0.0)};

    // S9 sitting to walking: stand-up step, then gait
    t[8].torso_vel_mps = 0.45;
    t[8].vel_envelope = Envelope::AfterSwitch;
    t[8].torso_step_m = -0.20;
    t[8].torso_step_width_s = 0.45;
    t[8].limbs = {limb(-0.05, 0.04, 1.4, 0.2, Envelope::AfterSwitch),
                  limb(0.1, 0.20, 1.4, 0.0, Envelope::AfterSwitch),
                  limb(0.1, 0.20, 1.4, pi, Envelope::AfterSwitch),
                  limb(0.08, 0.30, 1.4, pi, Envelope::AfterSwitch),
                  limb(0.08, 0.30, 1.4, 0.0, Envelope::AfterSwitch)};

    // S10 walking to sitting
    t[9].torso_vel_mps = 0.45;
    t[9].vel_envelope = Envelope::BeforeSwitch;
    t[9].torso_step_m = 0.20;
    t[9].torso_step_width_s = 0.45;
    t[9].limbs = {limb(-0.05, 0.04, 1.4, 0.2, Envelope::BeforeSwitch),
                  limb(0.1, 0.20, 1.4, 0.0, Envelope::BeforeSwitch),
                  limb(0.1, 0.20, 1.4, pi, Envelope::BeforeSwitch),
                  limb(0.08, 0.30, 1.4, pi, Envelope::BeforeSwitch),
                  limb(0.08, 0.30, 1.4, 0.0, Envelope::BeforeSwitch)};

    // S11 falling to walking: fast early drop, then gait
    t[10].torso_vel_mps = 0.45;
    t[10].vel_envelope = Envelope::AfterSwitch;
    t[10].torso_step_m = 0.65;
    t[10].torso_step_width_s = 0.16;
    t[10].switch_min_s = 0.9;
    t[10].switch_max_s = 1.5;
    t[10].limbs = {limb(-0.05, 0.04, 1.4, 0.2, Envelope::AfterSwitch),
                   limb(0.1, 0.20, 1.4, 0.0, Envelope::AfterSwitch),
                   limb(0.1, 0.20, 1.4, pi, Envelope::AfterSwitch),
                   limb(0.08, 0.30, 1.4, pi, Envelope::AfterSwitch),
                   limb(0.08, 0.30, 1.4, 0.0, Envelope::AfterSwitch)};

    // S12 walking to falling
    t[11].torso_vel_mps = 0.45;
    t[11].vel_envelope = Envelope::BeforeSwitch;
    t[11].torso_step_m = 0.65;
    t[11].torso_step_width_s = 0.16;
    t[11].switch_min_s = 2.4;
    t[11].switch_max_s = 3.0;
    t[11].limbs = {limb(-0.05, 0.04, 1.4, 0.2, Envelope::BeforeSwitch),
                   limb(0.1, 0.20, 1.4, 0.0, Envelope::BeforeSwitch),
                   limb(0.1, 0.20, 1.4, pi, Envelope::BeforeSwitch),
                   limb(0.08, 0.30, 1.4, pi, Envelope::BeforeSwitch),
                   limb(0.08, 0.30, 1.4, 0.0, Envelope::BeforeSwitch)};

    return t;
}

namespace detail {

inline double envelope_value(Envelope e, double t, double ts) {
    switch (e) {
        case Envelope::Always: return 1.0;
        case Envelope::BeforeSwitch: return 0.5 * (1.0 - std::tanh((t - ts) / 0.2));
        case Envelope::AfterSwitch: return 0.5 * (1.0 + std::tanh((t - ts) / 0.2));
        case Envelope::BurstAtSwitch: {
            const double u = (t - ts) / 0.3;
            return std::exp(-0.5 * u * u);
        }
    }
    return 1.0;
}

}  // namespace detail

// Deterministic per-class trajectory. height_scale multiplies limb
// oscillation amplitudes and mean limb offsets only; the torso profile and
// all seeded draws are height-independent so trajectories at two scales are
// directly comparable for a fixed seed.
inline BodyTrajectory build_trajectory(ActivityClass cls, const SceneConfig& scene,
                                       const RadarParams& params, std::uint64_t seed,
                                       const std::array<ClassTemplate, kNumClasses>& table =
                                           default_templates()) {
    const ClassTemplate& tpl = table[static_cast<int>(cls)];
    const int M = params.num_pri;
    const double dt = params.slow_dt();

    BodyTrajectory traj;
    traj.node_ranges_m = Matrix::Zero(kNumNodes, M);
    traj.node_amplitudes = Vector::Zero(kNumNodes);

    if (tpl.empty_scene) {
        traj.node_ranges_m.setConstant(2.5);
        return traj;
    }

    Rng rng(seed);
    // draw order is part of the determinism contract; do not reorder
    const double start_u = rng.uniform();
    const double dir_u = rng.uniform();
    const double vel_jit = rng.uniform(0.85, 1.15);
    const double ts = rng.uniform(tpl.switch_min_s, tpl.switch_max_s);
    const double global_phase = rng.uniform(0.0, 2.0 * M_PI);
    std::array<double, kNumNodes - 1> amp_jit{}, freq_jit{}, phase_jit{};
    for (int i = 0; i < kNumNodes - 1; ++i) {
        amp_jit[i] = rng.uniform(0.9, 1.1);
        freq_jit[i] = rng.uniform(0.95, 1.05);
        phase_jit[i] = rng.uniform(-0.3, 0.3);
    }
    std::array<double, kNumNodes> refl_jit{};
    for (int i = 0; i < kNumNodes; ++i) refl_jit[i] = rng.uniform(0.9, 1.1);

    const double dir = tpl.vel_sign_seeded ? (dir_u < 0.5 ? -1.0 : 1.0) : -1.0;
    const double vel = dir * tpl.torso_vel_mps * vel_jit;

    // torso profile relative to the (unknown) start range
    Vector torso_rel(M);
    double disp = 0.0;
    for (int m = 0; m < M; ++m) {
        const double t = m * dt;
        const double sway =
            tpl.torso_sway_amp_m * std::sin(2.0 * M_PI * tpl.torso_sway_freq_hz * t + global_phase);
        const double step =
            tpl.torso_step_m * 0.5 * (1.0 + std::tanh((t - ts) / tpl.torso_step_width_s));
        torso_rel(m) = disp + sway + step;
        disp += vel * detail::envelope_value(tpl.vel_envelope, t, ts) * dt;
    }

    // pick a start range that keeps every node inside the motion annulus
    const double margin = 0.45;  // room for limb offsets + oscillation at any scale
    const double lo = 1.0 + margin - torso_rel.minCoeff();
    const double hi = 4.0 - margin - torso_rel.maxCoeff();
    const double start = (hi > lo) ? lo + start_u * (hi - lo) : 0.5 * (lo + hi);

    const double hs = scene.height_scale;
    for (int m = 0; m < M; ++m) {
        const double t = m * dt;
        const double torso = start + torso_rel(m);
        traj.node_ranges_m(0, m) = torso;
        for (int i = 0; i < kNumNodes - 1; ++i) {
            const LimbTemplate& lb = tpl.limbs[i];
            const double env = detail::envelope_value(lb.envelope, t, ts);
            const double osc = hs * lb.amp_m * amp_jit[i] * env *
                               std::sin(2.0 * M_PI * lb.freq_hz * freq_jit[i] * t + lb.phase_rad +
                                        phase_jit[i] + global_phase);
            traj.node_ranges_m(i + 1, m) = torso + hs * lb.offset_m + osc;
        }
    }
    // hard clamp to the legal annulus
    traj.node_ranges_m = traj.node_ranges_m.cwiseMax(1.001).cwiseMin(3.999);

    for (int i = 0; i < kNumNodes; ++i)
        traj.node_amplitudes(i) = tpl.reflectivity[i] * refl_jit[i];
    return traj;
}

// Dechirped (beat-form) echo of the six scattering centres:
//   data(n,m) = sum_i A_i exp(j 2 pi (fc*tau - mu*tau^2/2 + mu*t_n*tau))
// with tau the two-way delay of node i in PRI m and t_n the fast-time sample
// offset. Within one PRI the phase advances by a constant increment, so each
// column is six complex geometric progressions.
inline EchoMatrix synthesize_echo(const BodyTrajectory& traj, const RadarParams& params) {
    const int N = params.fast_samples;
    const int M = params.num_pri;
    const double mu = params.chirp_slope();
    const double fc = params.carrier_freq_hz;
    const double dt_fast = params.fast_dt();

    EchoMatrix echo;
    echo.params = params;
    echo.data = CMatrix::Zero(N, M);

    for (int m = 0; m < M; ++m) {
        for (int i = 0; i < kNumNodes; ++i) {
            const double a = traj.node_amplitudes(i);
            if (a == 0.0) continue;
            const double r = traj.node_ranges_m(i, m);
            if (r < 0.0 || r > params.range_window_m)
                throw RangeOutOfWindow("node range " + std::to_string(r) +
                                       " m outside [0, " + std::to_string(params.range_window_m) +
                                       "] m");
            const double tau = 2.0 * r / kSpeedOfLight;
            const double phi0 = 2.0 * M_PI * (fc * tau - 0.5 * mu * tau * tau);
            const double dphi = 2.0 * M_PI * mu * dt_fast * tau;
            std::complex<double> e = a * std::complex<double>(std::cos(phi0), std::sin(phi0));
            const std::complex<double> rot(std::cos(dphi), std::sin(dphi));
            auto col = echo.data.col(m);
            for (int n = 0; n < N; ++n) {
                col(n) += e;
                e *= rot;
            }
        }
    }
    return echo;
}

namespace detail {

// fast-time spectrum magnitudes squared, no normalization
inline Matrix power_image(const CMatrix& data) {
    const auto N = static_cast<std::size_t>(data.rows());
    Matrix img(data.rows(), data.cols());
    std::vector<std::complex<double>> buf(N);
    for (Eigen::Index m = 0; m < data.cols(); ++m) {
        for (std::size_t n = 0; n < N; ++n) buf[n] = data(static_cast<Eigen::Index>(n), m);
        fft_inplace(buf.data(), N);
        for (std::size_t n = 0; n < N; ++n) img(static_cast<Eigen::Index>(n), m) = std::norm(buf[n]);
    }
    return img;
}

}  // namespace detail

// Static wall return: one complex column repeated over slow time.
inline CMatrix wall_column_echo(const SceneConfig& scene, const RadarParams& params) {
    const int N = params.fast_samples;
    const double mu = params.chirp_slope();
    const double fc = params.carrier_freq_hz;
    const double tau = 2.0 * scene.wall_range_m / kSpeedOfLight;
    const double phi0 = 2.0 * M_PI * (fc * tau - 0.5 * mu * tau * tau);
    const double dphi = 2.0 * M_PI * mu * params.fast_dt() * tau;
    CMatrix col(N, 1);
    std::complex<double> e =
        scene.wall_reflectivity * std::complex<double>(std::cos(phi0), std::sin(phi0));
    const std::complex<double> rot(std::cos(dphi), std::sin(dphi));
    for (int n = 0; n < N; ++n) {
        col(n, 0) = e;
        e *= rot;
    }
    return col;
}

// Image-domain SNR estimator shared by calibration and verification:
// mean power of the clean signal over its own support (pixels above 5% of
// the image peak) against mean noise power per image pixel.
inline double measure_image_snr_db(const CMatrix& clean_signal, const CMatrix& noise) {
    const Matrix sig = detail::power_image(clean_signal);
    const Matrix ns = detail::power_image(noise);
    const double peak = sig.maxCoeff();
    if (peak <= 0.0) return -std::numeric_limits<double>::infinity();
    const double thresh = 0.0025 * peak;  // (5% amplitude)^2
    double sig_sum = 0.0;
    long sig_count = 0;
    for (Eigen::Index r = 0; r < sig.rows(); ++r) {
        for (Eigen::Index c = 0; c < sig.cols(); ++c) {
            if (sig(r, c) >= thresh) {
                sig_sum += sig(r, c);
                ++sig_count;
            }
        }
    }
    const double noise_mean = ns.mean();
    if (noise_mean <= 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10((sig_sum / std::max<long>(sig_count, 1)) / noise_mean);
}

// Adds the static wall column and circular complex white noise calibrated so
// the image-domain SNR of the human return hits scene.target_snr_db. For an
// empty scene the noise gets unit per-sample power.
inline EchoMatrix add_wall_and_noise(const EchoMatrix& echo, const SceneConfig& scene,
                                     std::uint64_t seed) {
    const int N = echo.params.fast_samples;
    const int M = echo.params.num_pri;
    EchoMatrix out;
    out.params = echo.params;
    out.data = echo.data;

    if (scene.wall_reflectivity != 0.0) {
        const CMatrix wall = wall_column_echo(scene, echo.params);
        for (int m = 0; m < M; ++m) out.data.col(m) += wall.col(0);
    }

    if (std::isfinite(scene.target_snr_db)) {
        // signal region mean power in the beat-spectrum image
        const Matrix sig = detail::power_image(echo.data);
        const double peak = sig.maxCoeff();
        double sigma2;  // raw-domain per-sample complex noise variance
        if (peak <= 0.0) {
            sigma2 = 1.0;
        } else {
            const double thresh = 0.0025 * peak;
            double sig_sum = 0.0;
            long cnt = 0;
            for (Eigen::Index r = 0; r < sig.rows(); ++r)
                for (Eigen::Index c = 0; c < sig.cols(); ++c)
                    if (sig(r, c) >= thresh) { sig_sum += sig(r, c); ++cnt; }
            const double p_sig = sig_sum / std::max<long>(cnt, 1);
            // unit-variance raw noise has mean image power N per pixel
            sigma2 = p_sig / (static_cast<double>(N) * std::pow(10.0, scene.target_snr_db / 10.0));
        }
        const double s = std::sqrt(sigma2 / 2.0);
        Rng rng(mix_seed(seed, 0x6E6F6973ULL));  // independent noise stream
        for (int m = 0; m < M; ++m)
            for (int n = 0; n < N; ++n)
                out.data(n, m) += std::complex<double>(s * rng.normal(), s * rng.normal());
    }
    return out;
}

// Convenience: full simulated sample (trajectory -> echo -> wall + noise).
inline EchoMatrix simulate_sample(ActivityClass cls, const SceneConfig& scene,
                                  const RadarParams& params, std::uint64_t seed,
                                  const std::array<ClassTemplate, kNumClasses>& table =
                                      default_templates()) {
    const BodyTrajectory traj = build_trajectory(cls, scene, params, seed, table);
    EchoMatrix echo = synthesize_echo(traj, params);
    return add_wall_and_noise(echo, scene, seed);
}

}  // namespace twr::sim
