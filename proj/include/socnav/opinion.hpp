#pragma once

// Opinion and attention dynamics deciding the robot's passing side.
//
// The opinion z drifts toward zero at rate d_r and is excited through a
// saturating tanh of self-reinforcement, social input and bias:
//
//   dz/dt = -d_r z + u tanh(alpha_r z + gamma_r z_hat + b_r)
//
// The attention u relaxes toward a distance-dependent target g(d) with time
// constant tau_u. Above the critical attention u = d_r / alpha_r the neutral
// opinion z = 0 turns unstable (pitchfork) and z commits to one sign, which
// selects the rotation sense gamma of the avoidance vortex.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "socnav/geometry.hpp"

namespace socnav {

struct OpinionParams {
    double d_r = 1.5;        // opinion decay rate, 1/s
    double alpha_r = 100.0;  // self-reinforcement weight
    double gamma_r = 100.0;  // social input weight
    double b_r = 0.0;        // bias
    double u_lo = 0.0;       // attention floor
    double u_hi = 1.5;       // attention ceiling
    double R_r = 3.0;        // critical distance, m
    double n = 7.0;          // attention sharpness exponent
    double tau_u = 0.2;      // attention time constant, s
    double z_hat_max = 10.0; // clamp on the perceived opinion

    void validate() const {
        if (!(d_r > 0.0)) throw std::invalid_argument("OpinionParams.d_r must be > 0");
        if (!(alpha_r > 0.0)) throw std::invalid_argument("OpinionParams.alpha_r must be > 0");
        if (!(u_lo >= 0.0)) throw std::invalid_argument("OpinionParams.u_lo must be >= 0");
        if (!(u_hi > u_lo)) throw std::invalid_argument("OpinionParams.u_hi must be > u_lo");
        if (!(R_r > 0.0)) throw std::invalid_argument("OpinionParams.R_r must be > 0");
        if (!(n >= 1.0)) throw std::invalid_argument("OpinionParams.n must be >= 1");
        if (!(tau_u > 0.0)) throw std::invalid_argument("OpinionParams.tau_u must be > 0");
        if (!(z_hat_max > 0.0)) throw std::invalid_argument("OpinionParams.z_hat_max must be > 0");
    }
};

struct OpinionState {
    double z = 0.0;  // passing-side opinion: >0 left, <0 right
    double u = 0.0;  // attention in [u_lo, u_hi]
};

/// Observation graph for coupled opinion updates. adjacency[i][k] = 1 when
/// agent i observes agent k; zero diagonal. gamma[i] weights the observed
/// opinions in agent i's update.
struct CouplingParams {
    std::vector<std::vector<int>> adjacency;
    std::vector<double> gamma;

    void validate() const {
        const std::size_t n = adjacency.size();
        if (gamma.size() != n)
            throw std::invalid_argument("CouplingParams: gamma size mismatch");
        for (std::size_t i = 0; i < n; ++i) {
            if (adjacency[i].size() != n)
                throw std::invalid_argument("CouplingParams: adjacency not square");
            if (adjacency[i][i] != 0)
                throw std::invalid_argument("CouplingParams: adjacency diagonal must be 0");
            for (int a : adjacency[i])
                if (a != 0 && a != 1)
                    throw std::invalid_argument("CouplingParams: adjacency entries must be 0/1");
        }
    }
};

/// Perceived opinion of an observed agent from its relative angle eta,
/// z_hat = tan(eta), clamped to +-z_hat_max. Requires |eta| < pi/2; the
/// field-of-view gate upstream guarantees this.
inline double perceived_human_opinion(double eta, double z_hat_max) {
    if (!std::isfinite(eta) || std::fabs(eta) >= kPi / 2.0)
        throw std::invalid_argument("perceived_human_opinion: |eta| must be < pi/2");
    const double z = std::tan(eta);
    if (z > z_hat_max) return z_hat_max;
    if (z < -z_hat_max) return -z_hat_max;
    return z;
}

/// Attention target g(d): saturating inverse-power sigmoid, equal to u_hi at
/// contact, (u_lo+u_hi)/2 at the critical distance R_r, and approaching u_lo
/// far away. Monotone non-increasing in d.
inline double attention_target(double d, const OpinionParams& p) {
    if (!(d >= 0.0)) throw std::invalid_argument("attention_target: distance must be >= 0");
    return p.u_lo + (p.u_hi - p.u_lo) / (1.0 + std::pow(d / p.R_r, p.n));
}

/// One explicit-Euler step of the opinion/attention pair. The attention is
/// advanced first and the new value drives the opinion update, so a nonzero
/// social input acts on z in the same step that attention first rises.
inline OpinionState step_opinion(const OpinionState& s, double z_hat, double d, double dt,
                                 const OpinionParams& p) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_opinion: dt must be > 0");
    if (!std::isfinite(s.z) || !std::isfinite(s.u) || !std::isfinite(z_hat))
        throw std::invalid_argument("step_opinion: non-finite state or input");

    OpinionState out;
    double u = s.u + (dt / p.tau_u) * (-s.u + attention_target(d, p));
    if (u < p.u_lo) u = p.u_lo;
    if (u > p.u_hi) u = p.u_hi;
    out.u = u;
    out.z = s.z + dt * (-p.d_r * s.z +
                        u * std::tanh(p.alpha_r * s.z + p.gamma_r * z_hat + p.b_r));
    if (!std::isfinite(out.z)) throw std::runtime_error("step_opinion: opinion diverged");
    return out;
}

/// Magnitude of the stable opinion equilibrium for constant attention u with
/// zero social input and bias: 0 below the pitchfork threshold
/// (u * alpha_r <= d_r), otherwise the positive root of
/// d_r z = u tanh(alpha_r z), found by bisection to 1e-9.
inline double equilibrium_magnitude(double u, const OpinionParams& p) {
    if (u * p.alpha_r <= p.d_r) return 0.0;
    auto f = [&](double z) { return p.d_r * z - u * std::tanh(p.alpha_r * z); };
    double lo = 1e-300;           // f < 0 just above zero (slope d_r - u*alpha_r < 0)
    double hi = u / p.d_r + 1.0;  // f(hi) >= d_r*hi - u > 0
    while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Neutral opinion state: z = 0, u at the attention floor.
inline OpinionState reset_neutral(const OpinionParams& p) { return {0.0, p.u_lo}; }

/// Rotation sense of the avoidance vortex from the opinion sign:
/// z >= 0 -> -1, z < 0 -> +1. The tie at z = 0 resolves to -1.
inline int opinion_to_gamma(double z) {
    if (!std::isfinite(z)) throw std::invalid_argument("opinion_to_gamma: non-finite z");
    return z >= 0.0 ? -1 : +1;
}

/// Simultaneous Euler step of the coupled opinion network
///   dz_i/dt = -d_i z_i + u_i tanh(alpha_i z_i + gamma_i sum_k a_ik z_k + b_i)
/// using pre-step values of every z_k. Attention values are taken from the
/// states and left untouched.
inline std::vector<OpinionState> step_coupled_opinions(const std::vector<OpinionState>& states,
                                                       const std::vector<OpinionParams>& params,
                                                       const CouplingParams& coupling,
                                                       double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("step_coupled_opinions: dt must be > 0");
    const std::size_t n = states.size();
    if (params.size() != n || coupling.adjacency.size() != n)
        throw std::invalid_argument("step_coupled_opinions: states/params/adjacency size mismatch");
    coupling.validate();

    std::vector<OpinionState> out(states);
    for (std::size_t i = 0; i < n; ++i) {
        double social = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            if (coupling.adjacency[i][k]) social += states[k].z;
        const OpinionParams& p = params[i];
        out[i].z = states[i].z +
                   dt * (-p.d_r * states[i].z +
                         states[i].u * std::tanh(p.alpha_r * states[i].z +
                                                 coupling.gamma[i] * social + p.b_r));
        if (!std::isfinite(out[i].z))
            throw std::runtime_error("step_coupled_opinions: opinion diverged");
    }
    return out;
}

}  // namespace socnav
