#ifndef VECOFFLOAD_NETCALC_HPP
#define VECOFFLOAD_NETCALC_HPP

// Closed-form offloading delay upper bounds and failure probabilities for the
// five technologies, in the affine form d = (A - ln(eps)/theta) / B and in the
// tight geometric-denominator form.

#include <cmath>
#include <limits>
#include <stdexcept>

#include "vecoffload/model.hpp"

namespace vecoffload {

// Coefficients of one (technology, task) delay bound: d = (A - ln(eps)/theta) / B.
// B <= 0 encodes an overloaded server (infinite delay, certain failure).
struct AffineBound {
    double num_a = 0.0;  // A: burstiness aggregate + access overhead, Mb
    double den_b = 0.0;  // B: residual service rate, Mbps
    TechKind tech = TechKind::LOCAL;
    std::size_t task_index = 0;
};

// Envelope parameters of the transport and compute service curves feeding the
// tight failure form.
struct TechCurveParams {
    double xi = 0.0;         // transport envelope rate, Mbps
    double eta = 0.0;        // transport peak term, Mb
    double xi_comp = 0.0;    // compute envelope rate, Mbps
    double eta_comp = 0.0;   // compute peak term, Mb
    double rho_self_o = 0.0; // own-traffic exponent contribution rho^h_i * o_i, Mb
};

// Head-of-line access penalty of the DSRC back-off, W0 * (2M)^G / R^(G-1), Mb.
inline double dsrc_access_overhead(const DsrcMacParams& mac, double r_dsrc) {
    const int g = mac.backoff_threshold;
    return mac.w0 * std::pow(2.0 * mac.collision_prob, g) / std::pow(r_dsrc, g - 1);
}

namespace detail {

inline double effective_dsrc_overhead(const ScenarioConfig& s) {
    if (s.dsrc_access_overhead_mb) return *s.dsrc_access_overhead_mb;
    return dsrc_access_overhead(s.mac, s.r_dsrc);
}

// On-board competition aggregates: (1/N) sum_j [1 - rho^v2i_j + (N-1) rho^local_j] * x_j.
struct OnboardLoad {
    double rate = 0.0;   // lambda-weighted, Mbps
    double burst = 0.0;  // o-weighted, Mb
};

inline OnboardLoad onboard_load(const Allocation& rho, const ScenarioConfig& s) {
    OnboardLoad acc;
    const double n = static_cast<double>(s.n_vehicles);
    for (std::size_t j = 0; j < s.num_tasks(); ++j) {
        const double w = 1.0 - rho.at(j, TechKind::CV2I) + (n - 1.0) * rho.at(j, TechKind::LOCAL);
        acc.rate += w * s.tasks[j].arrival_rate;
        acc.burst += w * s.tasks[j].burstiness;
    }
    acc.rate /= n;
    acc.burst /= n;
    return acc;
}

inline double dsrc_burst_sum(const Allocation& rho, const ScenarioConfig& s) {
    double acc = 0.0;
    for (std::size_t j = 0; j < s.num_tasks(); ++j)
        acc += rho.at(j, TechKind::DSRC) * s.tasks[j].burstiness;
    return acc;
}

}  // namespace detail

// Reserved licensed-band rate for task i on CV2V or CV2I: the task's share of
// R^cv2x proportional to its licensed traffic demand, with an equal split when
// nothing is offloaded over the licensed band.
inline double reserved_rate(TechKind tech, std::size_t i, const Allocation& rho,
                            const ScenarioConfig& s) {
    if (tech != TechKind::CV2V && tech != TechKind::CV2I)
        throw std::invalid_argument("reserved_rate: technology has no licensed reservation");
    double total = 0.0;
    for (std::size_t j = 0; j < s.num_tasks(); ++j)
        total += (rho.at(j, TechKind::CV2I) + rho.at(j, TechKind::CV2V)) * s.traffic_volume(j);
    if (total <= 0.0) return s.r_cv2x / (2.0 * static_cast<double>(s.num_tasks()));
    return s.r_cv2x * rho.at(i, tech) * s.traffic_volume(i) / total;
}

// The printed closed form of each technology's bound, as (A, B) coefficients.
inline AffineBound bound_coefficients(TechKind tech, std::size_t i, const Allocation& rho,
                                      const ScenarioConfig& s) {
    AffineBound b;
    b.tech = tech;
    b.task_index = i;
    if (tech == TechKind::CV2I) {
        double burst = 0.0, rate = 0.0;
        for (std::size_t j = 0; j < s.num_tasks(); ++j) {
            burst += rho.at(j, TechKind::CV2I) * s.tasks[j].burstiness;
            if (j != i) rate += rho.at(j, TechKind::CV2I) * s.tasks[j].arrival_rate;
        }
        b.num_a = burst;
        b.den_b = s.theta_epc - rate;
        return b;
    }
    const detail::OnboardLoad load = detail::onboard_load(rho, s);
    b.num_a = load.burst;
    b.den_b = s.theta_veh - load.rate;
    switch (tech) {
        case TechKind::DSRC:
            b.num_a += detail::effective_dsrc_overhead(s);
            break;
        case TechKind::CMMW:
            b.num_a += 2.0 * detail::dsrc_burst_sum(rho, s);
            break;
        case TechKind::CV2V:
            if (s.rmmw_control) {
                double mm = 0.0;
                for (std::size_t j = 0; j < s.num_tasks(); ++j)
                    mm += rho.at(j, TechKind::CV2V) * s.rts_burstiness;
                b.num_a += 4.0 * mm;
            }
            break;
        case TechKind::LOCAL:
        default:
            break;
    }
    if (tech != TechKind::LOCAL) b.den_b += rho.at(i, tech) * s.tasks[i].arrival_rate;
    return b;
}

// Delay upper bound at failure probability eps, seconds; +infinity when the
// shared server is overloaded (B <= 0).
inline double delay_bound(TechKind tech, std::size_t i, const Allocation& rho,
                          const ScenarioConfig& s, double eps) {
    if (!(eps > 0.0) || eps > 1.0)
        throw std::invalid_argument("delay_bound: eps must be in (0, 1]");
    const AffineBound b = bound_coefficients(tech, i, rho, s);
    if (b.den_b <= 0.0) return std::numeric_limits<double>::infinity();
    return (b.num_a - std::log(eps) / s.theta) / b.den_b;
}

// ln(eps) for the delay target d, clamped at 0 (eps <= 1). Overload gives 0:
// an overloaded server fails any deadline with certainty.
inline double failure_log_prob(TechKind tech, std::size_t i, const Allocation& rho,
                               const ScenarioConfig& s, double d) {
    const AffineBound b = bound_coefficients(tech, i, rho, s);
    if (b.den_b <= 0.0) return 0.0;
    return std::min(0.0, s.theta * (b.num_a - d * b.den_b));
}

// Unclamped affine exponent theta * (A - d * B); linear in rho, used by the
// relaxation objective.
inline double failure_log_prob_unclamped(TechKind tech, std::size_t i, const Allocation& rho,
                                         const ScenarioConfig& s, double d) {
    const AffineBound b = bound_coefficients(tech, i, rho, s);
    return s.theta * (b.num_a - d * b.den_b);
}

// Service-envelope parameter lists of each technology, feeding the tight form.
inline TechCurveParams curve_params(TechKind tech, std::size_t i, const Allocation& rho,
                                    const ScenarioConfig& s) {
    TechCurveParams p;
    const double n = static_cast<double>(s.n_vehicles);
    p.rho_self_o = rho.at(i, tech) * s.tasks[i].burstiness;
    switch (tech) {
        case TechKind::DSRC: {
            p.xi = s.r_dsrc;
            p.eta = detail::effective_dsrc_overhead(s);
            double rate = 0.0, burst = 0.0;
            for (std::size_t j = 0; j < s.num_tasks(); ++j) {
                const double bg =
                    rho.at(j, TechKind::CMMW) + rho.at(j, TechKind::CV2V) + rho.at(j, TechKind::LOCAL);
                double w = bg + ((j != i) ? rho.at(j, TechKind::DSRC) : 0.0);
                rate += w * s.tasks[j].arrival_rate;
                burst += w * s.tasks[j].burstiness;
            }
            p.xi_comp = s.theta_veh - rate / n;
            p.eta_comp = burst / n;
            break;
        }
        case TechKind::CV2V:
        case TechKind::CMMW: {
            if (tech == TechKind::CV2V) {
                p.xi = reserved_rate(TechKind::CV2V, i, rho, s);
                p.eta = 0.0;
            } else {
                double vol = 0.0;
                for (std::size_t j = 0; j < s.num_tasks(); ++j)
                    vol += rho.at(j, TechKind::DSRC) * s.traffic_volume(j);
                p.xi = s.r_dsrc - 2.0 * vol;
                p.eta = 2.0 * detail::dsrc_burst_sum(rho, s);
            }
            const detail::OnboardLoad load = detail::onboard_load(rho, s);
            p.xi_comp = s.theta_veh + rho.at(i, tech) * s.tasks[i].arrival_rate - load.rate;
            p.eta_comp = load.burst - rho.at(i, tech) * s.tasks[i].burstiness;
            break;
        }
        case TechKind::CV2I: {
            p.xi = reserved_rate(TechKind::CV2I, i, rho, s);
            p.eta = 0.0;
            double rate = 0.0, burst = 0.0;
            for (std::size_t j = 0; j < s.num_tasks(); ++j) {
                if (j == i) continue;
                rate += rho.at(j, TechKind::CV2I) * s.tasks[j].arrival_rate;
                burst += rho.at(j, TechKind::CV2I) * s.tasks[j].burstiness;
            }
            p.xi_comp = s.theta_epc - rate;
            p.eta_comp = burst;
            break;
        }
        case TechKind::LOCAL: {
            p.xi = 0.0;
            p.eta = 0.0;
            const detail::OnboardLoad load = detail::onboard_load(rho, s);
            p.xi_comp = s.theta_veh - load.rate;
            p.eta_comp = load.burst;
            break;
        }
    }
    return p;
}

// Correction dropped by the affine bound: U = ln(1 - e^{-theta(xi - xi_comp)})
// + ln(1 - e^{-theta(xi_comp - lambda_i)}), always <= 0 where defined.
inline double tight_correction(const TechCurveParams& p, double lambda_i, double theta) {
    if (!(p.xi > p.xi_comp))
        throw ConvergenceViolated("tight form requires xi > xi_comp");
    if (!(p.xi_comp > lambda_i))
        throw ConvergenceViolated("tight form requires xi_comp > lambda_i");
    return std::log1p(-std::exp(-theta * (p.xi - p.xi_comp))) +
           std::log1p(-std::exp(-theta * (p.xi_comp - lambda_i)));
}

// Tight failure probability with the geometric denominators, clamped at 1.
// Throws ConvergenceViolated when the geometric sums do not converge; callers
// fall back to the affine form.
inline double tight_failure_prob(TechKind tech, std::size_t i, const Allocation& rho,
                                 const ScenarioConfig& s, double d) {
    const TechCurveParams p = curve_params(tech, i, rho, s);
    const double lambda_i = s.tasks[i].arrival_rate;
    const double u = tight_correction(p, lambda_i, s.theta);
    const double log_eps =
        s.theta * (p.rho_self_o + p.eta_comp + p.eta) - s.theta * p.xi_comp * d - u;
    return std::min(1.0, std::exp(log_eps));
}

}  // namespace vecoffload

#endif  // VECOFFLOAD_NETCALC_HPP
