#ifndef VECOFFLOAD_MODEL_HPP
#define VECOFFLOAD_MODEL_HPP

#include <array>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vecoffload/errors.hpp"

namespace vecoffload {

// ---------------------------------------------------------------------------
// Offloading technologies
// ---------------------------------------------------------------------------

// The five offloading paths. RmmW (mmWave with a reservation-based control
// channel) is carried on the CV2V column with ScenarioConfig::rmmw_control set;
// its bound only differs by a control-traffic term that vanishes when the
// RTS/CTS burstiness is zero.
enum class TechKind : int {
    DSRC  = 0,
    CV2I  = 1,
    CV2V  = 2,
    CMMW  = 3,
    LOCAL = 4,
};

inline constexpr std::size_t kNumTechs = 5;

inline constexpr std::array<TechKind, kNumTechs> kAllTechs = {
    TechKind::DSRC, TechKind::CV2I, TechKind::CV2V, TechKind::CMMW, TechKind::LOCAL};

inline constexpr std::size_t tech_index(TechKind t) { return static_cast<std::size_t>(t); }

inline const char* tech_name(TechKind t) {
    switch (t) {
        case TechKind::DSRC: return "DSRC";
        case TechKind::CV2I: return "CV2I";
        case TechKind::CV2V: return "CV2V";
        case TechKind::CMMW: return "CMMW";
        case TechKind::LOCAL: return "LOCAL";
    }
    return "?";
}

inline std::optional<TechKind> parse_tech(std::string_view name) {
    std::string up;
    up.reserve(name.size());
    for (char c : name) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    for (TechKind t : kAllTechs)
        if (up == tech_name(t)) return t;
    return std::nullopt;
}

// Subset of technologies available in a deployment. LOCAL must always be in.
class TechMask {
public:
    constexpr TechMask() = default;
    constexpr explicit TechMask(std::uint8_t bits) : bits_(bits) {}

    static constexpr TechMask all() { return TechMask{0b11111}; }
    static constexpr TechMask local_only() { return TechMask{}.with(TechKind::LOCAL); }

    constexpr TechMask with(TechKind t) const {
        return TechMask(static_cast<std::uint8_t>(bits_ | (1u << tech_index(t))));
    }
    constexpr bool contains(TechKind t) const { return (bits_ >> tech_index(t)) & 1u; }
    constexpr std::size_t count() const {
        std::size_t n = 0;
        for (TechKind t : kAllTechs) n += contains(t) ? 1 : 0;
        return n;
    }
    // Masked technologies in ascending TechKind order.
    std::vector<TechKind> techs() const {
        std::vector<TechKind> out;
        for (TechKind t : kAllTechs)
            if (contains(t)) out.push_back(t);
        return out;
    }
    constexpr std::uint8_t bits() const { return bits_; }
    friend constexpr bool operator==(TechMask, TechMask) = default;

private:
    std::uint8_t bits_ = 0;
};

inline constexpr TechMask make_mask(std::initializer_list<TechKind> techs) {
    TechMask m;
    for (TechKind t : techs) m = m.with(t);
    return m;
}

// ---------------------------------------------------------------------------
// Scenario
// ---------------------------------------------------------------------------

// One task category's traffic envelope, deadline and tariffs.
struct TaskSpec {
    double arrival_rate = 0.0;    // lambda_i, Mbps
    double burstiness = 0.0;      // o_i, Mb
    double t_max = 0.0;           // deadline, s
    double priority = 1.0;        // delta_i, >= 0
    double complexity = 1.0;      // H_i, > 0
    double fee_cv2x = 1.0;        // licensed-band transmission fee per Mb
    double fee_infra = 1.0;       // VEC-pool computing fee per Mb
    double fee_veh = 1.0;         // on-board computing fee per Mb

    friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

// 802.11p exponential back-off parameters of the DSRC channel.
struct DsrcMacParams {
    double w0 = 16.0;             // initial back-off window, slots
    int backoff_threshold = 5;    // window stops growing past this stage
    int retry_limit = 7;          // >= backoff_threshold
    double collision_prob = 0.6;  // per transmission slot, in [0,1]

    friend bool operator==(const DsrcMacParams&, const DsrcMacParams&) = default;
};

struct ScenarioConfig {
    std::vector<TaskSpec> tasks;      // K categories
    int n_vehicles = 5;               // N
    double theta_veh = 1e3;           // on-board computing capacity, Mbps
    double theta_epc = 1e4;           // VEC-pool computing capacity, Mbps
    double r_dsrc = 1e3;              // DSRC bandwidth, Mbps
    double r_cv2x = 1e4;              // total licensed bandwidth, Mbps
    double rts_burstiness = 0.0;      // o^b of RTS/CTS-like control traffic, Mb
    // Chernoff parameter. The default keeps the failure exponents on the same
    // scale as the resource costs in the built-in scenarios.
    double theta = 0.02;
    double horizon = 1.0;             // cost accounting period, s
    DsrcMacParams mac;
    TechMask tech_mask = TechMask::all();
    bool rmmw_control = false;        // CV2V column carries RmmW traffic
    // Optional override for the DSRC access-delay term (Mb); the MAC closed
    // form vanishes at Mbps-scale bandwidths, so experiments may pin a value.
    std::optional<double> dsrc_access_overhead_mb;

    std::size_t num_tasks() const { return tasks.size(); }
    // Accumulated traffic volume of task i over the accounting period, Mb.
    double traffic_volume(std::size_t i) const {
        return tasks[i].arrival_rate * horizon + tasks[i].burstiness;
    }

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

// ---------------------------------------------------------------------------
// Allocation
// ---------------------------------------------------------------------------

inline constexpr int kGridUnits = 100;  // learner rho granularity 0.01

// K x 5 matrix of per-task offloading fractions; each row lives on the unit
// simplex. Learner-produced allocations sit on the 0.01 grid, the LP emits
// continuous rows.
class Allocation {
public:
    Allocation() = default;
    explicit Allocation(std::size_t num_tasks) : k_(num_tasks), rho_(num_tasks * kNumTechs, 0.0) {}

    static Allocation all_local(std::size_t num_tasks) {
        Allocation a(num_tasks);
        for (std::size_t i = 0; i < num_tasks; ++i) a.at(i, TechKind::LOCAL) = 1.0;
        return a;
    }
    // Equal shares over the masked technologies.
    static Allocation uniform(std::size_t num_tasks, TechMask mask) {
        Allocation a(num_tasks);
        const double share = 1.0 / static_cast<double>(mask.count());
        for (std::size_t i = 0; i < num_tasks; ++i)
            for (TechKind t : kAllTechs)
                if (mask.contains(t)) a.at(i, t) = share;
        return a;
    }

    std::size_t num_tasks() const { return k_; }
    double& at(std::size_t task, TechKind t) { return rho_[task * kNumTechs + tech_index(t)]; }
    double at(std::size_t task, TechKind t) const { return rho_[task * kNumTechs + tech_index(t)]; }
    double operator()(std::size_t task, TechKind t) const { return at(task, t); }

    double row_sum(std::size_t task) const {
        double s = 0.0;
        for (TechKind t : kAllTechs) s += at(task, t);
        return s;
    }

    friend bool operator==(const Allocation&, const Allocation&) = default;

private:
    std::size_t k_ = 0;
    std::vector<double> rho_;
};

// Violations of the allocation invariants (C1 + mask consistency); empty when valid.
inline std::vector<std::string> allocation_violations(const Allocation& rho, TechMask mask,
                                                      double tol = 1e-9) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < rho.num_tasks(); ++i) {
        if (std::abs(rho.row_sum(i) - 1.0) > tol)
            out.push_back("task " + std::to_string(i) + ": row sum != 1");
        for (TechKind t : kAllTechs) {
            const double v = rho.at(i, t);
            if (v < -tol || v > 1.0 + tol)
                out.push_back("task " + std::to_string(i) + ": rho[" + tech_name(t) +
                              "] outside [0,1]");
            if (!mask.contains(t) && v != 0.0)
                out.push_back("task " + std::to_string(i) + ": rho[" + tech_name(t) +
                              "] nonzero outside mask");
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Presets and validation
// ---------------------------------------------------------------------------

// Built-in scenarios: "default" (mixed traffic), "light", "heavy".
inline ScenarioConfig default_scenario(const std::string& name) {
    ScenarioConfig s;  // field initializers carry the shared defaults
    auto fill_tasks = [&](const std::array<double, 5>& lambda, const std::array<double, 5>& o,
                          const std::array<double, 5>& tmax) {
        s.tasks.resize(5);
        for (std::size_t i = 0; i < 5; ++i) {
            s.tasks[i].arrival_rate = lambda[i];
            s.tasks[i].burstiness = o[i];
            s.tasks[i].t_max = tmax[i];
        }
    };
    if (name == "default") {
        fill_tasks({20, 70, 30, 80, 8}, {60, 400, 90, 380, 10}, {2, 6, 2.5, 3, 1});
    } else if (name == "light") {
        fill_tasks({5, 5, 5, 5, 5}, {2, 2, 2, 2, 2}, {1, 1, 1, 1, 1});
    } else if (name == "heavy") {
        fill_tasks({100, 100, 100, 100, 100}, {50, 50, 50, 50, 50}, {1, 1, 1, 1, 1});
    } else {
        throw UnknownPresetError(name);
    }
    return s;
}

// Invariant check; each entry names the offending field and rule. Empty = valid.
inline std::vector<std::string> validate(const ScenarioConfig& s) {
    std::vector<std::string> v;
    if (s.tasks.empty()) v.push_back("tasks empty");
    for (std::size_t i = 0; i < s.tasks.size(); ++i) {
        const TaskSpec& t = s.tasks[i];
        const std::string p = "task " + std::to_string(i) + ": ";
        if (!(t.arrival_rate > 0.0)) v.push_back(p + "lambda <= 0");
        if (t.burstiness < 0.0) v.push_back(p + "burstiness < 0");
        if (!(t.t_max > 0.0)) v.push_back(p + "t_max <= 0");
        if (t.priority < 0.0) v.push_back(p + "priority < 0");
        if (!(t.complexity > 0.0)) v.push_back(p + "complexity <= 0");
        if (t.fee_cv2x < 0.0) v.push_back(p + "fee_cv2x < 0");
        if (t.fee_infra < 0.0) v.push_back(p + "fee_infra < 0");
        if (t.fee_veh < 0.0) v.push_back(p + "fee_veh < 0");
    }
    if (s.n_vehicles < 1) v.push_back("n_vehicles < 1");
    if (!(s.theta_veh > 0.0)) v.push_back("theta_veh <= 0");
    if (s.theta_epc < s.theta_veh) v.push_back("theta_epc < theta_veh");
    if (!(s.r_dsrc > 0.0)) v.push_back("r_dsrc <= 0");
    if (!(s.r_cv2x > 0.0)) v.push_back("r_cv2x <= 0");
    if (s.rts_burstiness < 0.0) v.push_back("rts_burstiness < 0");
    if (!(s.theta > 0.0)) v.push_back("theta <= 0");
    if (!(s.horizon > 0.0)) v.push_back("horizon <= 0");
    if (!(s.mac.w0 >= 1.0)) v.push_back("mac.w0 < 1");
    if (s.mac.backoff_threshold < 1) v.push_back("mac.backoff_threshold < 1");
    if (s.mac.retry_limit < s.mac.backoff_threshold) v.push_back("mac.retry_limit < mac.backoff_threshold");
    if (s.mac.collision_prob < 0.0 || s.mac.collision_prob > 1.0)
        v.push_back("mac.collision_prob outside [0,1]");
    if (!s.tech_mask.contains(TechKind::LOCAL)) v.push_back("tech_mask missing LOCAL");
    if (s.dsrc_access_overhead_mb && *s.dsrc_access_overhead_mb < 0.0)
        v.push_back("dsrc_access_overhead < 0");
    return v;
}

// ---------------------------------------------------------------------------
// Framework presets
// ---------------------------------------------------------------------------

// Heterogeneous deployment presets compared in the experiments.
struct FrameworkPreset {
    std::string name;
    TechMask mask;
    bool rmmw_control = false;
};

inline const std::vector<FrameworkPreset>& framework_presets() {
    static const std::vector<FrameworkPreset> presets = {
        {"CV2X-DSRC-CMMW",
         make_mask({TechKind::CV2I, TechKind::CV2V, TechKind::DSRC, TechKind::CMMW, TechKind::LOCAL}),
         false},
        {"DSRC-CMMW", make_mask({TechKind::DSRC, TechKind::CMMW, TechKind::LOCAL}), false},
        {"CV2X-RMMW", make_mask({TechKind::CV2I, TechKind::CV2V, TechKind::LOCAL}), true},
        {"CV2X-DSRC", make_mask({TechKind::CV2I, TechKind::CV2V, TechKind::DSRC, TechKind::LOCAL}),
         false},
    };
    return presets;
}

inline std::optional<FrameworkPreset> find_framework(std::string_view name) {
    for (const auto& p : framework_presets())
        if (p.name == name) return p;
    return std::nullopt;
}

// Scenario restricted to a framework preset.
inline ScenarioConfig apply_framework(ScenarioConfig s, const FrameworkPreset& p) {
    s.tech_mask = p.mask;
    s.rmmw_control = p.rmmw_control;
    return s;
}

}  // namespace vecoffload

#endif  // VECOFFLOAD_MODEL_HPP
