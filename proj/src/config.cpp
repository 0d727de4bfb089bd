#include "qps/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "qps/format.hpp"

namespace qps {

using nlohmann::json;
using nlohmann::ordered_json;

std::string to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::lyapunov_sweep: return "lyapunov_sweep";
        case ExperimentKind::ids_sweep: return "ids_sweep";
        case ExperimentKind::ac_classify: return "ac_classify";
        case ExperimentKind::green_probe: return "green_probe";
        case ExperimentKind::bf_diagnostics: return "bf_diagnostics";
        case ExperimentKind::tree_width: return "tree_width";
        case ExperimentKind::ac_mass: return "ac_mass";
        case ExperimentKind::gap_labels: return "gap_labels";
    }
    return "?";
}

namespace {

std::optional<ExperimentKind> kind_from_string(const std::string& s) {
    for (int i = 0; i <= int(ExperimentKind::gap_labels); ++i)
        if (to_string(ExperimentKind(i)) == s) return ExperimentKind(i);
    return std::nullopt;
}

struct Checker {
    const json& doc;
    std::vector<std::string>& errors;
    std::set<std::string> seen;

    void fail(const std::string& msg) { errors.push_back(msg); }

    bool has(const std::string& key) {
        seen.insert(key);
        return doc.contains(key);
    }

    template <typename T>
    T get(const std::string& key, T fallback) {
        if (!has(key)) return fallback;
        try {
            return doc.at(key).get<T>();
        } catch (const std::exception&) {
            fail("key '" + key + "' has the wrong type");
            return fallback;
        }
    }

    std::vector<double> get_reals(const std::string& key,
                                  std::vector<double> fallback) {
        if (!has(key)) return fallback;
        if (!doc.at(key).is_array()) {
            fail("key '" + key + "' must be an array of numbers");
            return fallback;
        }
        std::vector<double> out;
        for (const auto& v : doc.at(key)) {
            if (!v.is_number()) {
                fail("key '" + key + "' must contain numbers only");
                return fallback;
            }
            out.push_back(v.get<double>());
        }
        return out;
    }

    void reject_unknown(const std::string& where) {
        for (auto it = doc.begin(); it != doc.end(); ++it)
            if (!seen.count(it.key()))
                errors.push_back("unknown key '" + it.key() + "'" +
                                 (where.empty() ? "" : " in " + where));
    }
};

TrigPotential parse_potential(const json& j, std::vector<std::string>& errors) {
    TrigPotential pot = TrigPotential::zero(1);
    if (!j.is_object()) {
        errors.push_back("potential must be an object");
        return pot;
    }
    Checker c{j, errors, {}};
    const std::string type = c.get<std::string>("type", "zero");
    if (type == "zero") {
        pot = TrigPotential::zero(int(c.get<double>("nu", 1)));
    } else if (type == "almost_mathieu") {
        if (!c.has("u")) errors.push_back("almost_mathieu potential needs 'u'");
        pot = TrigPotential::almost_mathieu(c.get<double>("u", 0.0));
    } else if (type == "trig") {
        const int nu = int(c.get<double>("nu", 1));
        pot.nu = nu;
        if (c.has("terms")) {
            for (const auto& t : j.at("terms")) {
                Checker tc{t, errors, {}};
                TrigPotential::Term term;
                const auto m = tc.get_reals("m", {});
                for (double v : m) term.m.push_back(int(std::lround(v)));
                term.cos_amp = tc.get<double>("cos", 0.0);
                term.sin_amp = tc.get<double>("sin", 0.0);
                tc.reject_unknown("potential term");
                if (int(term.m.size()) != nu)
                    errors.push_back("potential term 'm' must have nu entries");
                else
                    pot.terms.push_back(std::move(term));
            }
        } else {
            errors.push_back("trig potential needs 'terms'");
        }
    } else {
        errors.push_back("unknown potential type '" + type + "'");
    }
    c.seen.insert("terms");
    c.reject_unknown("potential");
    return pot;
}

int default_m_check(int nu) { return nu == 1 ? 10000 : (nu == 2 ? 100 : 20); }

}  // namespace

ParseResult parse_config(const std::string& text) {
    ParseResult res;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const std::exception& e) {
        res.errors.push_back(std::string("config is not valid JSON: ") + e.what());
        return res;
    }
    if (!doc.is_object()) {
        res.errors.push_back("config must be a JSON object");
        return res;
    }

    ExperimentConfig cfg;
    auto& errors = res.errors;
    Checker c{doc, errors, {}};

    const std::string kind_s = c.get<std::string>("experiment", "");
    const auto kind = kind_from_string(kind_s);
    if (!kind) {
        errors.push_back("unknown experiment kind '" + kind_s + "'");
        c.reject_unknown("");
        return res;
    }
    cfg.kind = *kind;

    if (c.has("potential")) cfg.potential = parse_potential(doc.at("potential"), errors);

    // alpha: "golden" or an array of cycles
    if (c.has("alpha")) {
        const auto& a = doc.at("alpha");
        if (a.is_string() && a.get<std::string>() == "golden") {
            cfg.alpha = FrequencyVector::golden();
        } else if (a.is_array()) {
            std::vector<double> vals;
            for (const auto& v : a) {
                if (!v.is_number()) {
                    errors.push_back("alpha must contain numbers");
                    break;
                }
                vals.push_back(v.get<double>());
            }
            if (vals.empty())
                errors.push_back("alpha must have at least one entry");
            else
                cfg.alpha = FrequencyVector(std::move(vals));
        } else {
            errors.push_back("alpha must be \"golden\" or an array of cycles");
        }
    }

    cfg.m_check = int(c.get<double>("m_check", default_m_check(cfg.alpha.dim())));
    if (cfg.m_check < 1) errors.push_back("m_check must be >= 1");

    {
        auto th = c.get_reals("theta0", std::vector<double>(
                                            std::size_t(cfg.alpha.dim()), 0.0));
        if (int(th.size()) != cfg.alpha.dim())
            errors.push_back("theta0 dimension must match alpha");
        else
            cfg.theta0 = TorusPoint(std::move(th));
    }

    cfg.seed = std::uint64_t(c.get<double>("seed", 1.0));

    if (c.has("energy_grid")) {
        const auto& g = doc.at("energy_grid");
        Checker gc{g, errors, {}};
        cfg.e_min = gc.get<double>("min", cfg.e_min);
        cfg.e_max = gc.get<double>("max", cfg.e_max);
        cfg.e_step = gc.get<double>("step", cfg.e_step);
        gc.reject_unknown("energy_grid");
        if (cfg.e_step <= 0.0) errors.push_back("step must be positive");
        if (cfg.e_max < cfg.e_min) errors.push_back("energy_grid max must be >= min");
    }
    cfg.energies = c.get_reals("energies", {});
    if (c.has("energy")) cfg.energies = {c.get<double>("energy", 0.0)};

    cfg.n_steps = std::int64_t(c.get<double>("N", 100000.0));
    if (cfg.n_steps < 1000) errors.push_back("N must be >= 1000");
    // sweeps report the spread over 4 independent theta0 as the error bar
    const bool errorbar_kind = cfg.kind == ExperimentKind::lyapunov_sweep ||
                               cfg.kind == ExperimentKind::ids_sweep;
    cfg.n_phases = int(c.get<double>("n_phases", errorbar_kind ? 4.0 : 1.0));
    if (cfg.n_phases < 1) errors.push_back("n_phases must be >= 1");
    cfg.gamma_tol = c.get<double>("gamma_tol", 5e-3);
    if (cfg.gamma_tol <= 0.0) errors.push_back("gamma_tol must be positive");

    const bool green_like = cfg.kind == ExperimentKind::green_probe ||
                            cfg.kind == ExperimentKind::bf_diagnostics;
    cfg.eta = c.get<double>("eta",
                            cfg.kind == ExperimentKind::tree_width ? 1e-2 : 1e-3);
    cfg.eta_list = c.get_reals(
        "eta_list", green_like && cfg.kind == ExperimentKind::green_probe
                        ? std::vector<double>{1e-2, 1e-3, 1e-4}
                        : std::vector<double>{});
    if (cfg.eta <= 0.0) errors.push_back("eta must be positive");
    for (double e : cfg.eta_list)
        if (e <= 0.0) errors.push_back("eta_list entries must be positive");

    cfg.depth = std::int64_t(c.get<double>("depth", 0.0));
    if (cfg.depth < 0) errors.push_back("depth must be >= 0 (0 = auto)");
    cfg.grid_size = int(c.get<double>("grid_size", 512.0));
    if (cfg.grid_size < 16 || (cfg.grid_size & (cfg.grid_size - 1)) != 0)
        errors.push_back("grid_size must be a power of two >= 16");
    cfg.m_max = int(c.get<double>("m_max", 50.0));
    if (cfg.m_max < 1) errors.push_back("m_max must be >= 1");
    cfg.ids_tol = c.get<double>("ids_tol", 2e-2);
    if (cfg.ids_tol <= 0.0) errors.push_back("ids_tol must be positive");
    if (c.has("field_energy")) cfg.field_energy = c.get<double>("field_energy", 0.0);

    cfg.branching = int(c.get<double>("K", 2.0));
    if (cfg.branching < 2) errors.push_back("K must be >= 2");
    cfg.lambda = c.get<double>("lambda", 0.0);
    if (cfg.lambda < 0.0) errors.push_back("lambda must be >= 0");
    cfg.lambda_list = c.get_reals("lambda_list", {});
    for (std::size_t i = 1; i < cfg.lambda_list.size(); ++i)
        if (cfg.lambda_list[i] > cfg.lambda_list[i - 1]) {
            errors.push_back("lambda_list must be sorted decreasing");
            break;
        }
    if (c.has("disorder")) {
        const auto& d = doc.at("disorder");
        Checker dc{d, errors, {}};
        const std::string t = dc.get<std::string>("type", "uniform");
        if (t == "uniform")
            cfg.disorder.kind = DisorderKind::uniform;
        else if (t == "bernoulli")
            cfg.disorder.kind = DisorderKind::bernoulli;
        else if (t == "cauchy")
            cfg.disorder.kind = DisorderKind::cauchy;
        else
            errors.push_back("unknown disorder type '" + t + "'");
        cfg.disorder.cauchy_scale = dc.get<double>("scale", 1.0);
        if (cfg.disorder.cauchy_scale <= 0.0)
            errors.push_back("disorder scale must be positive");
        dc.reject_unknown("disorder");
    }
    cfg.radial = c.get<bool>("radial", false);
    cfg.pool_size = std::int64_t(c.get<double>("pool_size", 10000.0));
    if (cfg.pool_size < 2) errors.push_back("pool_size must be >= 2");
    cfg.n_samples = std::int64_t(c.get<double>("n_samples", 2000.0));
    if (cfg.n_samples < 1) errors.push_back("n_samples must be >= 1");
    if (c.has("interval")) {
        const auto& iv = doc.at("interval");
        Checker ic{iv, errors, {}};
        cfg.interval.lo = ic.get<double>("min", -2.0);
        cfg.interval.hi = ic.get<double>("max", 2.0);
        ic.reject_unknown("interval");
        if (cfg.interval.hi <= cfg.interval.lo)
            errors.push_back("interval max must be > min");
    }
    cfg.im_threshold = c.get<double>("im_threshold", 0.05);
    if (cfg.im_threshold <= 0.0) errors.push_back("im_threshold must be positive");
    cfg.im_threshold_list = c.get_reals(
        "im_threshold_list", cfg.kind == ExperimentKind::ac_mass
                                 ? std::vector<double>{0.02, 0.05, 0.1}
                                 : std::vector<double>{});
    cfg.grid_points = int(c.get<double>("grid_points", 1024.0));
    if (cfg.grid_points < 2) errors.push_back("grid_points must be >= 2");
    cfg.tolerance = c.get<double>("tolerance", 0.1);
    if (cfg.tolerance <= 0.0) errors.push_back("tolerance must be positive");

    c.reject_unknown("");

    // the shift must act ergodically: no m with m . alpha integer
    if (errors.empty()) {
        if (auto m = find_resonant_m(cfg.alpha, cfg.m_check)) {
            std::ostringstream os;
            os << "alpha fails the ergodicity check: m = [";
            for (std::size_t i = 0; i < m->size(); ++i)
                os << (i ? "," : "") << (*m)[i];
            os << "] makes m.alpha an integer";
            errors.push_back(os.str());
        }
    }

    if (cfg.potential.nu != cfg.alpha.dim())
        errors.push_back("potential dimension must match alpha");

    if (errors.empty()) res.config = std::move(cfg);
    return res;
}

ParseResult parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        ParseResult r;
        r.errors.push_back("cannot open config file '" + path + "'");
        return r;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

ordered_json ExperimentConfig::echo() const {
    ordered_json j;
    j["experiment"] = to_string(kind);
    ordered_json pot;
    if (potential.is_zero()) {
        pot["type"] = "zero";
        pot["nu"] = potential.nu;
    } else if (potential.nu == 1 && potential.terms.size() == 1 &&
               potential.terms[0].m == std::vector<int>{1} &&
               potential.terms[0].sin_amp == 0.0) {
        pot["type"] = "almost_mathieu";
        pot["u"] = potential.terms[0].cos_amp;
    } else {
        pot["type"] = "trig";
        pot["nu"] = potential.nu;
        pot["terms"] = ordered_json::array();
        for (const auto& t : potential.terms) {
            ordered_json term;
            term["m"] = t.m;
            term["cos"] = t.cos_amp;
            term["sin"] = t.sin_amp;
            pot["terms"].push_back(term);
        }
    }
    j["potential"] = pot;
    j["alpha"] = alpha.alpha;
    j["theta0"] = theta0.coords;
    j["m_check"] = m_check;
    j["seed"] = seed;
    j["energy_grid"] = {{"min", e_min}, {"max", e_max}, {"step", e_step}};
    if (!energies.empty()) j["energies"] = energies;
    j["N"] = n_steps;
    j["n_phases"] = n_phases;
    j["gamma_tol"] = gamma_tol;
    j["eta"] = eta;
    if (!eta_list.empty()) j["eta_list"] = eta_list;
    j["depth"] = depth;
    j["grid_size"] = grid_size;
    j["m_max"] = m_max;
    j["ids_tol"] = ids_tol;
    if (field_energy) j["field_energy"] = *field_energy;
    j["K"] = branching;
    j["lambda"] = lambda;
    if (!lambda_list.empty()) j["lambda_list"] = lambda_list;
    ordered_json dis;
    dis["type"] = disorder.kind == DisorderKind::uniform     ? "uniform"
                  : disorder.kind == DisorderKind::bernoulli ? "bernoulli"
                                                             : "cauchy";
    dis["scale"] = disorder.cauchy_scale;
    j["disorder"] = dis;
    j["radial"] = radial;
    j["pool_size"] = pool_size;
    j["n_samples"] = n_samples;
    j["interval"] = {{"min", interval.lo}, {"max", interval.hi}};
    j["im_threshold"] = im_threshold;
    if (!im_threshold_list.empty()) j["im_threshold_list"] = im_threshold_list;
    j["grid_points"] = grid_points;
    j["tolerance"] = tolerance;
    return j;
}

}  // namespace qps
