#pragma once

/**
 * @file analysis.hpp
 * @brief Config parsing, the full dimension pipeline, sweeps and JSON reports.
 */

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "projdim/count_series.hpp"
#include "projdim/covering.hpp"
#include "projdim/dimension.hpp"
#include "projdim/example8.hpp"
#include "projdim/expression.hpp"
#include "projdim/finite_type.hpp"
#include "projdim/matcher.hpp"
#include "projdim/oracle.hpp"
#include "projdim/osc.hpp"

namespace projdim {

using Json = nlohmann::ordered_json;

struct AnalysisOptions {
    long lmax = 200;
    std::optional<double> diameter_floor;  ///< absolute; default |hull| * beta^-floor_exponent
    long floor_exponent = 100;
    std::optional<double> eps;  ///< oracle resolution; default |hull| / 2^16
    double float_tolerance = kDefaultFloatTolerance;
    double dimension_tolerance = kDimensionTolerance;
    double factor_tolerance = kFactorTolerance;
    bool force_float = false;
    bool gf_exact = true;
    bool vitali = true;
    bool oracle = true;
    bool finite_type = true;
    std::size_t max_matchings = 50'000;
    std::size_t max_nodes = 4'000'000;
    std::size_t vitali_candidates = 500'000;
    std::size_t oracle_budget = 50'000'000;
    int certificate_depth = 8;
    std::size_t workers = 0;  ///< sweep worker cap, 0 = hardware concurrency
};

/// A scalar as written in the config: a string keeps it exact, a JSON number forces float mode.
struct ScalarInput {
    bool numeric = false;
    std::string text;
    double value = 0.0;
};

struct MapInput {
    long n = 1;
    ScalarInput a;
};

struct BetaInput {
    bool numeric = false;
    double value = 0.0;
    std::optional<Rational> rational;
    std::vector<Integer> min_poly;
    Rational low, high;
};

struct AnalysisConfig {
    BetaInput beta;
    std::vector<MapInput> ifs1, ifs2;
    std::optional<double> theta;
    std::optional<std::string> slope;
    AnalysisOptions options;

    /// Float mode is used when any input is only given as a real number.
    bool float_mode() const {
        if (options.force_float || beta.numeric) return true;
        for (const auto* l : {&ifs1, &ifs2})
            for (const auto& m : *l)
                if (m.a.numeric) return true;
        if (theta) {
            auto p = reduce_projection_angle(*theta, options.float_tolerance);
            if (!p.vertical && *theta != 0.0) return true;
        }
        return false;
    }
};

struct Warning {
    std::string code;
    std::string message;
    Json data = Json::object();
};

struct AnalysisReport {
    std::string classification;
    DimensionBracket dimension;
    std::vector<Warning> warnings;
    Json json;

    bool has_warning(const std::string& code) const {
        return std::any_of(warnings.begin(), warnings.end(), [&](const Warning& w) { return w.code == code; });
    }
};

namespace detail {

inline ScalarInput scalar_input(const Json& j, const std::string& where) {
    ScalarInput s;
    if (j.is_string()) {
        s.text = j.get<std::string>();
    } else if (j.is_number()) {
        s.numeric = true;
        s.value = j.get<double>();
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", s.value);
        s.text = buf;
    } else {
        fail(ErrorCode::Config, where + ": expected a string or a number");
    }
    return s;
}

inline std::vector<MapInput> ifs_input(const Json& j, const std::string& name) {
    if (!j.is_array() || j.empty()) fail(ErrorCode::Config, name + ": expected a nonempty list of {n, a}");
    std::vector<MapInput> maps;
    for (const auto& m : j) {
        if (!m.is_object() || !m.contains("n") || !m.contains("a")) fail(ErrorCode::Config, name + ": each map needs n and a");
        if (!m["n"].is_number_integer()) fail(ErrorCode::Config, name + ": n must be an integer");
        MapInput mi;
        mi.n = m["n"].get<long>();
        if (mi.n < 1) fail(ErrorCode::Config, name + ": n must be at least 1");
        mi.a = scalar_input(m["a"], name + ".a");
        maps.push_back(mi);
    }
    return maps;
}

inline BetaInput beta_input(const Json& j) {
    BetaInput b;
    if (j.is_number()) {
        b.numeric = true;
        b.value = j.get<double>();
        if (!(b.value > 1.0) || !std::isfinite(b.value)) fail(ErrorCode::InvalidField, "beta must be a finite real > 1");
    } else if (j.is_string()) {
        b.rational = parse_rational(j.get<std::string>());
        if (*b.rational <= 1) fail(ErrorCode::InvalidField, "beta must exceed 1");
        b.value = to_double(*b.rational);
    } else if (j.is_object()) {
        if (!j.contains("min_poly") || !j.contains("low") || !j.contains("high")) fail(ErrorCode::Config, "beta object needs min_poly, low, high");
        for (const auto& c : j["min_poly"]) {
            if (c.is_number_integer())
                b.min_poly.emplace_back(c.get<long long>());
            else if (c.is_string())
                b.min_poly.emplace_back(c.get<std::string>());
            else
                fail(ErrorCode::Config, "min_poly coefficients must be integers");
        }
        auto bound = [](const Json& x) { return x.is_string() ? parse_rational(x.get<std::string>()) : rational_from_double(x.get<double>()); };
        b.low = bound(j["low"]);
        b.high = bound(j["high"]);
    } else {
        fail(ErrorCode::Config, "beta must be a string, number or object");
    }
    return b;
}

}  // namespace detail

inline AnalysisConfig parse_config(const Json& j) {
    if (!j.is_object()) fail(ErrorCode::Config, "config must be a JSON object");
    for (const char* key : {"beta", "ifs1", "ifs2", "angle"})
        if (!j.contains(key)) fail(ErrorCode::Config, std::string("missing field '") + key + "'");
    AnalysisConfig c;
    c.beta = detail::beta_input(j["beta"]);
    c.ifs1 = detail::ifs_input(j["ifs1"], "ifs1");
    c.ifs2 = detail::ifs_input(j["ifs2"], "ifs2");
    const Json& angle = j["angle"];
    if (!angle.is_object()) fail(ErrorCode::Config, "angle must be an object");
    const bool has_theta = angle.contains("theta_radians"), has_slope = angle.contains("slope");
    if (has_theta == has_slope) fail(ErrorCode::Config, "angle needs exactly one of theta_radians and slope");
    if (has_theta) {
        if (!angle["theta_radians"].is_number()) fail(ErrorCode::Config, "theta_radians must be a number");
        c.theta = angle["theta_radians"].get<double>();
        reduce_projection_angle(*c.theta);
    } else {
        c.slope = detail::scalar_input(angle["slope"], "angle.slope").text;
        if (angle["slope"].is_number()) c.options.force_float = true;
    }
    if (j.contains("options")) {
        const Json& o = j["options"];
        if (!o.is_object()) fail(ErrorCode::Config, "options must be an object");
        auto& op = c.options;
        auto get_long = [&](const char* k, long& dst, long min) {
            if (!o.contains(k)) return;
            if (!o[k].is_number_integer() || o[k].get<long>() < min) fail(ErrorCode::Config, std::string("option ") + k + " must be an integer >= " + std::to_string(min));
            dst = o[k].get<long>();
        };
        auto get_size = [&](const char* k, std::size_t& dst) {
            long v = static_cast<long>(dst);
            get_long(k, v, 0);
            dst = static_cast<std::size_t>(v);
        };
        auto get_pos = [&](const char* k, double& dst) {
            if (!o.contains(k)) return;
            if (!o[k].is_number() || !(o[k].get<double>() > 0)) fail(ErrorCode::Config, std::string("option ") + k + " must be a positive number");
            dst = o[k].get<double>();
        };
        auto get_bool = [&](const char* k, bool& dst) {
            if (!o.contains(k)) return;
            if (!o[k].is_boolean()) fail(ErrorCode::Config, std::string("option ") + k + " must be a boolean");
            dst = o[k].get<bool>();
        };
        get_long("lmax", op.lmax, 1);
        get_long("floor_exponent", op.floor_exponent, 1);
        if (o.contains("diameter_floor")) {
            double v = 0;
            get_pos("diameter_floor", v);
            op.diameter_floor = v;
        }
        if (o.contains("eps")) {
            double v = 0;
            get_pos("eps", v);
            op.eps = v;
        }
        if (o.contains("tolerances")) {
            const Json& t = o["tolerances"];
            if (!t.is_object()) fail(ErrorCode::Config, "tolerances must be an object");
            auto tol = [&](const char* k, double& dst) {
                if (!t.contains(k)) return;
                if (!t[k].is_number() || !(t[k].get<double>() > 0)) fail(ErrorCode::Config, std::string("tolerance ") + k + " must be positive");
                dst = t[k].get<double>();
            };
            tol("float", op.float_tolerance);
            tol("dimension", op.dimension_tolerance);
            tol("factor", op.factor_tolerance);
        }
        if (o.contains("mode")) {
            if (!o["mode"].is_string()) fail(ErrorCode::Config, "mode must be \"exact\" or \"float\"");
            const auto m = o["mode"].get<std::string>();
            if (m == "float")
                op.force_float = true;
            else if (m != "exact")
                fail(ErrorCode::Config, "mode must be \"exact\" or \"float\"");
        }
        get_bool("gf_exact", op.gf_exact);
        get_bool("vitali", op.vitali);
        get_bool("oracle", op.oracle);
        get_bool("finite_type", op.finite_type);
        get_size("max_matchings", op.max_matchings);
        get_size("max_nodes", op.max_nodes);
        get_size("vitali_candidates", op.vitali_candidates);
        get_size("oracle_budget", op.oracle_budget);
        get_size("workers", op.workers);
        long depth = op.certificate_depth;
        get_long("certificate_depth", depth, 1);
        op.certificate_depth = static_cast<int>(depth);
    }
    return c;
}

inline AnalysisConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::Config, "cannot open config '" + path + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const std::exception& e) {
        fail(ErrorCode::Config, std::string("invalid JSON: ") + e.what());
    }
    return parse_config(j);
}

inline Json bracket_json(const DimensionBracket& b) {
    return Json{{"lower", b.lower},
                {"lower_error", b.lower_error},
                {"upper", b.upper},
                {"upper_error", b.upper_error},
                {"lower_method", to_string(b.lower_method)},
                {"upper_method", to_string(b.upper_method)},
                {"collapsed", b.collapsed()}};
}

inline Json warning_json(const Warning& w) { return Json{{"code", w.code}, {"message", w.message}, {"data", w.data}}; }

/// Exact field when every input is exact, else doubles.
template <class Fn>
auto with_field(const AnalysisConfig& c, Fn&& fn) {
    if (c.float_mode()) {
        double b = c.beta.value;
        if (!c.beta.numeric && !c.beta.rational) {
            ExactField e(FieldContext::algebraic(c.beta.min_poly, c.beta.low, c.beta.high));
            b = e.to_double(e.beta());
        }
        return fn(FloatField(b, c.options.float_tolerance));
    }
    auto ctx = c.beta.rational ? FieldContext::rational(*c.beta.rational) : FieldContext::algebraic(c.beta.min_poly, c.beta.low, c.beta.high);
    return fn(ExactField(ctx));
}

template <ScalarField F, class V = typename F::value_type>
IfsSpec<V> build_ifs(const F& f, const std::vector<MapInput>& maps) {
    IfsSpec<V> s;
    for (const auto& m : maps) {
        V a;
        if (m.a.numeric) {
            if constexpr (F::exact)
                fail(ErrorCode::Config, "numeric translation in exact mode");
            else
                a = m.a.value;
        } else {
            a = parse_scalar(f, m.a.text);
        }
        s.maps.push_back({m.n, a});
    }
    validate(f, s);
    return s;
}

template <ScalarField F, class V = typename F::value_type>
ProjectionForm<V> build_projection(const F& f, const AnalysisConfig& c) {
    if (c.theta) {
        auto p = reduce_projection_angle(*c.theta, c.options.float_tolerance);
        if (p.vertical) return {true, f.zero()};
        if (*c.theta == 0.0) return {false, f.zero()};
        if constexpr (F::exact)
            fail(ErrorCode::Config, "an angle other than 0 or pi/2 needs float mode");
        else
            return {false, p.slope};
    }
    if constexpr (!F::exact) {
        char* end = nullptr;
        double v = std::strtod(c.slope->c_str(), &end);
        if (end && *end == '\0' && !c.slope->empty()) return {false, v};
    }
    return {false, parse_scalar(f, *c.slope)};
}

inline std::string beta_text(const AnalysisConfig& c) {
    if (c.beta.rational) return to_string(*c.beta.rational);
    if (c.beta.numeric) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", c.beta.value);
        return buf;
    }
    std::vector<Rational> q(c.beta.min_poly.begin(), c.beta.min_poly.end());
    return "root of " + Polynomial(q).to_string("b") + " in (" + to_string(c.beta.low) + ", " + to_string(c.beta.high) + ")";
}

namespace detail {

template <ScalarField F, class V = typename F::value_type>
Json interval_json(const F& f, const Interval<V>& iv) {
    return Json{format_scalar(f, iv.lo), format_scalar(f, iv.hi)};
}

template <ScalarField F, class V = typename F::value_type>
std::vector<std::pair<long, double>> real_maps_of(const F& f, const IfsSpec<V>& s) {
    std::vector<std::pair<long, double>> r;
    for (const auto& m : s.maps) r.emplace_back(m.n, f.to_double(m.a));
    return r;
}

inline double floor_for(const AnalysisOptions& o, double width, double beta) {
    if (o.diameter_floor) return *o.diameter_floor;
    const double w = width > 0 ? width : 1.0;
    return w * std::pow(beta, -static_cast<double>(o.floor_exponent));
}

template <ScalarField F, class V = typename F::value_type>
Json vitali_json(const F& f, const VitaliSelection<V>& sel, std::pair<double, double> lb, bool with_maps) {
    std::map<long, long> per_length;
    for (const auto& s : sel.selected) ++per_length[s.map.length];
    Json lengths = Json::array();
    for (auto [l, c] : per_length) lengths.push_back(Json{l, c});
    Json j{{"selected", sel.selected.size()},
           {"lengths", lengths},
           {"diameter_floor", sel.diameter_floor},
           {"max_length", sel.max_length},
           {"rejected_overlaps", sel.rejected_overlaps},
           {"pruned", sel.pruned},
           {"candidates", sel.candidates},
           {"budget_exhausted", sel.budget_exhausted},
           {"lower_bound", 0.5 * (lb.first + lb.second)},
           {"lower_bound_interval", Json{lb.first, lb.second}}};
    if (with_maps) {
        Json maps = Json::array();
        for (const auto& s : sel.selected) maps.push_back(Json{{"length", s.map.length}, {"translation", format_scalar(f, s.map.t)}, {"word", s.word}});
        j["maps"] = maps;
    }
    return j;
}

template <ScalarField F, class V = typename F::value_type>
Json osc_json(const OscReport<V>& r) {
    Json pairs = Json::array();
    for (auto [a, b] : r.overlapping_pairs) pairs.push_back(Json{a, b});
    Json j{{"status", to_string(r.status)}, {"checked_maps", r.checked_maps}, {"overlapping_pairs", pairs}, {"contained", r.contained}};
    j["truncation_length"] = r.truncation_length ? Json(*r.truncation_length) : Json(nullptr);
    return j;
}

/// Dimension bracket for a finite system of distinct maps.
template <ScalarField F, class V = typename F::value_type>
DimensionBracket finite_system_bracket(const F& f, const std::vector<Similitude<V>>& maps, const Interval<V>& hull, const AnalysisOptions& o,
                                       Json& j, std::vector<Warning>& warnings) {
    const double beta = f.to_double(f.beta());
    const double width = f.to_double(hull.hi - hull.lo);
    DimensionBracket b;
    std::map<long, long double> counts;
    for (const auto& m : maps) counts[m.length] += 1;
    auto [slo, shi] = solve_length_equation(counts, beta, o.dimension_tolerance);
    j["similarity_dimension"] = Json{slo, shi};

    if (f.sign(hull.hi - hull.lo) == 0) {
        // All maps share one fixed point.
        b.lower = b.upper = 0;
        b.lower_method = LowerMethod::VitaliSubsystem;
        b.upper_method = UpperMethod::Trivial;
        return b;
    }
    b.upper = shi;
    b.upper_error = shi - slo;
    b.upper_method = UpperMethod::SimilarityDimension;

    auto osc = check_osc(f, maps, hull);
    j["osc"] = osc_json<F>(osc);
    if (osc.status == OscStatus::DisjointUpToCap) {
        b.lower = slo;
        b.lower_error = shi - slo;
        b.lower_method = LowerMethod::OscExact;
        return b;
    }
    const bool uniform = std::all_of(maps.begin(), maps.end(), [&](const auto& m) { return m.length == maps.front().length; });
    if (o.finite_type && uniform) {
        try {
            FiniteTypeOptions fo;
            fo.tol = o.dimension_tolerance;
            auto ft = finite_type_dimension(f, maps, fo);
            const double lk = std::log(beta) * static_cast<double>(ft.ratio_exponent);
            const double lo = ft.lambda_lower > 0 ? std::log(ft.lambda_lower) / lk : 0.0;
            const double hi = ft.lambda_upper > 0 ? std::log(ft.lambda_upper) / lk : 0.0;
            j["finite_type"] = Json{{"dimension", ft.dimension},
                                    {"lambda", ft.lambda},
                                    {"lambda_bounds", Json{ft.lambda_lower, ft.lambda_upper}},
                                    {"types", ft.types},
                                    {"ratio_exponent", ft.ratio_exponent}};
            b.lower = lo;
            b.lower_error = hi - lo;
            b.lower_method = LowerMethod::FiniteType;
            if (hi < b.upper) {
                b.upper = hi;
                b.upper_error = hi - lo;
                b.upper_method = UpperMethod::FiniteType;
            }
            return b;
        } catch (const Error& e) {
            j["finite_type"] = Json{{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
        }
    }
    if (o.vitali) {
        VitaliOptions vo;
        vo.max_candidates = o.vitali_candidates;
        auto sel = vitali_select(f, maps, hull, floor_for(o, width, beta), vo);
        auto lb = lower_bound_dimension(sel, beta, o.dimension_tolerance);
        j["vitali"] = vitali_json(f, sel, lb, false);
        if (sel.budget_exhausted) warnings.push_back({"vitali_budget_exhausted", "Vitali selection stopped at its candidate budget", Json{{"candidates", sel.candidates}}});
        b.lower = lb.first;
        b.lower_error = lb.second - lb.first;
        b.lower_method = LowerMethod::VitaliSubsystem;
    }
    return b;
}

inline void clamp_bracket(DimensionBracket& b, std::vector<Warning>& warnings) {
    if (b.upper > 1.0 && b.upper - b.upper_error <= 1.0) {
        b.upper = 1.0;
    } else if (b.upper > 1.0) {
        warnings.push_back({"upper_clamped", "upper bound exceeded the ambient dimension and was clamped to 1", Json{{"raw_upper", b.upper}}});
        b.upper = 1.0;
        b.upper_error = 0.0;
        b.upper_method = UpperMethod::Trivial;
    }
    if (b.lower > 1.0) b.lower = 1.0;
    if (b.lower_method == LowerMethod::None) b.lower = 0.0;
}

}  // namespace detail

/// Full pipeline for one projection, inside a chosen scalar field.
template <ScalarField F, class V = typename F::value_type>
AnalysisReport analyze_in(const F& f, const AnalysisConfig& c) {
    const AnalysisOptions& o = c.options;
    AnalysisReport rep;
    Json& j = rep.json;
    const double beta = f.to_double(f.beta());
    IfsSpec<V> ifs1 = build_ifs(f, c.ifs1), ifs2 = build_ifs(f, c.ifs2);
    ProjectionForm<V> proj = build_projection(f, c);

    j["mode"] = F::exact ? "exact" : "float";
    j["beta"] = beta_text(c);
    j["beta_value"] = beta;
    Json pj{{"form", proj.vertical ? "vertical" : "slope"}};
    if (c.theta) pj["theta"] = *c.theta;
    if (!proj.vertical) {
        pj["slope"] = format_scalar(f, proj.slope);
        pj["slope_value"] = f.to_double(proj.slope);
    }
    j["projection"] = pj;

    const Interval<V> h1 = attractor_hull(f, ifs1), h2 = attractor_hull(f, ifs2);
    const double d1 = self_similar_dimension(ifs1, beta, o.factor_tolerance), d2 = self_similar_dimension(ifs2, beta, o.factor_tolerance);
    j["factors"] = Json{{"dim_k1", d1}, {"dim_k2", d2}, {"sum", d1 + d2}, {"hull_k1", detail::interval_json(f, h1)}, {"hull_k2", detail::interval_json(f, h2)}};

    if (!F::exact) rep.warnings.push_back({"float_mode", "inputs were given as reals; comparisons use a relative tolerance", Json{{"tolerance", o.float_tolerance}}});
    if (example8::matches(f, ifs1) && example8::matches(f, ifs2)) {
        const V alt = example8::alternative_upper_endpoint(f);
        const auto iv = example8::stated_interval(f);
        rep.warnings.push_back({"example8_endpoint_discrepancy",
                                "two different upper endpoints circulate for the OSC interval of this system; the fourth threshold is used",
                                Json{{"used_upper", f.to_double(iv.hi)}, {"alternative_upper", f.to_double(alt)}}});
    }

    Interval<V> target_hull;
    const bool factor_only = proj.vertical || f.sign(proj.slope) == 0;
    DimensionBracket b;
    if (factor_only) {
        const IfsSpec<V>& fac = proj.vertical ? ifs2 : ifs1;
        target_hull = proj.vertical ? h2 : h1;
        rep.classification = "SelfSimilar";
        j["factor_only"] = proj.vertical ? "K2" : "K1";
        j["matchings"] = nullptr;
        std::vector<Similitude<V>> maps;
        for (const auto& m : fac.maps) {
            auto s = similitude_of_map(f, m);
            bool dup = std::any_of(maps.begin(), maps.end(), [&](const auto& x) { return equal(f, x, s); });
            if (!dup) maps.push_back(s);
        }
        b = detail::finite_system_bracket(f, maps, target_hull, o, j, rep.warnings);
    } else {
        std::vector<Block<V>> blocks1, blocks2;
        for (const auto& m : ifs1.maps) blocks1.push_back(block_of_map(f, m));
        for (const auto& m : ifs2.maps) blocks2.push_back(block_of_map(f, m));
        const std::vector<Block<V>> blocks2p = scale_blocks(f, blocks2, proj.slope);
        const Interval<V> h2p = f.sign(proj.slope) > 0 ? Interval<V>{proj.slope * h2.lo, proj.slope * h2.hi} : Interval<V>{proj.slope * h2.hi, proj.slope * h2.lo};
        target_hull = sumset_hull(f, h1, h2, proj.slope);

        GapAutomaton a = build_gap_automaton(blocks1, blocks2p);
        const Finiteness fin = classify_finiteness(a);
        long lmax = std::max(o.lmax, a.max_block_length());
        if (fin == Finiteness::ProvedFinite) lmax = std::max(lmax, longest_matching_length(a));
        EnumerationOptions eo{o.max_matchings, o.max_nodes};
        MatchingSet<V> ms = enumerate_matchings(f, blocks1, blocks2p, lmax, eo);
        rep.classification = fin == Finiteness::ProvedFinite ? "SelfSimilar" : "InfiniteIFS";
        Json gaps = Json::array();
        for (long g : a.states) gaps.push_back(g);
        j["matchings"] = Json{{"count", ms.matchings.size()},
                              {"distinct", ms.dedup.size()},
                              {"finiteness", to_string(fin)},
                              {"truncated", ms.truncated},
                              {"lmax", ms.lmax},
                              {"complete_through", ms.complete_through},
                              {"unit", a.unit},
                              {"gap_states", gaps}};
        if (ms.complete_through < ms.lmax)
            rep.warnings.push_back({"truncated_enumeration", "Matching enumeration stopped at its budget", Json{{"complete_through", ms.complete_through}}});
        std::vector<Similitude<V>> maps = dedup_maps(ms);

        if (fin == Finiteness::ProvedFinite) {
            b = detail::finite_system_bracket(f, maps, target_hull, o, j, rep.warnings);
        } else {
            CountSeries cs = count_series(a, lmax);
            Json series = Json::array();
            for (long l = 1; l <= cs.lmax && series.size() < 64; ++l)
                if (cs.counts[static_cast<std::size_t>(l)] != 0) series.push_back(Json{l, cs.counts[static_cast<std::size_t>(l)].str()});
            Json csj{{"unit", cs.unit},
                     {"lmax", cs.lmax},
                     {"numerator", cs.numerator.to_string("y")},
                     {"denominator", cs.denominator.to_string("y")},
                     {"lambda", cs.lambda},
                     {"first_terms", series}};
            csj["majorant"] = cs.majorant ? Json{{"K", to_double(cs.majorant->K)}, {"mu", to_double(cs.majorant->mu)}} : Json(nullptr);
            j["count_series"] = csj;

            std::optional<GfRoot> gf;
            if (o.gf_exact) {
                try {
                    gf = solve_gf_dimension(cs, beta);
                    j["gf"] = Json{{"s", gf->s},
                                   {"s_bounds", Json{gf->s_lo, gf->s_hi}},
                                   {"poly_y", polynomial_text(gf->poly_y, "y")},
                                   {"poly_x", polynomial_text(gf->poly_x, "x")}};
                } catch (const Error& e) {
                    j["gf"] = Json{{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
                }
            }
            std::optional<SimilarityResult> tail;
            try {
                tail = similarity_dimension(cs, beta, SimilarityMode::TailBounded, o.dimension_tolerance);
                j["tail_bounded"] = Json{{"lower", tail->lower}, {"upper", tail->upper}};
            } catch (const Error& e) {
                j["tail_bounded"] = Json{{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
            }
            if (gf) {
                b.upper = gf->s_hi;
                b.upper_error = gf->s_hi - gf->s_lo;
                b.upper_method = UpperMethod::GfExact;
                if (tail && (gf->s < tail->lower - o.dimension_tolerance || gf->s > tail->upper + o.dimension_tolerance))
                    rep.warnings.push_back({"gf_tail_mismatch", "generating-function root lies outside the tail-bounded bracket",
                                            Json{{"gf", gf->s}, {"tail", Json{tail->lower, tail->upper}}}});
            } else if (tail) {
                b.upper = tail->upper;
                b.upper_error = tail->upper - tail->lower;
                b.upper_method = UpperMethod::TailBounded;
            }

            if (gf) {
                CertificateOptions co;
                co.max_depth = o.certificate_depth;
                auto cert = separation_certificate(f, blocks1, blocks2p, h1, h2p, co);
                Json states = Json::array();
                for (const auto& sc : cert.states) states.push_back(Json{{"state", sc.state}, {"depth", sc.depth}, {"pieces", sc.pieces}});
                j["certificate"] = Json{{"passed", cert.passed}, {"states", states}, {"failure", cert.failure}};
                if (cert.passed) {
                    b.lower = gf->s_lo;
                    b.lower_error = gf->s_hi - gf->s_lo;
                    b.lower_method = LowerMethod::OscExact;
                    rep.warnings.push_back({"infinite_osc_assumption",
                                            "the collapsed value assumes the open set condition of the Matching images carries over to the closure of the limit set",
                                            Json::object()});
                }
            }
            const double width = f.to_double(target_hull.hi - target_hull.lo);
            if (b.lower_method == LowerMethod::None && o.vitali && !maps.empty()) {
                VitaliOptions vo;
                vo.max_candidates = o.vitali_candidates;
                auto sel = vitali_select(f, maps, target_hull, detail::floor_for(o, width, beta), vo);
                auto lb = lower_bound_dimension(sel, beta, o.dimension_tolerance);
                j["vitali"] = detail::vitali_json(f, sel, lb, false);
                if (sel.budget_exhausted)
                    rep.warnings.push_back({"vitali_budget_exhausted", "Vitali selection stopped at its candidate budget", Json{{"candidates", sel.candidates}}});
                b.lower = lb.first;
                b.lower_error = lb.second - lb.first;
                b.lower_method = LowerMethod::VitaliSubsystem;
            }
            if (b.lower_method == LowerMethod::None && !maps.empty()) {
                auto osc = check_osc(f, maps, target_hull, ms.complete_through);
                j["osc"] = detail::osc_json<F>(osc);
                if (osc.status == OscStatus::DisjointUpToCap) {
                    std::map<long, long double> counts;
                    for (const auto& m : maps) counts[m.length] += 1;
                    auto [lo, hi] = solve_length_equation(counts, beta, o.dimension_tolerance);
                    b.lower = lo;
                    b.lower_error = hi - lo;
                    b.lower_method = LowerMethod::Truncation;
                }
            }
        }
    }
    detail::clamp_bracket(b, rep.warnings);
    rep.dimension = b;
    j["classification"] = rep.classification;
    j["dimension"] = bracket_json(b);

    if (o.oracle) {
        try {
            const double width = f.to_double(target_hull.hi - target_hull.lo);
            const double eps = o.eps ? *o.eps : (width > 0 ? width : 1.0) / 65536.0;
            OracleOptions oo{o.oracle_budget};
            SampleSet pts;
            if (factor_only) {
                pts = sample_attractor(detail::real_maps_of(f, proj.vertical ? ifs2 : ifs1), beta, eps, oo);
            } else {
                pts = sample_sumset(detail::real_maps_of(f, ifs1), detail::real_maps_of(f, ifs2), beta, f.to_double(proj.slope), eps, oo);
            }
            auto fit = box_dimension_estimate(pts);
            const bool inside = fit.slope >= b.lower - 0.05 && fit.slope <= b.upper + 0.05;
            j["oracle"] = Json{{"eps", pts.eps}, {"points", pts.points.size()}, {"slope", fit.slope}, {"r2", fit.r2}, {"scales", fit.scales}, {"counts", fit.counts}, {"within_bracket", inside}};
            if (!inside)
                rep.warnings.push_back({"oracle_outside_bracket", "box-counting slope lies more than 0.05 outside the bracket", Json{{"slope", fit.slope}}});
        } catch (const Error& e) {
            j["oracle"] = Json{{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
        }
    } else {
        j["oracle"] = nullptr;
    }
    Json w = Json::array();
    for (const auto& x : rep.warnings) w.push_back(warning_json(x));
    j["warnings"] = w;
    return rep;
}

inline AnalysisReport run_analysis(const AnalysisConfig& c) {
    return with_field(c, [&](const auto& f) { return analyze_in(f, c); });
}

struct SweepRow {
    double theta = 0.0;
    double slope = 0.0;
    bool vertical = false;
    std::optional<DimensionBracket> bracket;
    std::optional<double> oracle_slope;
    std::string error;
};

/// One independent analysis per angle; rows come back in input order.
inline std::vector<SweepRow> run_sweep(const AnalysisConfig& base, const std::vector<double>& thetas) {
    if (thetas.empty()) fail(ErrorCode::Config, "sweep needs at least one angle");
    std::vector<SweepRow> rows(thetas.size());
    auto work = [&](std::size_t i) {
        SweepRow& r = rows[i];
        r.theta = thetas[i];
        try {
            AnalysisConfig c = base;
            c.slope.reset();
            c.theta = thetas[i];
            auto p = reduce_projection_angle(thetas[i], c.options.float_tolerance);
            r.vertical = p.vertical;
            r.slope = p.vertical ? std::numeric_limits<double>::infinity() : p.slope;
            AnalysisReport rep = run_analysis(c);
            r.bracket = rep.dimension;
            const Json& oj = rep.json["oracle"];
            if (oj.is_object() && oj.contains("slope")) r.oracle_slope = oj["slope"].get<double>();
        } catch (const std::exception& e) {
            r.error = e.what();
        }
    };
    std::size_t workers = base.options.workers ? base.options.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, thetas.size());
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < thetas.size(); i = next++) work(i);
        });
    for (auto& t : pool) t.join();
    return rows;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "theta,slope,lower,upper,lower_method,upper_method,oracle_slope,error\n";
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    for (const auto& r : rows) {
        os << num(r.theta) << ',' << (r.vertical ? std::string("inf") : num(r.slope)) << ',';
        if (r.bracket)
            os << num(r.bracket->lower) << ',' << num(r.bracket->upper) << ',' << to_string(r.bracket->lower_method) << ',' << to_string(r.bracket->upper_method);
        else
            os << ",,,";
        os << ',' << (r.oracle_slope ? num(*r.oracle_slope) : std::string()) << ',';
        std::string e = r.error;
        std::replace(e.begin(), e.end(), ',', ';');
        std::replace(e.begin(), e.end(), '\n', ' ');
        os << e << '\n';
    }
    return os.str();
}

/// Angles from "a:b:n" (n evenly spaced values including both ends) or a file with one angle per line.
inline std::vector<double> parse_thetas(const std::string& spec) {
    std::vector<double> out;
    auto c1 = spec.find(':');
    if (c1 != std::string::npos) {
        auto c2 = spec.find(':', c1 + 1);
        if (c2 == std::string::npos) fail(ErrorCode::Config, "range must be a:b:n");
        double a = 0, b = 0;
        long n = 0;
        try {
            a = std::stod(spec.substr(0, c1));
            b = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
            n = std::stol(spec.substr(c2 + 1));
        } catch (const std::exception&) {
            fail(ErrorCode::Config, "malformed range '" + spec + "'");
        }
        if (n < 1) fail(ErrorCode::Config, "range needs n >= 1");
        for (long i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
        return out;
    }
    std::ifstream in(spec);
    if (!in) fail(ErrorCode::Config, "cannot open angle file '" + spec + "'");
    std::string line;
    while (std::getline(in, line)) {
        auto h = line.find('#');
        if (h != std::string::npos) line.resize(h);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(std::stod(line));
        } catch (const std::exception&) {
            fail(ErrorCode::Config, "malformed angle '" + line + "'");
        }
    }
    if (out.empty()) fail(ErrorCode::Config, "angle file is empty");
    return out;
}

/// Matching list and count series for the configured slope.
inline std::pair<Json, std::string> run_matchings(const AnalysisConfig& c, long lmax) {
    return with_field(c, [&](const auto& f) {
        using V = typename std::decay_t<decltype(f)>::value_type;
        auto ifs1 = build_ifs(f, c.ifs1), ifs2 = build_ifs(f, c.ifs2);
        auto proj = build_projection(f, c);
        if (proj.vertical) fail(ErrorCode::Config, "the vertical projection has no Matching system");
        std::vector<Block<V>> b1, b2;
        for (const auto& m : ifs1.maps) b1.push_back(block_of_map(f, m));
        for (const auto& m : ifs2.maps) b2.push_back(block_of_map(f, m));
        auto b2p = scale_blocks(f, b2, proj.slope);
        auto ms = enumerate_matchings(f, b1, b2p, lmax, EnumerationOptions{c.options.max_matchings, c.options.max_nodes});
        Json list = Json::array();
        for (const auto& m : ms.matchings) {
            Json digits = Json::array();
            for (const auto& [p, v] : m.block.digits) digits.push_back(Json{p, format_scalar(f, v)});
            list.push_back(Json{{"length", m.block.length},
                                {"digits", digits},
                                {"translation", format_scalar(f, m.map.t)},
                                {"x_decomposition", m.x_decomposition},
                                {"y_decomposition", m.y_decomposition}});
        }
        Json j{{"lmax", ms.lmax},
               {"finiteness", to_string(ms.finiteness)},
               {"truncated", ms.truncated},
               {"complete_through", ms.complete_through},
               {"distinct", ms.dedup.size()},
               {"matchings", list}};
        auto cs = count_series(ms.automaton, lmax);
        std::string csv = "length,count\n";
        for (long l = 1; l <= lmax; ++l) csv += std::to_string(l) + "," + cs.counts[static_cast<std::size_t>(l)].str() + "\n";
        return std::pair<Json, std::string>{j, csv};
    });
}

/// Vitali selection over the Matching maps at the given diameter floor.
inline Json run_vitali(const AnalysisConfig& c, double floor) {
    return with_field(c, [&](const auto& f) {
        using V = typename std::decay_t<decltype(f)>::value_type;
        auto ifs1 = build_ifs(f, c.ifs1), ifs2 = build_ifs(f, c.ifs2);
        auto proj = build_projection(f, c);
        const double beta = f.to_double(f.beta());
        std::vector<Similitude<V>> maps;
        Interval<V> hull;
        if (proj.vertical || f.sign(proj.slope) == 0) {
            const auto& fac = proj.vertical ? ifs2 : ifs1;
            hull = attractor_hull(f, fac);
            for (const auto& m : fac.maps) maps.push_back(similitude_of_map(f, m));
        } else {
            std::vector<Block<V>> b1, b2;
            for (const auto& m : ifs1.maps) b1.push_back(block_of_map(f, m));
            for (const auto& m : ifs2.maps) b2.push_back(block_of_map(f, m));
            hull = sumset_hull(f, attractor_hull(f, ifs1), attractor_hull(f, ifs2), proj.slope);
            const double width = f.to_double(hull.hi - hull.lo);
            const long need = width > 0 ? static_cast<long>(std::ceil(std::log(width / floor) / std::log(beta))) : 1;
            long lmax = std::max(need, 1L);
            for (const auto& b : b1) lmax = std::max(lmax, b.length);
            for (const auto& b : scale_blocks(f, b2, proj.slope)) lmax = std::max(lmax, b.length);
            auto ms = enumerate_matchings(f, b1, scale_blocks(f, b2, proj.slope), lmax, EnumerationOptions{c.options.max_matchings, c.options.max_nodes});
            maps = dedup_maps(ms);
        }
        VitaliOptions vo;
        vo.max_candidates = c.options.vitali_candidates;
        auto sel = vitali_select(f, maps, hull, floor, vo);
        auto lb = lower_bound_dimension(sel, beta, c.options.dimension_tolerance);
        Json j = detail::vitali_json(f, sel, lb, true);
        j["hull"] = detail::interval_json(f, hull);
        return j;
    });
}

/// Dimension bracket only.
inline Json run_dims(const AnalysisConfig& c) {
    AnalysisConfig q = c;
    q.options.oracle = false;
    AnalysisReport r = run_analysis(q);
    Json j = bracket_json(r.dimension);
    j["classification"] = r.classification;
    return j;
}

/// Threshold chain, matchings, generating function and both dimension regimes for the two-map fixture.
inline Json verify_example8(const Rational& beta_q, long floor_exponent = 100) {
    ExactField f(FieldContext::rational(beta_q));
    using V = FieldElement;
    const double beta = to_double(beta_q);
    Json j;
    j["beta"] = to_string(beta_q);
    auto t = example8::thresholds(f);
    Json th = Json::array();
    for (std::size_t i = 0; i < t.size(); ++i) th.push_back(Json{{"name", example8::threshold_names()[i]}, {"value", f.to_double(t[i])}});
    j["thresholds"] = th;
    auto chain_json = [](const std::vector<example8::ChainLink>& links) {
        Json a = Json::array();
        bool all = true;
        for (const auto& l : links) {
            a.push_back(Json{{"left", l.left}, {"right", l.right}, {"holds", l.holds}, {"left_value", l.left_value}, {"right_value", l.right_value}});
            all = all && l.holds;
        }
        return Json{{"holds", all}, {"links", a}};
    };
    j["threshold_chain"] = chain_json(example8::inequality_chain(f));
    j["special_chain"] = chain_json(example8::special_chain(f));
    auto win = example8::separation_window(f);
    j["separation_window"] = Json{f.to_double(win.lo), f.to_double(win.hi)};
    auto iv = example8::stated_interval(f);
    j["stated_interval"] = Json{f.to_double(iv.lo), f.to_double(iv.hi)};
    j["alternative_upper_endpoint"] = f.to_double(example8::alternative_upper_endpoint(f));

    auto ifs = example8::ifs(f);
    std::vector<Block<V>> d;
    for (const auto& m : ifs.maps) d.push_back(block_of_map(f, m));
    const auto h = attractor_hull(f, ifs);

    auto regime = [&](const V& s, const std::string& name) {
        auto dp = scale_blocks(f, d, s);
        auto ms = enumerate_matchings(f, d, dp, 12);
        Json list = Json::array();
        for (const auto& m : ms.matchings) {
            Json digits = Json::array();
            for (const auto& [p, v] : m.block.digits) digits.push_back(Json{p, format_scalar(f, v)});
            list.push_back(Json{{"length", m.block.length}, {"digits", digits}});
        }
        auto cs = count_series(ms.automaton, 200);
        auto gf = solve_gf_dimension(cs, beta);
        Json r{{"slope", format_scalar(f, s)},
               {"slope_value", f.to_double(s)},
               {"matchings_to_12", list},
               {"gf_poly_y", polynomial_text(gf.poly_y, "y")},
               {"gf_poly_x", polynomial_text(gf.poly_x, "x")},
               {"similarity_dimension", gf.s}};
        Interval<V> hp{s * h.lo, s * h.hi};
        auto cert = separation_certificate(f, d, dp, h, hp);
        r["certificate_passed"] = cert.passed;
        auto first = enumerate_matchings(f, d, dp, 200);
        std::vector<Similitude<V>> maps;
        for (const auto& m : first.matchings) {
            if (maps.size() >= 40) break;
            maps.push_back(m.map);
        }
        auto osc = check_osc(f, maps, sumset_hull(f, h, h, s));
        r["first_40_overlaps"] = detail::osc_json<ExactField>(osc)["overlapping_pairs"];
        if (!cert.passed) {
            auto hull = sumset_hull(f, h, h, s);
            const double width = f.to_double(hull.hi - hull.lo);
            auto sel = vitali_select(f, dedup_maps(first), hull, width * std::pow(beta, -static_cast<double>(floor_exponent)));
            auto lb = lower_bound_dimension(sel, beta);
            r["vitali"] = detail::vitali_json(f, sel, lb, false);
        }
        j[name] = r;
    };
    regime(example8::midpoint_slope(f), "midpoint");
    regime(example8::special_slope(f), "special");
    const double golden = std::log(std::sqrt((1 + std::sqrt(5.0)) / 2)) / std::log(beta);
    j["closed_form_osc_dimension"] = golden;
    return j;
}

}  // namespace projdim
