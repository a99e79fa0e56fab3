#ifndef EXODE_CLI_HPP
#define EXODE_CLI_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "exode.hpp"

namespace exode::cli {

enum class Command { Check, Reduce, Verify };
enum class OutputMode { Text, Json };

enum ExitCode : int { kOk = 0, kNoResult = 1, kInputError = 2, kSamplingFailure = 3 };

struct RunConfig {
    Command command = Command::Check;
    // Inline coefficients in the order F3, F2, F1, F0.
    std::array<std::optional<std::string>, 4> coefficients;
    std::optional<std::string> input_file;
    std::optional<std::string> base;  // "t0,y0,y1_0,y2_0"
    std::optional<std::string> xi;
    std::optional<std::string> mu;    // verify only
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    OutputMode output = OutputMode::Text;
};

namespace detail {

using Json = nlohmann::ordered_json;

struct InputError : Error {
    using Error::Error;
};

inline constexpr std::array<const char *, 4> kCoefficientNames{"f3", "f2", "f1", "f0"};

// Renders a parse error with the offending input and a caret under the offset.
inline std::string describe_syntax_error(const std::string &what, const std::string &text, const SyntaxError &err) {
    std::ostringstream os;
    os << what << ": " << err.what() << "\n  " << text << "\n  " << std::string(err.offset, ' ') << "^";
    return os.str();
}

inline Expr parse_field(const std::string &what, const std::string &text) {
    try {
        return parse(text);
    } catch (const SyntaxError &err) {
        throw InputError(describe_syntax_error(what, text, err));
    }
}

inline Rational parse_constant(const std::string &what, const std::string &text) {
    Expr e = parse_field(what, text);
    if (!e.is_const()) throw InputError(what + ": expected a rational constant, got " + print(e));
    return e.value();
}

inline BasePoint parse_base(const std::string &text) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    if (parts.size() != 4) throw InputError("--base expects four comma-separated values t0,y0,y1_0,y2_0");
    return {parse_constant("base t0", parts[0]), parse_constant("base y0", parts[1]), parse_constant("base y1_0", parts[2]),
            parse_constant("base y2_0", parts[3])};
}

// Fills unset fields of `cfg` from the JSON input file.
inline void merge_input_file(RunConfig &cfg) {
    std::ifstream in(*cfg.input_file);
    if (!in) throw InputError("cannot open input file " + *cfg.input_file);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::exception &e) {
        throw InputError("input file is not valid JSON: " + std::string(e.what()));
    }
    if (!j.is_object()) throw InputError("input file must hold a JSON object");
    auto str = [&](const char *key) -> std::optional<std::string> {
        if (!j.contains(key)) return std::nullopt;
        if (!j[key].is_string()) throw InputError(std::string("input field '") + key + "' must be a string");
        return j[key].get<std::string>();
    };
    for (std::size_t i = 0; i < 4; ++i) cfg.coefficients[i] = str(kCoefficientNames[i]);
    if (!cfg.base && j.contains("base")) {
        const Json &b = j["base"];
        if (b.is_string()) {
            cfg.base = b.get<std::string>();
        } else if (b.is_array() && b.size() == 4) {
            std::string joined;
            for (std::size_t i = 0; i < 4; ++i) {
                if (i) joined += ',';
                joined += b[i].is_string() ? b[i].get<std::string>() : b[i].dump();
            }
            cfg.base = joined;
        } else {
            throw InputError("input field 'base' must be a string or an array of four values");
        }
    }
    if (!cfg.xi) cfg.xi = str("xi");
    if (!cfg.mu) cfg.mu = str("mu");
    if (!cfg.seed && j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) throw InputError("input field 'seed' must be a non-negative integer");
        cfg.seed = j["seed"].get<std::uint64_t>();
    }
    if (!cfg.tol && j.contains("tol")) {
        if (!j["tol"].is_number()) throw InputError("input field 'tol' must be a number");
        cfg.tol = j["tol"].get<double>();
    }
}

inline Equation load_equation(RunConfig &cfg, Sampler &s) {
    const bool any_inline = std::any_of(cfg.coefficients.begin(), cfg.coefficients.end(), [](const auto &c) { return c.has_value(); });
    if (cfg.input_file) {
        if (any_inline) throw InputError("give coefficients either inline (--f3 ... --f0) or with --input, not both");
        merge_input_file(cfg);
    }
    std::array<Expr, 4> f;
    for (std::size_t i = 0; i < 4; ++i) {
        if (!cfg.coefficients[i]) throw InputError(std::string("missing coefficient ") + kCoefficientNames[i]);
        f[i] = parse_field(kCoefficientNames[i], *cfg.coefficients[i]);
    }
    try {
        return Equation::checked(f[0], f[1], f[2], f[3], s);
    } catch (const InvalidEquation &e) {
        throw InputError(e.what());
    }
}

inline std::string equation_text(const Equation &eq) {
    return "(" + print(eq.f3()) + ")*y''' + (" + print(eq.f2()) + ")*y'' + (" + print(eq.f1()) + ")*y' + (" + print(eq.f0()) + ") = 0";
}

inline Json conditions_json(const ExactnessReport &rep) {
    Json arr = Json::array();
    for (const auto &c : rep.conditions)
        arr.push_back({{"id", c.id}, {"verdict", verdict_name(c.verdict)}, {"lhs", print(c.lhs)}, {"rhs", print(c.rhs)}});
    return arr;
}

inline Json factor_json(const IntegratingFactor &f) {
    return {{"xi", print(f.xi.xi())}, {"mu", print(f.mu)}, {"certificate", certificate_name(f.certificate)}, {"g", describe(f.g)}};
}

inline Json equation_json(const Equation &eq) {
    return {{"f3", print(eq.f3())}, {"f2", print(eq.f2())}, {"f1", print(eq.f1())}, {"f0", print(eq.f0())}};
}

inline Json first_integral_json(const std::optional<FirstIntegral> &fi) {
    if (!fi) return nullptr;
    return {{"psi", print(fi->psi)},
            {"base", {to_string(fi->base.t0), to_string(fi->base.y0), to_string(fi->base.y10), to_string(fi->base.y20)}}};
}

inline void print_report_text(std::ostream &out, const ExactnessReport &rep) {
    out << "exact: " << (rep.exact() ? "yes" : "no") << "\n";
    for (const auto &c : rep.conditions) {
        std::string id = "(" + std::string(c.id) + ")";
        out << "  " << id << std::string(6 - id.size(), ' ') << print(c.lhs) << " = " << print(c.rhs) << "  ["
            << verdict_name(c.verdict) << "]\n";
    }
}

inline void print_first_integral_text(std::ostream &out, const std::optional<FirstIntegral> &fi, const std::string &why) {
    if (!fi) {
        out << "first integral: unavailable (" << why << ")\n";
        return;
    }
    out << "first integral (Psi = c, Psi(base) = 0 at base " << to_string(fi->base.t0) << "," << to_string(fi->base.y0) << ","
        << to_string(fi->base.y10) << "," << to_string(fi->base.y20) << "):\n  Psi = " << print(fi->psi) << "\n";
}

// First integral of an exact equation, or nullopt with the reason when the rule table does not cover it.
inline std::optional<FirstIntegral> try_first_integral(const Equation &eq, const BasePoint &base, Sampler &s, std::string &why) {
    try {
        return first_integral(eq, base, s);
    } catch (const UnsupportedIntegrand &e) {
        why = e.what();
    } catch (const InvalidEquation &e) {
        why = e.what();
    }
    return std::nullopt;
}

inline int run_checked(RunConfig cfg, std::ostream &out, std::ostream &err) {
    Sampler zero_check;
    Equation eq = load_equation(cfg, zero_check);
    Sampler s(cfg.seed.value_or(0));
    if (cfg.tol) {
        if (!(*cfg.tol > 0.0)) throw InputError("--tol must be positive");
        s.tol = *cfg.tol;
    }
    BasePoint base = cfg.base ? parse_base(*cfg.base) : BasePoint{};
    std::optional<XiForm> user_xi;
    if (cfg.xi) {
        try {
            user_xi = XiForm::from_expr(parse_field("xi", *cfg.xi));
        } catch (const InvalidXi &e) {
            throw InputError(e.what());
        }
    }

    Json j;
    std::ostringstream text;
    text << "equation: " << equation_text(eq) << "\n";
    int code = kOk;
    std::string why;

    switch (cfg.command) {
    case Command::Check: {
        Sampler cs = s.derive(0);
        ExactnessReport rep = check_exact(eq, cs);
        std::optional<FirstIntegral> fi;
        if (rep.exact()) fi = try_first_integral(eq, base, cs, why);
        j["exact"] = rep.exact();
        j["conditions"] = conditions_json(rep);
        j["factors"] = Json::array();
        j["first_integral"] = first_integral_json(fi);
        print_report_text(text, rep);
        if (rep.exact()) print_first_integral_text(text, fi, why);
        break;
    }
    case Command::Reduce: {
        Sampler cs = s.derive(0);
        ExactnessReport rep = check_exact(eq, cs);
        auto factors = search(eq, user_xi, s);
        j["exact"] = rep.exact();
        j["conditions"] = conditions_json(rep);
        j["factors"] = Json::array();
        for (const auto &f : factors) j["factors"].push_back(factor_json(f));
        print_report_text(text, rep);
        if (factors.empty()) {
            j["first_integral"] = nullptr;
            text << "no product-form factor found\n";
            code = kNoResult;
            break;
        }
        text << "integrating factors:\n";
        for (const auto &f : factors)
            text << "  mu = " << print(f.mu) << "   (xi = " << print(f.xi.xi()) << ", " << certificate_name(f.certificate) << ")\n";
        Equation multiplied = apply_mu(eq, factors.front().mu);
        Sampler fs = s.derive(17);
        auto fi = try_first_integral(multiplied, base, fs, why);
        j["first_integral"] = first_integral_json(fi);
        j["multiplied"] = equation_json(multiplied);
        text << "multiplied equation: " << equation_text(multiplied) << "\n";
        print_first_integral_text(text, fi, why);
        break;
    }
    case Command::Verify: {
        if (!cfg.mu) throw InputError("verify needs --mu");
        Expr mu = parse_field("mu", *cfg.mu);
        if (mu.is_zero()) throw InputError("mu must not be zero");
        Equation multiplied = [&] {
            try {
                return apply_mu(eq, mu);
            } catch (const InvalidEquation &e) {
                throw InputError(e.what());
            }
        }();
        Sampler cs = s.derive(0);
        ExactnessReport rep = check_exact(multiplied, cs);
        std::optional<FirstIntegral> fi;
        bool verified = false;
        if (rep.exact()) {
            fi = try_first_integral(multiplied, base, cs, why);
            if (fi) verified = verify_first_integral(multiplied, *fi, cs);
        } else {
            why = "multiplied equation is not exact";
        }
        j["exact"] = rep.exact();
        j["conditions"] = conditions_json(rep);
        j["factors"] = Json::array();
        j["first_integral"] = first_integral_json(fi);
        j["multiplied"] = equation_json(multiplied);
        j["verified"] = verified;
        text << "multiplied equation: " << equation_text(multiplied) << "\n";
        print_report_text(text, rep);
        print_first_integral_text(text, fi, why);
        text << "first integral verified: " << (verified ? "yes" : "no") << "\n";
        code = verified ? kOk : kNoResult;
        break;
    }
    }
    j["seed"] = s.seed();

    if (cfg.output == OutputMode::Json) {
        // Fixed key order: exact, conditions, factors, first_integral, seed, then extras.
        Json ordered;
        for (const char *key : {"exact", "conditions", "factors", "first_integral", "seed", "multiplied", "verified"})
            if (j.contains(key)) ordered[key] = j[key];
        out << ordered.dump(2) << "\n";
    } else {
        out << text.str();
    }
    if (!why.empty() && cfg.output == OutputMode::Json) err << "note: " << why << "\n";
    return code;
}

} // namespace detail

/// Executes one CLI command. Reports go to `out`, diagnostics to `err`.
inline int run(const RunConfig &cfg, std::ostream &out, std::ostream &err) {
    try {
        return detail::run_checked(cfg, out, err);
    } catch (const detail::InputError &e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const InsufficientSamples &e) {
        err << "error: sampling failed: " << e.what() << "\n";
        return kSamplingFailure;
    } catch (const NotExact &e) {
        err << "error: " << e.what() << "\n";
        return kNoResult;
    }
}

} // namespace exode::cli

#endif
