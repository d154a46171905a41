#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "ab/cli.hpp"
#include "ab/errors.hpp"

namespace ab::cli {
namespace {

constexpr double kPi = 3.14159265358979323846;

struct Token {
    std::string section;
    std::string key;
    std::string value;
    int line;
    int col; // of the value
};

std::string trim(const std::string& s)
{
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a])))
        ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1])))
        --b;
    return s.substr(a, b - a);
}

[[noreturn]] void parse_fail(int line, int col, const std::string& what)
{
    throw ParseError("config parse error at line " + std::to_string(line) + ", column " +
                     std::to_string(col) + ": " + what);
}

// Tokenize the flat key = value document.
std::vector<Token> lex(const std::string& text)
{
    std::vector<Token> out;
    std::string section;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        const std::string raw =
            text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
        ++line_no;

        std::string line = raw;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        const std::string t = trim(line);
        if (!t.empty()) {
            if (t.front() == '[') {
                if (t.back() != ']' || t.size() < 3)
                    parse_fail(line_no, 1, "malformed section header");
                section = t.substr(1, t.size() - 2);
            } else {
                const std::size_t eq = line.find('=');
                if (eq == std::string::npos)
                    parse_fail(line_no, 1, "expected key = value");
                const std::string key = trim(line.substr(0, eq));
                const std::string value = trim(line.substr(eq + 1));
                if (key.empty())
                    parse_fail(line_no, 1, "empty key");
                if (value.empty())
                    parse_fail(line_no, static_cast<int>(eq) + 2, "empty value");
                if (section.empty())
                    parse_fail(line_no, 1, "key outside any [section]");
                out.push_back({section, key, value, line_no, static_cast<int>(eq) + 2});
            }
        }
        if (nl == std::string::npos)
            break;
        pos = nl + 1;
    }
    return out;
}

// Scalar with an optional unit suffix: plain number, "<x>pi", "<x>k2", "inf".
struct Scalar {
    double value = 0.0;
    enum class Unit { plain, pi, k2, infinite } unit = Unit::plain;
};

Scalar parse_scalar(const Token& tk, const std::string& text)
{
    Scalar s;
    const std::string v = trim(text);
    if (v == "inf" || v == "infinity") {
        s.unit = Scalar::Unit::infinite;
        return s;
    }
    std::string core = v;
    if (v.size() > 2 && v.substr(v.size() - 2) == "pi") {
        s.unit = Scalar::Unit::pi;
        core = trim(v.substr(0, v.size() - 2));
        if (core.empty())
            core = "1";
    } else if (v.size() > 2 && v.substr(v.size() - 2) == "k2") {
        s.unit = Scalar::Unit::k2;
        core = trim(v.substr(0, v.size() - 2));
    }
    char* end = nullptr;
    s.value = std::strtod(core.c_str(), &end);
    if (end != core.c_str() + core.size() || core.empty())
        parse_fail(tk.line, tk.col, "cannot parse number '" + v + "'");
    return s;
}

std::vector<Scalar> parse_list(const Token& tk)
{
    std::vector<Scalar> out;
    std::string rest = tk.value;
    while (!rest.empty()) {
        const std::size_t comma = rest.find(',');
        const std::string item = trim(rest.substr(0, comma));
        if (item.empty())
            parse_fail(tk.line, tk.col, "empty list element");
        out.push_back(parse_scalar(tk, item));
        if (comma == std::string::npos)
            break;
        rest = rest.substr(comma + 1);
    }
    if (out.empty())
        parse_fail(tk.line, tk.col, "empty list");
    return out;
}

[[noreturn]] void invalid(const std::string& field, const std::string& what)
{
    throw ValidationError("config field '" + field + "': " + what);
}

class ConfigReader {
public:
    explicit ConfigReader(const std::string& text) : tokens_(lex(text))
    {
        for (const auto& tk : tokens_) {
            const std::string full = tk.section + "." + tk.key;
            if (seen_.count(full))
                invalid(full, "duplicate key");
            seen_.insert(full);
            by_key_[full] = tk;
        }
    }

    std::optional<Token> take(const std::string& section, const std::string& key)
    {
        const std::string full = section + "." + key;
        auto it = by_key_.find(full);
        if (it == by_key_.end())
            return std::nullopt;
        used_.insert(full);
        return it->second;
    }

    void reject_unused() const
    {
        for (const auto& [full, tk] : by_key_)
            if (!used_.count(full))
                throw ValidationError("unknown key '" + tk.key + "' in [" + tk.section + "]");
    }

private:
    std::vector<Token> tokens_;
    std::set<std::string> seen_;
    std::set<std::string> used_;
    std::map<std::string, Token> by_key_;
};

double resolve_angle(const Scalar& s, const std::string& field)
{
    switch (s.unit) {
    case Scalar::Unit::plain:
        return s.value;
    case Scalar::Unit::pi:
        return s.value * kPi;
    default:
        invalid(field, "angle cannot carry a k2/inf suffix");
    }
}

double resolve_energy(const Scalar& s, double k, const std::string& field)
{
    switch (s.unit) {
    case Scalar::Unit::plain:
        return s.value;
    case Scalar::Unit::k2:
        return s.value * k * k;
    case Scalar::Unit::infinite:
        return std::numeric_limits<double>::infinity();
    default:
        invalid(field, "energy cannot carry a pi suffix");
    }
}

} // namespace

const char* command_name(Command c)
{
    switch (c) {
    case Command::figure2:
        return "figure2";
    case Command::figure3a:
        return "figure3a";
    case Command::figure3b:
        return "figure3b";
    case Command::slope_profile:
        return "slope-profile";
    case Command::force:
        return "force";
    case Command::force_scan:
        return "force-scan";
    case Command::converge:
        return "converge";
    case Command::infer_kappa:
        return "infer-kappa";
    case Command::periodicity:
        return "periodicity";
    }
    return "?";
}

std::string fnv1a_hex(const std::string& text)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RunConfig parse_config(const std::string& text, Command command)
{
    ConfigReader rd(text);
    RunConfig cfg;
    cfg.command = command;
    cfg.config_text = text;

    // ---- [scenario] ----
    auto scalar = [&](const std::string& sec, const std::string& key) -> std::optional<Scalar> {
        auto tk = rd.take(sec, key);
        if (!tk)
            return std::nullopt;
        return parse_scalar(*tk, tk->value);
    };

    if (auto s = scalar("scenario", "R")) {
        if (s->unit != Scalar::Unit::plain || !(s->value > 0.0))
            invalid("R", "must be a positive plain number");
        cfg.scenario.radius = s->value;
    }
    const auto k_key = scalar("scenario", "k");
    const auto kR_key = scalar("scenario", "kR");
    if (k_key && kR_key)
        invalid("k", "give either k or kR, not both");
    if (k_key) {
        if (k_key->unit != Scalar::Unit::plain || !(k_key->value > 0.0))
            invalid("k", "must be a positive plain number");
        cfg.scenario.wavenumber = k_key->value;
    } else if (kR_key) {
        if (kR_key->unit != Scalar::Unit::plain || !(kR_key->value > 0.0))
            invalid("kR", "must be a positive plain number");
        cfg.scenario.wavenumber = kR_key->value / cfg.scenario.radius;
    }
    if (auto s = scalar("scenario", "rho")) {
        if (!(s->value > 0.0))
            invalid("rho", "must be positive");
        cfg.scenario.density = s->value;
    }

    const auto beta_key = scalar("scenario", "beta");
    const auto kappa_key = scalar("scenario", "kappa");
    const auto v0_key = scalar("scenario", "V0");
    const auto alpha_key = scalar("scenario", "alpha");
    const double k = cfg.scenario.wavenumber;
    const bool v0_infinite = v0_key && v0_key->unit == Scalar::Unit::infinite;

    auto use_beta = [&](bool required) {
        if (kappa_key)
            invalid("kappa", "finite mode takes beta, not kappa");
        if (beta_key) {
            if (!(beta_key->value >= 0.0) || beta_key->unit != Scalar::Unit::plain)
                invalid("beta", "must be a plain number >= 0");
            cfg.scenario.flux_ratio = beta_key->value;
        } else if (required) {
            invalid("beta", "required for this command");
        }
    };
    auto use_kappa = [&](bool required) {
        if (beta_key)
            invalid("beta", "ideal mode takes kappa, not beta");
        if (v0_key && !v0_infinite)
            invalid("V0", "ideal mode requires V0 = inf (or omit it)");
        if (kappa_key) {
            if (!(kappa_key->value >= 0.0 && kappa_key->value < 1.0) ||
                kappa_key->unit != Scalar::Unit::plain)
                invalid("kappa", "must lie in [0, 1)");
            cfg.kappa = kappa_key->value;
        } else if (required) {
            invalid("kappa", "required for this command");
        }
    };
    auto no_alpha = [&] {
        if (alpha_key)
            invalid("alpha", "only the periodicity command takes alpha");
    };

    switch (command) {
    case Command::figure2:
    case Command::converge:
        // Finite model swept over the ladder; the scenario carries no
        // single V0 of its own.
        no_alpha();
        if (v0_key)
            invalid("V0", "this command sweeps the ladder; remove V0");
        use_beta(true);
        cfg.ideal_mode = false;
        break;
    case Command::periodicity:
        if (beta_key)
            invalid("beta", "periodicity derives beta = alpha + offset");
        if (kappa_key)
            invalid("kappa", "periodicity takes alpha, not kappa");
        if (!alpha_key)
            invalid("alpha", "required for the periodicity command");
        if (!(alpha_key->value >= 0.0 && alpha_key->value < 1.0))
            invalid("alpha", "must lie in [0, 1)");
        cfg.alpha = alpha_key->value;
        cfg.ideal_mode = false;
        cfg.scenario.barrier = v0_key ? resolve_energy(*v0_key, k, "V0") : 1e8 * k * k;
        if (!std::isfinite(cfg.scenario.barrier))
            invalid("V0", "periodicity requires a finite V0");
        break;
    case Command::figure3a:
    case Command::figure3b:
    case Command::force_scan:
        no_alpha();
        if (kappa_key)
            invalid("kappa", "this command scans kappa itself; remove the scalar key");
        use_kappa(false); // rejects beta / finite V0
        cfg.ideal_mode = true;
        break;
    case Command::infer_kappa:
        no_alpha();
        use_kappa(true); // the true kappa used to synthesize the samples
        cfg.ideal_mode = true;
        break;
    case Command::force:
    case Command::slope_profile:
        no_alpha();
        if (v0_infinite || !v0_key) {
            use_kappa(false);
            cfg.ideal_mode = true;
        } else {
            use_beta(false);
            cfg.ideal_mode = false;
            cfg.scenario.barrier = resolve_energy(*v0_key, k, "V0");
            if (!(cfg.scenario.barrier >= 0.0))
                invalid("V0", "must be >= 0");
        }
        break;
    }
    if (cfg.ideal_mode)
        cfg.scenario.barrier = std::numeric_limits<double>::infinity();

    // ---- [grid] ----
    cfg.phi = 1.3 * kPi;
    if (auto s = scalar("grid", "phi"))
        cfg.phi = resolve_angle(*s, "phi");

    if (auto tk = rd.take("grid", "angles_list")) {
        cfg.angles_list.clear();
        for (const auto& s : parse_list(*tk))
            cfg.angles_list.push_back(resolve_angle(s, "angles_list"));
    } else {
        cfg.angles_list = {kPi, 1.3 * kPi};
    }

    if (auto s = scalar("grid", "angles")) {
        if (s->unit != Scalar::Unit::plain || s->value < 4 || s->value != std::floor(s->value))
            invalid("angles", "must be an integer >= 4");
        cfg.angle_points = static_cast<int>(s->value);
    }
    if (auto s = scalar("grid", "r_min")) {
        if (!(s->value > 0.0))
            invalid("r_min", "must be positive (units of R)");
        cfg.r_min = s->value;
    }
    if (auto s = scalar("grid", "r_max")) {
        if (!(s->value > 0.0))
            invalid("r_max", "must be positive (units of R)");
        cfg.r_max = s->value;
    }
    if (!(cfg.r_min < cfg.r_max))
        invalid("r_min", "must be below r_max");
    if (auto s = scalar("grid", "r_points")) {
        if (s->value < 2 || s->value != std::floor(s->value))
            invalid("r_points", "must be an integer >= 2");
        cfg.r_points = static_cast<int>(s->value);
    }

    if (auto tk = rd.take("grid", "ladder")) {
        cfg.ladder.clear();
        for (const auto& s : parse_list(*tk))
            cfg.ladder.push_back(resolve_energy(s, k, "ladder"));
        for (std::size_t i = 0; i < cfg.ladder.size(); ++i)
            if (!(cfg.ladder[i] > 0.0) || !std::isfinite(cfg.ladder[i]) ||
                (i > 0 && !(cfg.ladder[i] > cfg.ladder[i - 1])))
                invalid("ladder", "must be a strictly increasing list of finite energies");
    } else {
        for (double c : {1e4, 1e5, 1e6, 1e7, 1e8})
            cfg.ladder.push_back(c * k * k);
    }

    if (auto s = scalar("grid", "quadrature")) {
        if (s->value < 64 || s->value != std::floor(s->value))
            invalid("quadrature", "must be an integer >= 64");
        cfg.quadrature_points = static_cast<int>(s->value);
        if ((cfg.quadrature_points & (cfg.quadrature_points - 1)) != 0)
            invalid("quadrature", "must be a power of two");
    }

    if (auto tk = rd.take("grid", "kappas")) {
        cfg.kappas.clear();
        for (const auto& s : parse_list(*tk)) {
            if (!(s.value >= 0.0 && s.value < 1.0) || s.unit != Scalar::Unit::plain)
                invalid("kappas", "entries must lie in [0, 1)");
            cfg.kappas.push_back(s.value);
        }
    } else {
        cfg.kappas = {0.2, 0.4};
    }

    if (auto s = scalar("grid", "kappa_points")) {
        if (s->value < 2 || s->value != std::floor(s->value))
            invalid("kappa_points", "must be an integer >= 2");
        cfg.kappa_points = static_cast<int>(s->value);
    }

    if (auto tk = rd.take("grid", "kR_list")) {
        cfg.kR_list.clear();
        for (const auto& s : parse_list(*tk)) {
            if (!(s.value > 0.0) || s.unit != Scalar::Unit::plain)
                invalid("kR_list", "entries must be positive plain numbers");
            cfg.kR_list.push_back(s.value);
        }
    } else {
        cfg.kR_list = {1e-3};
    }
    if (auto tk = rd.take("grid", "alpha_list")) {
        cfg.alpha_list.clear();
        for (const auto& s : parse_list(*tk)) {
            if (!(s.value >= 0.0 && s.value < 1.0) || s.unit != Scalar::Unit::plain)
                invalid("alpha_list", "entries must lie in [0, 1)");
            cfg.alpha_list.push_back(s.value);
        }
    } else {
        for (int i = 1; i <= 9; ++i)
            cfg.alpha_list.push_back(0.1 * i);
    }

    if (auto tk = rd.take("grid", "offsets")) {
        cfg.offsets.clear();
        for (const auto& s : parse_list(*tk)) {
            if (s.unit != Scalar::Unit::plain || s.value != std::floor(s.value))
                invalid("offsets", "entries must be integers");
            cfg.offsets.push_back(static_cast<int>(s.value));
        }
    } else {
        cfg.offsets = {0, 1};
    }

    if (auto tk = rd.take("grid", "observable")) {
        if (tk->value != "slope" && tk->value != "force")
            invalid("observable", "must be 'slope' or 'force'");
        cfg.observable = tk->value;
    }

    // ---- [output] ----
    if (auto tk = rd.take("output", "path"))
        cfg.output_path = tk->value;

    rd.reject_unused();
    cfg.scenario.validate();
    return cfg;
}

} // namespace ab::cli
