#include "nlpf/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace nlpf {

namespace {

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};

class KeyValueFile {
public:
    explicit KeyValueFile(const std::string& path) : path_(path) {
        std::ifstream in(path);
        if (!in) throw ConfigError("config: cannot open " + path);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            const auto eq = line.find('=');
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            if (eq == std::string::npos)
                throw ConfigError(path + ":" + std::to_string(lineno) +
                                  ": expected 'key = value'");
            std::string key = trim(line.substr(0, eq));
            std::string value = trim(line.substr(eq + 1));
            if (key.empty())
                throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
            if (entries_.count(key))
                throw ConfigError(path + ":" + std::to_string(lineno) + ": duplicate key '" +
                                  key + "'");
            entries_[key] = Entry{value, lineno, false};
        }
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    std::string get_string(const std::string& key, const std::string& fallback) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        it->second.used = true;
        return it->second.value;
    }

    std::string require_string(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end())
            throw ConfigError(path_ + ": missing required key '" + key + "'");
        it->second.used = true;
        return it->second.value;
    }

    double get_double(const std::string& key, double fallback) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        it->second.used = true;
        return parse_double(it->second);
    }

    double require_double(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end())
            throw ConfigError(path_ + ": missing required key '" + key + "'");
        it->second.used = true;
        return parse_double(it->second);
    }

    long get_int(const std::string& key, long fallback) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        it->second.used = true;
        return parse_int(it->second);
    }

    long require_int(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end())
            throw ConfigError(path_ + ": missing required key '" + key + "'");
        it->second.used = true;
        return parse_int(it->second);
    }

    std::vector<int> require_int_list(const std::string& key) {
        std::string raw = require_string(key);
        std::replace(raw.begin(), raw.end(), ',', ' ');
        std::istringstream ss(raw);
        std::vector<int> out;
        long v = 0;
        while (ss >> v) out.push_back(int(v));
        if (out.empty() || !ss.eof())
            throw ConfigError(path_ + ":" + std::to_string(entries_[key].line) + ": key '" +
                              key + "' expects a comma-separated integer list");
        return out;
    }

    void reject_unknown() const {
        for (const auto& [key, e] : entries_) {
            if (!e.used)
                throw ConfigError(path_ + ":" + std::to_string(e.line) + ": unknown key '" +
                                  key + "'");
        }
    }

    const std::string& path() const { return path_; }

    [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
        auto it = entries_.find(key);
        const std::string where =
            it == entries_.end() ? path_ : path_ + ":" + std::to_string(it->second.line);
        throw ConfigError(where + ": key '" + key + "': " + msg);
    }

private:
    static std::string trim(std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        if (a == std::string::npos) return {};
        return s.substr(a, b - a + 1);
    }

    double parse_double(const Entry& e) const {
        try {
            std::size_t pos = 0;
            const double v = std::stod(e.value, &pos);
            if (pos != e.value.size()) throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            throw ConfigError(path_ + ":" + std::to_string(e.line) + ": '" + e.value +
                              "' is not a number");
        }
    }

    long parse_int(const Entry& e) const {
        try {
            std::size_t pos = 0;
            const long v = std::stol(e.value, &pos);
            if (pos != e.value.size()) throw std::invalid_argument("trailing characters");
            return v;
        } catch (const std::exception&) {
            throw ConfigError(path_ + ":" + std::to_string(e.line) + ": '" + e.value +
                              "' is not an integer");
        }
    }

    std::string path_;
    std::map<std::string, Entry> entries_;
};

Equation parse_equation(KeyValueFile& kv) {
    const std::string eq = kv.get_string("equation", "nch");
    if (eq == "nch") return Equation::nch;
    if (eq == "nac") return Equation::nac;
    kv.fail("equation", "expected 'nac' or 'nch', got '" + eq + "'");
}

DomainSpec parse_domain(KeyValueFile& kv) {
    DomainSpec d;
    d.x0 = kv.get_double("domain.x0", -0.5);
    d.y0 = kv.get_double("domain.y0", -0.5);
    d.L1 = kv.get_double("domain.L1", 1.0);
    d.L2 = kv.get_double("domain.L2", 1.0);
    return d;
}

KernelSpec parse_kernel(KeyValueFile& kv) {
    KernelSpec k;
    const std::string type = kv.get_string("kernel.type", "gaussian");
    if (type == "gaussian") {
        k.type = KernelSpec::Type::gaussian;
        k.alpha = kv.require_double("kernel.alpha");
        k.sigma = kv.require_double("kernel.sigma");
    } else if (type == "dog") {
        k.type = KernelSpec::Type::dog;
        k.alpha = kv.require_double("kernel.alpha");
        k.sigma = kv.require_double("kernel.sigma1");
        k.beta = kv.require_double("kernel.beta");
        k.sigma2 = kv.require_double("kernel.sigma2");
    } else {
        kv.fail("kernel.type", "expected 'gaussian' or 'dog', got '" + type + "'");
    }
    k.images = int(kv.get_int("kernel.images", 0));
    return k;
}

InitSpec parse_init(KeyValueFile& kv) {
    InitSpec init;
    const std::string type = kv.get_string("init.type", "sinusoid");
    if (type == "sinusoid") {
        init.type = InitSpec::Type::sinusoid;
    } else if (type == "random") {
        init.type = InitSpec::Type::random;
        init.mean = kv.get_double("init.mean", 0.0);
        init.amplitude = kv.require_double("init.amplitude");
        init.seed = std::uint64_t(kv.get_int("init.seed", 42));
    } else if (type == "file") {
        init.type = InitSpec::Type::file;
        init.path = kv.require_string("init.path");
    } else {
        kv.fail("init.type", "expected 'sinusoid', 'random' or 'file', got '" + type + "'");
    }
    return init;
}

SolverConfig parse_solver(KeyValueFile& kv) {
    SolverConfig s;
    s.newton_tol = kv.get_double("solver.newton_tol", s.newton_tol);
    s.newton_max_iter = int(kv.get_int("solver.newton_max_iter", s.newton_max_iter));
    s.krylov_tol = kv.get_double("solver.krylov_tol", s.krylov_tol);
    s.krylov_max_iter = int(kv.get_int("solver.krylov_max_iter", s.krylov_max_iter));
    const std::string damping = kv.get_string("solver.damping", "line-search-halving");
    if (damping == "none")
        s.damping = Damping::none;
    else if (damping == "line-search-halving")
        s.damping = Damping::line_search_halving;
    else
        kv.fail("solver.damping", "expected 'none' or 'line-search-halving'");

    const std::string backend = kv.get_string("backend", "auto");
    if (backend == "auto")
        s.backend = ConvBackend::automatic;
    else if (backend == "direct")
        s.backend = ConvBackend::direct;
    else if (backend == "fft")
        s.backend = ConvBackend::fft;
    else
        kv.fail("backend", "expected 'auto', 'direct' or 'fft'");
    return s;
}

void check_step_divides(KeyValueFile& kv, double T, double s) {
    if (!(s > 0.0)) kv.fail("time.s", "time step must be positive");
    if (!(T > 0.0)) kv.fail("time.T", "final time must be positive");
    const long long steps = std::llround(T / s);
    if (steps < 1 || std::abs(T - double(steps) * s) > 1e-12 * T)
        kv.fail("time.T", "T = " + std::to_string(T) + " is not an integer multiple of s = " +
                              std::to_string(s));
}

}  // namespace

RunConfig RunConfig::load(const std::string& path) {
    KeyValueFile kv(path);
    RunConfig c;
    c.equation = parse_equation(kv);
    c.domain = parse_domain(kv);
    c.m = int(kv.require_int("grid.m"));
    c.n = int(kv.require_int("grid.n"));
    c.kernel = parse_kernel(kv);
    c.gamma_c = kv.get_double("model.gamma_c", 0.0);
    c.gamma_e = kv.get_double("model.gamma_e", 0.0);
    c.M = kv.get_double("model.M", 1.0);
    c.s = kv.require_double("time.s");
    c.T = kv.require_double("time.T");
    c.init = parse_init(kv);
    c.solver = parse_solver(kv);
    c.energy_csv = kv.get_string("output.energy_csv", c.energy_csv);
    c.snapshot_every = int(kv.get_int("output.snapshot_every", 0));
    c.snapshot_dir = kv.get_string("output.snapshot_dir", c.snapshot_dir);
    kv.reject_unknown();
    check_step_divides(kv, c.T, c.s);
    if (c.m < 1 || c.n < 1) kv.fail("grid.m", "grid counts must be positive");
    return c;
}

StudyConfig StudyConfig::load(const std::string& path) {
    KeyValueFile kv(path);
    StudyConfig c;
    c.study.equation = parse_equation(kv);
    c.study.domain = parse_domain(kv);
    c.study.kernel = parse_kernel(kv);
    c.study.gamma_c = kv.get_double("model.gamma_c", 0.0);
    c.study.gamma_e = kv.get_double("model.gamma_e", 0.0);
    c.study.M = kv.get_double("model.M", 1.0);
    c.study.levels = kv.require_int_list("study.levels");
    c.study.refinement_c = kv.get_double("study.refinement_c", 0.1);
    c.study.T = kv.require_double("time.T");
    c.study.init = parse_init(kv);
    c.study.solver = parse_solver(kv);
    c.table_csv = kv.get_string("output.table_csv", c.table_csv);
    c.table_txt = kv.get_string("output.table_txt", c.table_txt);
    kv.reject_unknown();
    for (int level : c.study.levels) {
        const double h = c.study.domain.L1 / level;
        const double s = c.study.refinement_c * h;
        const long long steps = std::llround(c.study.T / s);
        if (steps < 1 || std::abs(c.study.T - double(steps) * s) > 1e-12 * c.study.T)
            kv.fail("study.levels", "level " + std::to_string(level) +
                                        " gives s that does not divide T");
    }
    return c;
}

DecayFileConfig DecayFileConfig::load(const std::string& path) {
    KeyValueFile kv(path);
    DecayFileConfig c;
    c.decay.equation = parse_equation(kv);
    c.decay.domain = parse_domain(kv);
    c.decay.m = int(kv.require_int("grid.m"));
    c.decay.n = int(kv.require_int("grid.n"));
    c.decay.kernel = parse_kernel(kv);
    c.decay.gamma_c = kv.get_double("model.gamma_c", 0.0);
    c.decay.gamma_e = kv.get_double("model.gamma_e", 0.0);
    c.decay.M = kv.get_double("model.M", 1.0);
    c.decay.s = kv.require_double("time.s");
    c.decay.T = kv.require_double("time.T");
    c.decay.init = parse_init(kv);
    c.decay.solver = parse_solver(kv);
    c.energy_csv = kv.get_string("output.energy_csv", c.energy_csv);
    kv.reject_unknown();
    check_step_divides(kv, c.decay.T, c.decay.s);
    return c;
}

}  // namespace nlpf
