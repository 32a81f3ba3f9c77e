#include "mshep/experiment.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace mshep {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

int to_int(const std::string& key, const std::string& v) {
    size_t pos = 0;
    int out;
    try { out = std::stoi(v, &pos); } catch (...) { pos = 0; }
    if (pos != v.size()) throw SolverError("experiment-cli", "bad integer for " + key + ": " + v);
    return out;
}

Real to_real(const std::string& key, const std::string& v) {
    size_t pos = 0;
    Real out;
    try { out = std::stod(v, &pos); } catch (...) { pos = 0; }
    if (pos != v.size()) throw SolverError("experiment-cli", "bad number for " + key + ": " + v);
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "on") return true;
    if (v == "false" || v == "0" || v == "off") return false;
    throw SolverError("experiment-cli", "bad boolean for " + key + ": " + v);
}

} // namespace

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SolverError("experiment-cli", "cannot open config file: " + path);

    ExperimentConfig cfg;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw SolverError("experiment-cli", "malformed section header at line " + std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw SolverError("experiment-cli", "expected key = value at line " + std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string qual = section + "." + key;

        if (qual == "nodes.configuration") cfg.configuration = value;
        else if (qual == "nodes.halton_total") cfg.halton_total = to_int(qual, value);
        else if (qual == "nodes.halton_boundary") cfg.halton_boundary = to_int(qual, value);
        else if (qual == "nodes.uniform_degree") cfg.uniform_degree = to_int(qual, value);
        else if (qual == "nodes.waldron_net") cfg.waldron_net = to_int(qual, value);
        else if (qual == "nodes.waldron_cell") cfg.waldron_cell = to_int(qual, value);
        else if (qual == "market.rate") cfg.market.rate = to_real(qual, value);
        else if (qual == "market.sigma1") cfg.market.sigma1 = to_real(qual, value);
        else if (qual == "market.sigma2") cfg.market.sigma2 = to_real(qual, value);
        else if (qual == "market.correlation") cfg.market.correlation = to_real(qual, value);
        else if (qual == "market.strike") cfg.market.strike = to_real(qual, value);
        else if (qual == "market.maturity") cfg.market.maturity = to_real(qual, value);
        else if (qual == "shepard.mu") cfg.mu = to_real(qual, value);
        else if (qual == "covering.p") cfg.p = to_int(qual, value);
        else if (qual == "covering.q") cfg.q = to_int(qual, value);
        else if (qual == "time.steps") cfg.steps = to_int(qual, value);
        else if (qual == "time.scheme") cfg.scheme = value;
        else if (qual == "time.freeze_boundary") cfg.freeze_boundary = to_bool(qual, value);
        else if (qual == "reference.grid") cfg.reference_grid = to_int(qual, value);
        else if (qual == "reference.steps") cfg.reference_steps = to_int(qual, value);
        else if (qual == "evaluation.resolution") cfg.evaluation_resolution = to_int(qual, value);
        else if (qual == "rbf.compare") cfg.rbf_compare = to_bool(qual, value);
        else if (qual == "rbf.shape") cfg.rbf_shape = to_real(qual, value);
        else if (qual == "output.dir") cfg.out_dir = value;
        else if (qual == "output.write_matrices") cfg.write_matrices = to_bool(qual, value);
        else throw SolverError("experiment-cli", "unknown config key: " + qual);
    }
    cfg.validate();
    return cfg;
}

void ExperimentConfig::validate() const {
    static const char* known[] = {"halton", "uniform", "waldron", "waldron_lines", "rbf_fig1"};
    bool ok = false;
    for (const char* k : known) ok = ok || configuration == k;
    if (!ok) throw SolverError("experiment-cli", "unknown node configuration: " + configuration);
    market.validate();
    parse_scheme(scheme);
    if (halton_total < 1 || halton_boundary < 1)
        throw SolverError("experiment-cli", "halton counts must be positive");
    if (uniform_degree < 1 || waldron_net < 1 || waldron_cell < 1)
        throw SolverError("experiment-cli", "node degrees must be positive");
    if (p < 1) throw SolverError("experiment-cli", "polynomial degree must be positive");
    if (q < 0) throw SolverError("experiment-cli", "negative surplus");
    if (steps < 2) throw SolverError("experiment-cli", "need at least two time steps");
    if (reference_grid < 8) throw SolverError("experiment-cli", "reference grid too coarse");
    if (reference_steps < 2) throw SolverError("experiment-cli", "reference needs at least two steps");
    if (evaluation_resolution < 2) throw SolverError("experiment-cli", "evaluation resolution too coarse");
    if (rbf_shape < 0) throw SolverError("experiment-cli", "negative shape parameter");
}

int ExperimentConfig::effective_q() const {
    if (q > 0) return q;
    const bool waldron_based = configuration == "waldron" || configuration == "waldron_lines";
    return waldron_based ? 30 : 10;
}

int ExperimentConfig::effective_reference_steps() const {
    const int m = steps;
    return ((reference_steps + m - 1) / m) * m;  // smallest multiple of steps >= requested
}

std::string ExperimentConfig::report_text() const {
    std::ostringstream os;
    os << "configuration = " << configuration << '\n'
       << "halton_total = " << halton_total << '\n'
       << "halton_boundary = " << halton_boundary << '\n'
       << "uniform_degree = " << uniform_degree << '\n'
       << "waldron_net = " << waldron_net << '\n'
       << "waldron_cell = " << waldron_cell << '\n'
       << "rate = " << market.rate << '\n'
       << "sigma1 = " << market.sigma1 << '\n'
       << "sigma2 = " << market.sigma2 << '\n'
       << "correlation = " << market.correlation << '\n'
       << "strike = " << market.strike << '\n'
       << "maturity = " << market.maturity << '\n'
       << "mu = " << mu << '\n'
       << "p = " << p << '\n'
       << "q = " << effective_q() << '\n'
       << "steps = " << steps << '\n'
       << "scheme = " << scheme << '\n'
       << "freeze_boundary = " << (freeze_boundary ? "true" : "false") << '\n'
       << "reference_grid = " << reference_grid << '\n'
       << "reference_steps = " << effective_reference_steps() << '\n'
       << "evaluation_resolution = " << evaluation_resolution << '\n'
       << "rbf_compare = " << (rbf_compare ? "true" : "false") << '\n'
       << "rbf_shape = " << (rbf_shape > 0 ? std::to_string(rbf_shape) : std::string("auto")) << '\n';
    return os.str();
}

} // namespace mshep
