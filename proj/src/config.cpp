#include "mcasim/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "mcasim/errors.hpp"

namespace mcasim {
namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_double(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(value, &used);
    } catch (const std::exception&) {
        throw config_error("config: key '" + key + "' has non-numeric value '" + value + "'");
    }
    if (used != value.size())
        throw config_error("config: key '" + key + "' has trailing junk in '" + value + "'");
    return out;
}

long parse_long(const std::string& key, const std::string& value) {
    const double d = parse_double(key, value);
    const long l = static_cast<long>(d);
    if (static_cast<double>(l) != d)
        throw config_error("config: key '" + key + "' expects an integer, got '" + value + "'");
    return l;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "on" || value == "1") return true;
    if (value == "false" || value == "off" || value == "0") return false;
    throw config_error("config: key '" + key + "' expects a boolean, got '" + value + "'");
}

void apply_model_key(ModelParams& m, const std::string& key, const std::string& value) {
    if (key == "j1") m.j1 = parse_double(key, value);
    else if (key == "j1p") m.j1p = parse_double(key, value);
    else if (key == "j2") m.j2 = parse_double(key, value);
    else if (key == "j2p") m.j2p = parse_double(key, value);
    else if (key == "ka") m.ka = parse_double(key, value);
    else if (key == "kb") m.kb = parse_double(key, value);
    else if (key == "kc") m.kc = parse_double(key, value);
    else if (key == "g") m.g = parse_double(key, value);
    else if (key == "s") m.s = parse_double(key, value);
    else if (key == "twin_fraction") m.twin_fraction = parse_double(key, value);
    else throw config_error("config: unknown [model] key '" + key + "'");
}

void apply_sweep_key(RunConfig& c, const std::string& key, const std::string& value) {
    if (key == "kind") c.kind = sweep_kind_from_string(value);
    else if (key == "start") c.start = parse_double(key, value);
    else if (key == "stop") c.stop = parse_double(key, value);
    else if (key == "step") c.step = parse_double(key, value);
    else if (key == "fixed_magnitude") c.fixed_magnitude = parse_double(key, value);
    else if (key == "twins") c.twins = parse_bool(key, value);
    else if (key == "shots") c.shots = parse_long(key, value);
    else if (key == "output_dir") c.output_dir = value;
    else if (key == "emit_plots") c.emit_plots = parse_bool(key, value);
    else if (key == "warm_start") c.warm_start = parse_bool(key, value);
    else throw config_error("config: unknown [sweep] key '" + key + "'");
}

void apply_optimizer_key(OptimizerConfig& o, const std::string& key, const std::string& value) {
    if (key == "seed") o.seed = static_cast<std::uint64_t>(parse_long(key, value));
    else if (key == "n_restarts") o.n_restarts = static_cast<int>(parse_long(key, value));
    else if (key == "threads") o.threads = static_cast<int>(parse_long(key, value));
    else if (key == "max_evals") o.max_evals = parse_long(key, value);
    else if (key == "f_tol") o.f_tol = parse_double(key, value);
    else if (key == "x_tol") o.x_tol = parse_double(key, value);
    else if (key == "reflection") o.reflection = parse_double(key, value);
    else if (key == "expansion") o.expansion = parse_double(key, value);
    else if (key == "contraction") o.contraction = parse_double(key, value);
    else if (key == "shrink") o.shrink = parse_double(key, value);
    else throw config_error("config: unknown [optimizer] key '" + key + "'");
}

}  // namespace

std::string to_string(SweepKind kind) {
    switch (kind) {
        case SweepKind::field_b: return "field_b";
        case SweepKind::field_a: return "field_a";
        case SweepKind::field_c: return "field_c";
        case SweepKind::angle_bc: return "angle_bc";
        case SweepKind::high_field: return "high_field";
    }
    throw invariant_error("to_string: unhandled SweepKind");
}

SweepKind sweep_kind_from_string(const std::string& name) {
    if (name == "field_b") return SweepKind::field_b;
    if (name == "field_a") return SweepKind::field_a;
    if (name == "field_c") return SweepKind::field_c;
    if (name == "angle_bc") return SweepKind::angle_bc;
    if (name == "high_field") return SweepKind::high_field;
    throw config_error("config: unknown sweep kind '" + name + "'");
}

void RunConfig::validate() const {
    model.validate();
    optimizer.validate();
    if (!(step > 0.0)) throw config_error("config: sweep step must be > 0");
    if (!(start <= stop)) throw config_error("config: sweep start must be <= stop");
    if (kind == SweepKind::angle_bc && !(fixed_magnitude > 0.0))
        throw config_error("config: angle sweeps require fixed_magnitude > 0");
    if (shots < 0) throw config_error("config: shots must be >= 0");
    if (output_dir.empty()) throw config_error("config: output_dir must not be empty");
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    RunConfig config;
    std::istringstream in(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw config_error("config: " + origin + ":" + std::to_string(line_no) +
                                   ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "model" && section != "sweep" && section != "optimizer")
                throw config_error("config: unknown section '" + section + "'");
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config: " + origin + ":" + std::to_string(line_no) +
                               ": expected key = value, got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw config_error("config: " + origin + ":" + std::to_string(line_no) +
                               ": empty key");

        if (section == "model") apply_model_key(config.model, key, value);
        else if (section == "sweep") apply_sweep_key(config, key, value);
        else if (section == "optimizer") apply_optimizer_key(config.optimizer, key, value);
        else
            throw config_error("config: " + origin + ":" + std::to_string(line_no) + ": key '" +
                               key + "' outside any section");
    }
    config.validate();
    return config;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

}  // namespace mcasim
