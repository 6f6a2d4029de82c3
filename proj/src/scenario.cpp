#include "gaspower/scenario.hpp"

#include "gaspower/error.hpp"
#include "gaspower/law_parser.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace gaspower {
namespace {

enum class Dim { none, length, pressure, time, density, power, flux };

struct Unit {
    std::string_view name;
    Dim dim;
    double factor;  // 0: context dependent (MW, m3/s)
};

constexpr Unit kUnits[] = {
    {"m", Dim::length, 1.0},          {"km", Dim::length, 1e3},     {"mm", Dim::length, 1e-3},
    {"Pa", Dim::pressure, 1.0},       {"kPa", Dim::pressure, 1e3},  {"MPa", Dim::pressure, 1e6},
    {"bar", Dim::pressure, 1e5},      {"s", Dim::time, 1.0},        {"min", Dim::time, 60.0},
    {"h", Dim::time, 3600.0},         {"kg/m3", Dim::density, 1.0}, {"p.u.", Dim::power, 1.0},
    {"MW", Dim::power, 0.0},          {"Mvar", Dim::power, 0.0},    {"kg/(m2 s)", Dim::flux, 1.0},
    {"m3/s", Dim::flux, 0.0},
};

std::string_view dim_name(Dim d) {
    switch (d) {
        case Dim::none: return "dimensionless";
        case Dim::length: return "length";
        case Dim::pressure: return "pressure";
        case Dim::time: return "time";
        case Dim::density: return "density";
        case Dim::power: return "power";
        case Dim::flux: return "flow";
    }
    return "?";
}

int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : -1; }

// Line numbers of scenario entries, keyed like "pipes[2]", for cross-reference errors.
using LineMap = std::map<std::string, int>;

int lookup(const LineMap& lines, const std::string& key) {
    const auto it = lines.find(key);
    return it == lines.end() ? -1 : it->second;
}

class Reader {
public:
    explicit Reader(LineMap& lines) : lines_(lines) {}

    double base_mva = 100.0;
    double reference_density = 0.785;

    [[noreturn]] static void fail(const std::string& field, const YAML::Node& n, const std::string& msg) {
        throw SchemaError(field, line_of(n), msg);
    }

    static void allow_keys(const YAML::Node& map, const std::string& field, std::initializer_list<std::string_view> keys) {
        if (!map.IsMap()) fail(field, map, "expected a mapping");
        for (const auto& kv : map) {
            const std::string k = kv.first.as<std::string>();
            bool ok = false;
            for (auto key : keys) ok = ok || key == k;
            if (!ok) fail(field + "." + k, kv.first, "unknown field");
        }
    }

    static YAML::Node required(const YAML::Node& map, const std::string& field, const char* key) {
        const YAML::Node n = map[key];
        if (!n) fail(field + "." + key, map, "missing required field");
        return n;
    }

    static std::string text(const YAML::Node& n, const std::string& field) {
        if (!n.IsScalar()) fail(field, n, "expected a scalar");
        return n.Scalar();
    }

    static bool boolean(const YAML::Node& n, const std::string& field) {
        try {
            return n.as<bool>();
        } catch (const YAML::Exception&) {
            fail(field, n, "expected true or false");
        }
    }

    // Number with an optional unit suffix, converted to SI (p.u. for power).
    // context_factor converts MW / Mvar and m3/s.
    double quantity(const YAML::Node& n, const std::string& field, Dim dim, double context_factor = 0.0) const {
        const std::string s = text(n, field);
        std::size_t b = s.find_first_not_of(" \t");
        if (b == std::string::npos) fail(field, n, "empty value");
        double v = 0.0;
        const char* first = s.data() + b;
        const char* last = s.data() + s.size();
        if (*first == '+') ++first;
        const auto [end, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || !std::isfinite(v)) fail(field, n, "expected a number, got '" + s + "'");
        std::string unit(end, last);
        unit.erase(0, unit.find_first_not_of(" \t"));
        unit.erase(unit.find_last_not_of(" \t") + 1);
        if (unit.empty()) return v;
        for (const auto& u : kUnits) {
            if (u.name != unit) continue;
            if (u.dim != dim) break;
            double f = u.factor;
            if (f == 0.0) {
                if (dim == Dim::power) f = 1.0 / base_mva;
                else if (context_factor > 0.0) f = context_factor;
                else fail(field, n, "unit '" + unit + "' cannot be converted here");
            }
            return v * f;
        }
        fail(field, n, "'" + unit + "' is not a " + std::string(dim_name(dim)) + " unit");
    }

    std::vector<double> quantities(const YAML::Node& n, const std::string& field, Dim dim, double cf = 0.0) const {
        if (!n.IsSequence()) fail(field, n, "expected a list");
        std::vector<double> out;
        for (std::size_t i = 0; i < n.size(); ++i) {
            out.push_back(quantity(n[i], field + "[" + std::to_string(i) + "]", dim, cf));
        }
        return out;
    }

    // Scalar (constant) or {times: [...], values: [...]}.
    TimeSeries series(const YAML::Node& n, const std::string& field, Dim dim, double cf = 0.0) const {
        if (n.IsScalar()) return TimeSeries::constant(quantity(n, field, dim, cf));
        allow_keys(n, field, {"times", "values"});
        const auto times = quantities(required(n, field, "times"), field + ".times", Dim::time);
        const auto values = quantities(required(n, field, "values"), field + ".values", dim, cf);
        try {
            return TimeSeries(times, values);
        } catch (const Error& e) {
            fail(field, n, e.what());
        }
    }

    GasState state(const YAML::Node& n, const std::string& field, std::initializer_list<std::string_view> extra) const {
        std::vector<std::string_view> keys{"rho", "q"};
        keys.insert(keys.end(), extra.begin(), extra.end());
        if (!n.IsMap()) fail(field, n, "expected a mapping");
        for (const auto& kv : n) {
            const std::string k = kv.first.as<std::string>();
            if (std::find(keys.begin(), keys.end(), k) == keys.end()) fail(field + "." + k, kv.first, "unknown field");
        }
        GasState u;
        u.rho = quantity(required(n, field, "rho"), field + ".rho", Dim::density);
        u.q = n["q"] ? quantity(n["q"], field + ".q", Dim::flux) : 0.0;
        if (!(u.rho > 0.0)) fail(field + ".rho", n, "density must be positive");
        return u;
    }

    void mark(const std::string& key, const YAML::Node& n) { lines_[key] = line_of(n); }

private:
    LineMap& lines_;
};

NodeKind parse_kind(const YAML::Node& n, const std::string& field) {
    const std::string k = Reader::text(n, field);
    if (k == "junction") return NodeKind::junction;
    if (k == "pressure") return NodeKind::pressure;
    if (k == "periodic") return NodeKind::periodic;
    Reader::fail(field, n, "unknown node kind '" + k + "'");
}

power::BusKind parse_bus_kind(const YAML::Node& n, const std::string& field) {
    const std::string k = Reader::text(n, field);
    if (k == "PQ") return power::BusKind::pq;
    if (k == "PV") return power::BusKind::pv;
    if (k == "slack") return power::BusKind::slack;
    Reader::fail(field, n, "unknown bus type '" + k + "' (PQ, PV or slack)");
}

std::string_view kind_name(NodeKind k) {
    switch (k) {
        case NodeKind::junction: return "junction";
        case NodeKind::pressure: return "pressure";
        case NodeKind::periodic: return "periodic";
    }
    return "?";
}

void check_series_id(const Scenario& s, const std::string& id, int line) {
    const auto at = id.find('@');
    auto has_node = [&](const std::string& n) {
        return std::any_of(s.gas_nodes.begin(), s.gas_nodes.end(), [&](const auto& g) { return g.id == n; });
    };
    auto has_bus = [&](const std::string& b) {
        return std::any_of(s.grid.buses.begin(), s.grid.buses.end(), [&](const auto& g) { return g.id == b; });
    };
    if (at == std::string::npos) {
        if (id == "mass") return;
        if (id == "epsilon") {
            if (!s.link) throw SchemaError("outputs.series", line, "'epsilon' needs a coupling section");
            return;
        }
        throw SchemaError("outputs.series", line, "unknown quantity '" + id + "'");
    }
    const std::string what = id.substr(0, at);
    const std::string where = id.substr(at + 1);
    if (what == "pressure" || what == "density" || what == "inflow") {
        if (!has_node(where)) throw SchemaError("outputs.series", line, "unknown gas node in '" + id + "'");
        return;
    }
    if (what == "P" || what == "Q" || what == "Vm" || what == "Va") {
        if (!has_bus(where)) throw SchemaError("outputs.series", line, "unknown bus in '" + id + "'");
        return;
    }
    throw SchemaError("outputs.series", line, "unknown quantity '" + id + "'");
}

void validate_impl(const Scenario& s, const LineMap& lines) {
    std::map<std::string, std::size_t> nodes;
    for (std::size_t i = 0; i < s.gas_nodes.size(); ++i) {
        const auto& n = s.gas_nodes[i];
        const std::string key = "gas_nodes[" + std::to_string(i) + "]";
        if (n.id.empty()) throw SchemaError(key + ".Node", lookup(lines, key), "empty id");
        if (!nodes.emplace(n.id, i).second) {
            throw SchemaError(key + ".Node", lookup(lines, key), "duplicate gas node '" + n.id + "'");
        }
        const bool has_p = !n.pressure.empty() || !n.density.empty();
        if (n.kind == NodeKind::pressure && !has_p) {
            throw SchemaError(key, lookup(lines, key), "pressure node '" + n.id + "' needs a Pressure or Density boundary");
        }
        if (n.kind != NodeKind::pressure && has_p) {
            throw SchemaError(key, lookup(lines, key), "only pressure nodes take a pressure boundary");
        }
        if (!n.pressure.empty() && !n.density.empty()) {
            throw SchemaError(key, lookup(lines, key), "give either Pressure or Density, not both");
        }
        if (n.kind != NodeKind::junction && !n.extraction.empty()) {
            throw SchemaError(key, lookup(lines, key), "only junction nodes take an Outflow");
        }
    }
    std::set<std::string> pipes;
    for (std::size_t i = 0; i < s.pipes.size(); ++i) {
        const auto& p = s.pipes[i];
        const std::string key = "pipes[" + std::to_string(i) + "]";
        const int line = lookup(lines, key);
        if (!pipes.insert(p.id).second) throw SchemaError(key + ".Pipe", line, "duplicate pipe '" + p.id + "'");
        if (!nodes.count(p.from)) throw SchemaError(key + ".From", line, "unknown gas node '" + p.from + "'");
        if (!nodes.count(p.to)) throw SchemaError(key + ".To", line, "unknown gas node '" + p.to + "'");
        if (!(p.geometry.length > 0.0)) throw SchemaError(key + ".Length", line, "length must be positive");
        if (!(p.geometry.diameter > 0.0)) throw SchemaError(key + ".Diameter", line, "diameter must be positive");
        if (!(p.geometry.roughness >= 0.0)) throw SchemaError(key + ".Roughness", line, "roughness must be >= 0");
    }
    for (std::size_t i = 0; i < s.gas_nodes.size(); ++i) {
        const auto& n = s.gas_nodes[i];
        if (!n.compressor) continue;
        const std::string key = "gas_nodes[" + std::to_string(i) + "]";
        const auto it = std::find_if(s.pipes.begin(), s.pipes.end(),
                                     [&](const auto& p) { return p.id == n.compressor->suction_pipe; });
        if (it == s.pipes.end() || (it->from != n.id && it->to != n.id)) {
            throw SchemaError(key + ".Compressor.Suction", lookup(lines, key),
                              "suction pipe '" + n.compressor->suction_pipe + "' is not attached to '" + n.id + "'");
        }
        if (!(n.compressor->ratio > 0.0)) {
            throw SchemaError(key + ".Compressor.Ratio", lookup(lines, key), "ratio must be positive");
        }
    }
    if (!s.pipes.empty() && s.law.empty()) throw SchemaError("law", lookup(lines, "law"), "missing pressure law");

    if (s.has_power()) {
        try {
            power::validate(s.grid);
        } catch (const Error& e) {
            throw SchemaError("buses", lookup(lines, "buses"), e.what());
        }
    } else if (!s.grid.lines.empty()) {
        throw SchemaError("lines", lookup(lines, "lines"), "lines without buses");
    }
    for (std::size_t i = 0; i < s.schedules.size(); ++i) {
        const std::string key = "schedules[" + std::to_string(i) + "]";
        const auto& b = s.schedules[i].bus;
        if (std::none_of(s.grid.buses.begin(), s.grid.buses.end(), [&](const auto& x) { return x.id == b; })) {
            throw SchemaError(key + ".Bus", lookup(lines, key), "unknown bus '" + b + "'");
        }
    }
    if (s.link) {
        const auto it = nodes.find(s.link->gas_node);
        if (it == nodes.end() || s.gas_nodes[it->second].kind != NodeKind::junction) {
            throw SchemaError("coupling.gas_node", lookup(lines, "coupling"),
                              "'" + s.link->gas_node + "' is not a junction gas node");
        }
        if (std::none_of(s.grid.buses.begin(), s.grid.buses.end(), [&](const auto& x) { return x.id == s.link->bus; })) {
            throw SchemaError("coupling.bus", lookup(lines, "coupling"), "unknown bus '" + s.link->bus + "'");
        }
    }
    for (const auto& [pipe, u] : s.initial.pipes) {
        if (!pipes.count(pipe)) throw SchemaError("initial.pipes", lookup(lines, "initial"), "unknown pipe '" + pipe + "'");
    }
    if (s.initial.kind == InitialSpec::Kind::per_pipe && s.initial.pipes.size() != s.pipes.size()) {
        throw SchemaError("initial.pipes", lookup(lines, "initial"), "every pipe needs an initial state");
    }
    for (std::size_t i = 0; i < s.numerics.size(); ++i) {
        const auto& n = s.numerics[i];
        const std::string key = "numerics[" + std::to_string(i) + "]";
        if (!(n.dt > 0.0)) throw SchemaError(key + ".dt", lookup(lines, key), "time step must be positive");
        if (!(n.dx > 0.0)) throw SchemaError(key + ".dx", lookup(lines, key), "dx must be positive");
        if (!(n.end_time >= 0.0)) throw SchemaError(key + ".end_time", lookup(lines, key), "end time must be >= 0");
    }
    if (s.initial.kind == InitialSpec::Kind::stationary) {
        for (const auto& n : s.numerics) {
            if (n.scheme != Scheme::ibox) {
                throw SchemaError("initial", lookup(lines, "initial"), "a stationary initial state needs the ibox scheme");
            }
        }
    }
    if (s.extraction_sweep) {
        const auto it = nodes.find(s.extraction_sweep->node);
        if (it == nodes.end() || s.gas_nodes[it->second].kind != NodeKind::junction) {
            throw SchemaError("sweep.extraction.node", lookup(lines, "sweep"),
                              "'" + s.extraction_sweep->node + "' is not a junction gas node");
        }
    }
    std::set<std::string> series;
    for (const auto& id : s.outputs.series) {
        check_series_id(s, id, lookup(lines, "outputs"));
        if (!series.insert(id).second) throw SchemaError("outputs.series", lookup(lines, "outputs"), "duplicate id '" + id + "'");
    }
    for (const auto& p : s.outputs.profiles) {
        if (!series.insert(p.id).second) {
            throw SchemaError("outputs.profiles", lookup(lines, "outputs"), "duplicate id '" + p.id + "'");
        }
        if (p.pipes.empty()) throw SchemaError("outputs.profiles", lookup(lines, "outputs"), "profile needs pipes");
        for (const auto& pipe : p.pipes) {
            if (!pipes.count(pipe)) {
                throw SchemaError("outputs.profiles", lookup(lines, "outputs"), "unknown pipe '" + pipe + "'");
            }
        }
    }
    if (!(s.outputs.sample_interval >= 0.0)) {
        throw SchemaError("outputs.sample_interval", lookup(lines, "outputs"), "must be >= 0");
    }
}

Scenario parse_document(const YAML::Node& doc, LineMap& lines) {
    if (!doc || doc.IsNull()) throw SchemaError("document", 1, "empty scenario");
    Reader r(lines);
    Reader::allow_keys(doc, "document",
                       {"name", "law", "reference_density", "friction", "base_mva", "gas_nodes", "pipes", "boundary",
                        "buses", "lines", "schedules", "coupling", "initial", "numerics", "sweep", "outputs"});
    Scenario s;
    if (doc["name"]) s.name = Reader::text(doc["name"], "name");
    if (doc["law"]) {
        s.law = Reader::text(doc["law"], "law");
        r.mark("law", doc["law"]);
        try {
            parse_law(s.law);
        } catch (const Error& e) {
            Reader::fail("law", doc["law"], e.what());
        }
    }
    if (doc["reference_density"]) {
        s.reference_density = r.quantity(doc["reference_density"], "reference_density", Dim::density);
        if (!(s.reference_density > 0.0)) Reader::fail("reference_density", doc["reference_density"], "must be positive");
    }
    r.reference_density = s.reference_density;
    if (const auto f = doc["friction"]) {
        Reader::allow_keys(f, "friction", {"enabled", "viscosity"});
        if (f["enabled"]) s.source.friction = Reader::boolean(f["enabled"], "friction.enabled");
        if (f["viscosity"]) s.source.viscosity = r.quantity(f["viscosity"], "friction.viscosity", Dim::none);
        if (!(s.source.viscosity > 0.0)) Reader::fail("friction.viscosity", f, "viscosity must be positive");
    }
    if (doc["base_mva"]) {
        s.grid.base_mva = r.quantity(doc["base_mva"], "base_mva", Dim::none);
        if (!(s.grid.base_mva > 0.0)) Reader::fail("base_mva", doc["base_mva"], "must be positive");
    }
    r.base_mva = s.grid.base_mva;

    if (const auto nodes = doc["gas_nodes"]) {
        if (!nodes.IsSequence()) Reader::fail("gas_nodes", nodes, "expected a list");
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const std::string f = "gas_nodes[" + std::to_string(i) + "]";
            const auto n = nodes[i];
            Reader::allow_keys(n, f, {"Node", "Kind", "Compressor"});
            r.mark(f, n);
            GasNodeSpec g;
            g.id = Reader::text(Reader::required(n, f, "Node"), f + ".Node");
            if (n["Kind"]) g.kind = parse_kind(n["Kind"], f + ".Kind");
            if (const auto c = n["Compressor"]) {
                Reader::allow_keys(c, f + ".Compressor", {"Suction", "Ratio"});
                Compressor comp;
                comp.suction_pipe = Reader::text(Reader::required(c, f + ".Compressor", "Suction"), f + ".Compressor.Suction");
                if (c["Ratio"]) comp.ratio = r.quantity(c["Ratio"], f + ".Compressor.Ratio", Dim::none);
                g.compressor = comp;
            }
            s.gas_nodes.push_back(std::move(g));
        }
    }
    if (const auto pipes = doc["pipes"]) {
        if (!pipes.IsSequence()) Reader::fail("pipes", pipes, "expected a list");
        for (std::size_t i = 0; i < pipes.size(); ++i) {
            const std::string f = "pipes[" + std::to_string(i) + "]";
            const auto n = pipes[i];
            Reader::allow_keys(n, f, {"Pipe", "From", "To", "Length", "Diameter", "Roughness"});
            r.mark(f, n);
            PipeSpec p;
            p.id = Reader::text(Reader::required(n, f, "Pipe"), f + ".Pipe");
            p.from = Reader::text(Reader::required(n, f, "From"), f + ".From");
            p.to = Reader::text(Reader::required(n, f, "To"), f + ".To");
            p.geometry.length = r.quantity(Reader::required(n, f, "Length"), f + ".Length", Dim::length);
            p.geometry.diameter = r.quantity(Reader::required(n, f, "Diameter"), f + ".Diameter", Dim::length);
            if (n["Roughness"]) p.geometry.roughness = r.quantity(n["Roughness"], f + ".Roughness", Dim::length);
            s.pipes.push_back(std::move(p));
        }
    }
    if (const auto bc = doc["boundary"]) {
        if (!bc.IsSequence()) Reader::fail("boundary", bc, "expected a list");
        for (std::size_t i = 0; i < bc.size(); ++i) {
            const std::string f = "boundary[" + std::to_string(i) + "]";
            const auto n = bc[i];
            Reader::allow_keys(n, f, {"Node", "Pressure", "Density", "Outflow"});
            const std::string id = Reader::text(Reader::required(n, f, "Node"), f + ".Node");
            const auto it = std::find_if(s.gas_nodes.begin(), s.gas_nodes.end(), [&](const auto& g) { return g.id == id; });
            if (it == s.gas_nodes.end()) Reader::fail(f + ".Node", n, "unknown gas node '" + id + "'");
            if (n["Pressure"]) {
                it->pressure = r.series(n["Pressure"], f + ".Pressure", Dim::pressure);
                it->kind = NodeKind::pressure;
            }
            if (n["Density"]) {
                it->density = r.series(n["Density"], f + ".Density", Dim::density);
                it->kind = NodeKind::pressure;
            }
            if (n["Outflow"]) {
                // m3/s converts with the reference density and the area of an attached pipe.
                double cf = 0.0;
                for (const auto& p : s.pipes) {
                    if (p.from == id || p.to == id) {
                        cf = s.reference_density / p.geometry.area();
                        break;
                    }
                }
                it->extraction = r.series(n["Outflow"], f + ".Outflow", Dim::flux, cf);
            }
        }
    }
    if (const auto buses = doc["buses"]) {
        if (!buses.IsSequence()) Reader::fail("buses", buses, "expected a list");
        r.mark("buses", buses);
        for (std::size_t i = 0; i < buses.size(); ++i) {
            const std::string f = "buses[" + std::to_string(i) + "]";
            const auto n = buses[i];
            Reader::allow_keys(n, f, {"Node", "Type", "G", "B", "P", "Q", "|V|", "va"});
            power::Bus b;
            b.id = Reader::text(Reader::required(n, f, "Node"), f + ".Node");
            b.kind = parse_bus_kind(Reader::required(n, f, "Type"), f + ".Type");
            if (n["G"]) b.G = r.quantity(n["G"], f + ".G", Dim::none);
            if (n["B"]) b.B = r.quantity(n["B"], f + ".B", Dim::none);
            if (n["P"]) b.P = r.quantity(n["P"], f + ".P", Dim::power);
            if (n["Q"]) b.Q = r.quantity(n["Q"], f + ".Q", Dim::power);
            if (n["|V|"]) b.vm = r.quantity(n["|V|"], f + ".|V|", Dim::none);
            if (n["va"]) b.va = r.quantity(n["va"], f + ".va", Dim::none);
            auto need = [&](const char* key) {
                if (!n[key]) Reader::fail(f + "." + key, n, std::string(to_string(b.kind)) + " bus needs " + key);
            };
            if (b.kind == power::BusKind::pq) {
                need("P");
                need("Q");
            } else if (b.kind == power::BusKind::pv) {
                need("P");
                need("|V|");
            } else {
                need("|V|");
                need("va");
            }
            s.grid.buses.push_back(std::move(b));
        }
    }
    if (const auto lines_node = doc["lines"]) {
        if (!lines_node.IsSequence()) Reader::fail("lines", lines_node, "expected a list");
        r.mark("lines", lines_node);
        for (std::size_t i = 0; i < lines_node.size(); ++i) {
            const std::string f = "lines[" + std::to_string(i) + "]";
            const auto n = lines_node[i];
            Reader::allow_keys(n, f, {"Edge", "From", "To", "G", "B"});
            power::TransmissionLine l;
            l.id = Reader::text(Reader::required(n, f, "Edge"), f + ".Edge");
            l.from = Reader::text(Reader::required(n, f, "From"), f + ".From");
            l.to = Reader::text(Reader::required(n, f, "To"), f + ".To");
            if (l.from == l.to) Reader::fail(f, n, "line connects '" + l.from + "' to itself");
            if (n["G"]) l.G = r.quantity(n["G"], f + ".G", Dim::none);
            if (n["B"]) l.B = r.quantity(n["B"], f + ".B", Dim::none);
            s.grid.lines.push_back(std::move(l));
        }
    }
    if (const auto sch = doc["schedules"]) {
        if (!sch.IsSequence()) Reader::fail("schedules", sch, "expected a list");
        for (std::size_t i = 0; i < sch.size(); ++i) {
            const std::string f = "schedules[" + std::to_string(i) + "]";
            const auto n = sch[i];
            Reader::allow_keys(n, f, {"Bus", "P", "Q"});
            r.mark(f, n);
            DemandSchedule d;
            d.bus = Reader::text(Reader::required(n, f, "Bus"), f + ".Bus");
            if (n["P"]) d.P = r.series(n["P"], f + ".P", Dim::power);
            if (n["Q"]) d.Q = r.series(n["Q"], f + ".Q", Dim::power);
            s.schedules.push_back(std::move(d));
        }
    }
    if (const auto c = doc["coupling"]) {
        Reader::allow_keys(c, "coupling", {"gas_node", "bus", "a0", "a1", "a2"});
        r.mark("coupling", c);
        GasPowerLink link;
        link.gas_node = Reader::text(Reader::required(c, "coupling", "gas_node"), "coupling.gas_node");
        link.bus = Reader::text(Reader::required(c, "coupling", "bus"), "coupling.bus");
        link.coefficients.a0 = r.quantity(Reader::required(c, "coupling", "a0"), "coupling.a0", Dim::none);
        link.coefficients.a1 = r.quantity(Reader::required(c, "coupling", "a1"), "coupling.a1", Dim::none);
        link.coefficients.a2 = r.quantity(Reader::required(c, "coupling", "a2"), "coupling.a2", Dim::none);
        link.reference_density = s.reference_density;
        s.link = link;
    }
    if (const auto init = doc["initial"]) {
        r.mark("initial", init);
        if (init.IsScalar()) {
            if (init.Scalar() != "stationary") Reader::fail("initial", init, "expected 'stationary' or a mapping");
            s.initial.kind = InitialSpec::Kind::stationary;
        } else {
            Reader::allow_keys(init, "initial", {"uniform", "pipes"});
            if (init["uniform"] && init["pipes"]) Reader::fail("initial", init, "give either uniform or pipes");
            if (init["uniform"]) {
                s.initial.kind = InitialSpec::Kind::uniform;
                s.initial.state = r.state(init["uniform"], "initial.uniform", {});
            } else if (const auto ps = init["pipes"]) {
                if (!ps.IsSequence()) Reader::fail("initial.pipes", ps, "expected a list");
                s.initial.kind = InitialSpec::Kind::per_pipe;
                for (std::size_t i = 0; i < ps.size(); ++i) {
                    const std::string f = "initial.pipes[" + std::to_string(i) + "]";
                    const std::string id = Reader::text(Reader::required(ps[i], f, "Pipe"), f + ".Pipe");
                    s.initial.pipes.emplace_back(id, r.state(ps[i], f, {"Pipe"}));
                }
            } else {
                Reader::fail("initial", init, "expected uniform or pipes");
            }
        }
    }
    if (const auto num = doc["numerics"]) {
        // yaml-cpp nodes alias on assignment, so collect entries instead of rewrapping
        std::vector<YAML::Node> entries;
        if (num.IsMap()) {
            entries.push_back(num);
        } else if (num.IsSequence()) {
            for (const auto& n : num) entries.push_back(n);
        } else {
            Reader::fail("numerics", num, "expected a mapping or a list");
        }
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const std::string f = "numerics[" + std::to_string(i) + "]";
            const auto& n = entries[i];
            Reader::allow_keys(n, f, {"scheme", "dt", "dx", "end_time"});
            r.mark(f, n);
            NumericsSpec ns;
            try {
                ns.scheme = parse_scheme(Reader::text(Reader::required(n, f, "scheme"), f + ".scheme"));
            } catch (const SchemaError&) {
                throw;
            } catch (const Error& e) {
                Reader::fail(f + ".scheme", n, e.what());
            }
            ns.dt = r.quantity(Reader::required(n, f, "dt"), f + ".dt", Dim::time);
            ns.dx = r.quantity(Reader::required(n, f, "dx"), f + ".dx", Dim::length);
            ns.end_time = r.quantity(Reader::required(n, f, "end_time"), f + ".end_time", Dim::time);
            s.numerics.push_back(ns);
        }
    }
    if (const auto sw = doc["sweep"]) {
        Reader::allow_keys(sw, "sweep", {"law", "extraction"});
        r.mark("sweep", sw);
        if (const auto laws = sw["law"]) {
            if (!laws.IsSequence() || laws.size() == 0) Reader::fail("sweep.law", laws, "expected a non-empty list");
            for (std::size_t i = 0; i < laws.size(); ++i) {
                const std::string f = "sweep.law[" + std::to_string(i) + "]";
                Reader::allow_keys(laws[i], f, {"label", "law"});
                LawVariant v;
                v.label = Reader::text(Reader::required(laws[i], f, "label"), f + ".label");
                v.law = Reader::text(Reader::required(laws[i], f, "law"), f + ".law");
                try {
                    parse_law(v.law);
                } catch (const Error& e) {
                    Reader::fail(f + ".law", laws[i], e.what());
                }
                s.law_sweep.push_back(std::move(v));
            }
        }
        if (const auto ex = sw["extraction"]) {
            Reader::allow_keys(ex, "sweep.extraction", {"node", "values"});
            ExtractionSweep e;
            e.node = Reader::text(Reader::required(ex, "sweep.extraction", "node"), "sweep.extraction.node");
            e.values = r.quantities(Reader::required(ex, "sweep.extraction", "values"), "sweep.extraction.values",
                                    Dim::flux);
            if (e.values.empty()) Reader::fail("sweep.extraction.values", ex, "expected a non-empty list");
            s.extraction_sweep = std::move(e);
        }
    }
    if (const auto out = doc["outputs"]) {
        Reader::allow_keys(out, "outputs", {"directory", "series", "sample_interval", "profiles", "svg"});
        r.mark("outputs", out);
        if (out["directory"]) s.outputs.directory = Reader::text(out["directory"], "outputs.directory");
        if (const auto ser = out["series"]) {
            if (!ser.IsSequence()) Reader::fail("outputs.series", ser, "expected a list");
            for (std::size_t i = 0; i < ser.size(); ++i) {
                s.outputs.series.push_back(Reader::text(ser[i], "outputs.series[" + std::to_string(i) + "]"));
            }
        }
        if (out["sample_interval"]) {
            s.outputs.sample_interval = r.quantity(out["sample_interval"], "outputs.sample_interval", Dim::time);
        }
        if (const auto prof = out["profiles"]) {
            if (!prof.IsSequence()) Reader::fail("outputs.profiles", prof, "expected a list");
            for (std::size_t i = 0; i < prof.size(); ++i) {
                const std::string f = "outputs.profiles[" + std::to_string(i) + "]";
                Reader::allow_keys(prof[i], f, {"id", "pipes", "offset"});
                ProfileSpec p;
                p.id = Reader::text(Reader::required(prof[i], f, "id"), f + ".id");
                const auto ps = Reader::required(prof[i], f, "pipes");
                if (!ps.IsSequence()) Reader::fail(f + ".pipes", ps, "expected a list");
                for (std::size_t k = 0; k < ps.size(); ++k) p.pipes.push_back(Reader::text(ps[k], f + ".pipes"));
                if (prof[i]["offset"]) p.offset = r.quantity(prof[i]["offset"], f + ".offset", Dim::length);
                s.outputs.profiles.push_back(std::move(p));
            }
        }
        if (out["svg"]) s.outputs.svg = Reader::boolean(out["svg"], "outputs.svg");
    }
    validate_impl(s, lines);
    return s;
}

void emit_series(YAML::Emitter& e, const TimeSeries& ts) {
    if (ts.times().size() == 1 && ts.times()[0] == 0.0) {
        e << ts.values()[0];
        return;
    }
    e << YAML::Flow << YAML::BeginMap;
    e << YAML::Key << "times" << YAML::Value << YAML::Flow << ts.times();
    e << YAML::Key << "values" << YAML::Value << YAML::Flow << ts.values();
    e << YAML::EndMap;
}

void emit_state(YAML::Emitter& e, const GasState& u) {
    e << YAML::Key << "rho" << YAML::Value << u.rho;
    e << YAML::Key << "q" << YAML::Value << u.q;
}

}  // namespace

void validate(const Scenario& scenario) { validate_impl(scenario, {}); }

Scenario parse_scenario(const std::string& text) {
    YAML::Node doc;
    try {
        doc = YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw SchemaError("document", e.mark.line >= 0 ? e.mark.line + 1 : -1, e.msg);
    }
    LineMap lines;
    try {
        return parse_document(doc, lines);
    } catch (const YAML::Exception& e) {
        throw SchemaError("document", e.mark.line >= 0 ? e.mark.line + 1 : -1, e.msg);
    }
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCategory::io, "cannot read scenario '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

std::string dump_scenario(const Scenario& s) {
    YAML::Emitter e;
    e.SetDoublePrecision(17);
    e << YAML::BeginMap;
    if (!s.name.empty()) e << YAML::Key << "name" << YAML::Value << s.name;
    if (!s.law.empty()) e << YAML::Key << "law" << YAML::Value << s.law;
    e << YAML::Key << "reference_density" << YAML::Value << s.reference_density;
    e << YAML::Key << "friction" << YAML::Value << YAML::Flow << YAML::BeginMap;
    e << YAML::Key << "enabled" << YAML::Value << s.source.friction;
    e << YAML::Key << "viscosity" << YAML::Value << s.source.viscosity << YAML::EndMap;
    e << YAML::Key << "base_mva" << YAML::Value << s.grid.base_mva;

    if (!s.gas_nodes.empty()) {
        e << YAML::Key << "gas_nodes" << YAML::Value << YAML::BeginSeq;
        for (const auto& n : s.gas_nodes) {
            e << YAML::Flow << YAML::BeginMap << YAML::Key << "Node" << YAML::Value << n.id;
            e << YAML::Key << "Kind" << YAML::Value << std::string(kind_name(n.kind));
            if (n.compressor) {
                e << YAML::Key << "Compressor" << YAML::Value << YAML::BeginMap;
                e << YAML::Key << "Suction" << YAML::Value << n.compressor->suction_pipe;
                e << YAML::Key << "Ratio" << YAML::Value << n.compressor->ratio << YAML::EndMap;
            }
            e << YAML::EndMap;
        }
        e << YAML::EndSeq;
    }
    if (!s.pipes.empty()) {
        e << YAML::Key << "pipes" << YAML::Value << YAML::BeginSeq;
        for (const auto& p : s.pipes) {
            e << YAML::Flow << YAML::BeginMap;
            e << YAML::Key << "Pipe" << YAML::Value << p.id;
            e << YAML::Key << "From" << YAML::Value << p.from;
            e << YAML::Key << "To" << YAML::Value << p.to;
            e << YAML::Key << "Length" << YAML::Value << p.geometry.length;
            e << YAML::Key << "Diameter" << YAML::Value << p.geometry.diameter;
            e << YAML::Key << "Roughness" << YAML::Value << p.geometry.roughness;
            e << YAML::EndMap;
        }
        e << YAML::EndSeq;
    }
    bool any_bc = false;
    for (const auto& n : s.gas_nodes) any_bc = any_bc || !n.pressure.empty() || !n.density.empty() || !n.extraction.empty();
    if (any_bc) {
        e << YAML::Key << "boundary" << YAML::Value << YAML::BeginSeq;
        for (const auto& n : s.gas_nodes) {
            if (n.pressure.empty() && n.density.empty() && n.extraction.empty()) continue;
            e << YAML::BeginMap << YAML::Key << "Node" << YAML::Value << n.id;
            if (!n.pressure.empty()) {
                e << YAML::Key << "Pressure" << YAML::Value;
                emit_series(e, n.pressure);
            }
            if (!n.density.empty()) {
                e << YAML::Key << "Density" << YAML::Value;
                emit_series(e, n.density);
            }
            if (!n.extraction.empty()) {
                e << YAML::Key << "Outflow" << YAML::Value;
                emit_series(e, n.extraction);
            }
            e << YAML::EndMap;
        }
        e << YAML::EndSeq;
    }
    if (!s.grid.buses.empty()) {
        e << YAML::Key << "buses" << YAML::Value << YAML::BeginSeq;
        for (const auto& b : s.grid.buses) {
            e << YAML::Flow << YAML::BeginMap;
            e << YAML::Key << "Node" << YAML::Value << b.id;
            e << YAML::Key << "Type" << YAML::Value << std::string(power::to_string(b.kind));
            e << YAML::Key << "G" << YAML::Value << b.G << YAML::Key << "B" << YAML::Value << b.B;
            e << YAML::Key << "P" << YAML::Value << b.P << YAML::Key << "Q" << YAML::Value << b.Q;
            e << YAML::Key << "|V|" << YAML::Value << b.vm << YAML::Key << "va" << YAML::Value << b.va;
            e << YAML::EndMap;
        }
        e << YAML::EndSeq;
    }
    if (!s.grid.lines.empty()) {
        e << YAML::Key << "lines" << YAML::Value << YAML::BeginSeq;
        for (const auto& l : s.grid.lines) {
            e << YAML::Flow << YAML::BeginMap;
            e << YAML::Key << "Edge" << YAML::Value << l.id;
            e << YAML::Key << "From" << YAML::Value << l.from << YAML::Key << "To" << YAML::Value << l.to;
            e << YAML::Key << "G" << YAML::Value << l.G << YAML::Key << "B" << YAML::Value << l.B;
            e << YAML::EndMap;
        }
        e << YAML::EndSeq;
    }
    if (!s.schedules.empty()) {
        e << YAML::Key << "schedules" << YAML::Value << YAML::BeginSeq;
        for (const auto& d : s.schedules) {
            e << YAML::BeginMap << YAML::Key << "Bus" << YAML::Value << d.bus;
            if (!d.P.empty()) {
                e << YAML::Key << "P" << YAML::Value;
                emit_series(e, d.P);
            }
            if (!d.Q.empty()) {
                e << YAML::Key << "Q" << YAML::Value;
                emit_series(e, d.Q);
            }
            e << YAML::EndMap;
        }
        e << YAML::EndSeq;
    }
    if (s.link) {
        e << YAML::Key << "coupling" << YAML::Value << YAML::BeginMap;
        e << YAML::Key << "gas_node" << YAML::Value << s.link->gas_node;
        e << YAML::Key << "bus" << YAML::Value << s.link->bus;
        e << YAML::Key << "a0" << YAML::Value << s.link->coefficients.a0;
        e << YAML::Key << "a1" << YAML::Value << s.link->coefficients.a1;
        e << YAML::Key << "a2" << YAML::Value << s.link->coefficients.a2;
        e << YAML::EndMap;
    }
    e << YAML::Key << "initial" << YAML::Value;
    switch (s.initial.kind) {
        case InitialSpec::Kind::stationary: e << "stationary"; break;
        case InitialSpec::Kind::uniform:
            e << YAML::BeginMap << YAML::Key << "uniform" << YAML::Value << YAML::Flow << YAML::BeginMap;
            emit_state(e, s.initial.state);
            e << YAML::EndMap << YAML::EndMap;
            break;
        case InitialSpec::Kind::per_pipe:
            e << YAML::BeginMap << YAML::Key << "pipes" << YAML::Value << YAML::BeginSeq;
            for (const auto& [id, u] : s.initial.pipes) {
                e << YAML::Flow << YAML::BeginMap << YAML::Key << "Pipe" << YAML::Value << id;
                emit_state(e, u);
                e << YAML::EndMap;
            }
            e << YAML::EndSeq << YAML::EndMap;
            break;
    }
    if (!s.numerics.empty()) {
        e << YAML::Key << "numerics" << YAML::Value << YAML::BeginSeq;
        for (const auto& n : s.numerics) {
            e << YAML::Flow << YAML::BeginMap;
            e << YAML::Key << "scheme" << YAML::Value << std::string(to_string(n.scheme));
            e << YAML::Key << "dt" << YAML::Value << n.dt << YAML::Key << "dx" << YAML::Value << n.dx;
            e << YAML::Key << "end_time" << YAML::Value << n.end_time << YAML::EndMap;
        }
        e << YAML::EndSeq;
    }
    if (!s.law_sweep.empty() || s.extraction_sweep) {
        e << YAML::Key << "sweep" << YAML::Value << YAML::BeginMap;
        if (!s.law_sweep.empty()) {
            e << YAML::Key << "law" << YAML::Value << YAML::BeginSeq;
            for (const auto& v : s.law_sweep) {
                e << YAML::Flow << YAML::BeginMap << YAML::Key << "label" << YAML::Value << v.label;
                e << YAML::Key << "law" << YAML::Value << v.law << YAML::EndMap;
            }
            e << YAML::EndSeq;
        }
        if (s.extraction_sweep) {
            e << YAML::Key << "extraction" << YAML::Value << YAML::BeginMap;
            e << YAML::Key << "node" << YAML::Value << s.extraction_sweep->node;
            e << YAML::Key << "values" << YAML::Value << YAML::Flow << s.extraction_sweep->values << YAML::EndMap;
        }
        e << YAML::EndMap;
    }
    e << YAML::Key << "outputs" << YAML::Value << YAML::BeginMap;
    e << YAML::Key << "directory" << YAML::Value << s.outputs.directory;
    e << YAML::Key << "series" << YAML::Value << YAML::Flow << s.outputs.series;
    e << YAML::Key << "sample_interval" << YAML::Value << s.outputs.sample_interval;
    if (!s.outputs.profiles.empty()) {
        e << YAML::Key << "profiles" << YAML::Value << YAML::BeginSeq;
        for (const auto& p : s.outputs.profiles) {
            e << YAML::Flow << YAML::BeginMap << YAML::Key << "id" << YAML::Value << p.id;
            e << YAML::Key << "pipes" << YAML::Value << YAML::Flow << p.pipes;
            e << YAML::Key << "offset" << YAML::Value << p.offset << YAML::EndMap;
        }
        e << YAML::EndSeq;
    }
    e << YAML::Key << "svg" << YAML::Value << s.outputs.svg;
    e << YAML::EndMap;
    e << YAML::EndMap;
    if (!e.good()) throw Error(ErrorCategory::io, "scenario serialization failed: " + e.GetLastError());
    return std::string(e.c_str()) + "\n";
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
    const std::string text = dump_scenario(scenario);
    std::ofstream out(path);
    if (!out || !(out << text)) throw Error(ErrorCategory::io, "cannot write scenario '" + path.string() + "'");
}

}  // namespace gaspower
