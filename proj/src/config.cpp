#include "dreg/config.hpp"

#include <array>
#include <fstream>
#include <set>
#include <sstream>

#include "dreg/scenarios.hpp"

namespace dreg {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error("config", msg); }

void check_keys(const json& obj, const std::string& section, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) fail(section + ": expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, _] : obj.items())
        if (!ok.count(key)) fail(section + ": unknown key '" + key + "'");
}

const json& require(const json& obj, const std::string& section, const char* key) {
    if (!obj.contains(key)) fail(section + ": missing '" + key + "'");
    return obj.at(key);
}

double number(const json& j, const std::string& what) {
    if (!j.is_number()) fail(what + ": expected a number");
    return j.get<double>();
}

double number_or(const json& obj, const char* key, double fallback, const std::string& section) {
    return obj.contains(key) ? number(obj.at(key), section + "." + key) : fallback;
}

Vec vector_of(const json& j, const std::string& what) {
    if (j.is_number()) return (Vec(1) << j.get<double>()).finished();
    if (!j.is_array()) fail(what + ": expected an array of numbers");
    Vec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(i) = number(j[i], what);
    return v;
}

Mat matrix_of(const json& j, const std::string& what) {
    if (j.is_number()) return (Mat(1, 1) << j.get<double>()).finished();
    if (!j.is_array() || j.empty()) fail(what + ": expected a nonempty matrix");
    const std::size_t rows = j.size();
    const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
    if (cols == 0) fail(what + ": expected an array of rows");
    Mat m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (!j[r].is_array() || j[r].size() != cols) fail(what + ": rows must have equal length");
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = number(j[r][c], what);
    }
    return m;
}

json to_json(const Vec& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

json to_json(const Mat& m) {
    json a = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) a.push_back(to_json(Vec(m.row(r).transpose())));
    return a;
}

constexpr std::array<const char*, Mu::size> kMuNames{"mu_v", "mu_x", "mu_1", "mu_2", "mu_3"};

int mu_index(const std::string& name) {
    for (std::size_t k = 0; k < kMuNames.size(); ++k)
        if (name == kMuNames[k]) return static_cast<int>(k);
    fail("unknown mu component '" + name + "'");
}

// --- normalization --------------------------------------------------------

json resolve_signal(const json& j, const std::string& where) {
    check_keys(j, where, {"type", "value", "amp", "freq", "phase", "A", "T", "terms"});
    const std::string type = require(j, where, "type").get<std::string>();
    if (type == "zero") {
        check_keys(j, where, {"type"});
        return {{"type", "zero"}};
    }
    if (type == "constant") {
        check_keys(j, where, {"type", "value"});
        return {{"type", "constant"}, {"value", number(require(j, where, "value"), where + ".value")}};
    }
    if (type == "sinusoid") {
        check_keys(j, where, {"type", "amp", "freq", "phase"});
        return {{"type", "sinusoid"},
                {"amp", number(require(j, where, "amp"), where + ".amp")},
                {"freq", number(require(j, where, "freq"), where + ".freq")},
                {"phase", number_or(j, "phase", 0.0, where)}};
    }
    if (type == "triangle") {
        check_keys(j, where, {"type", "A", "T"});
        const double A = number(require(j, where, "A"), where + ".A");
        const double T = number(require(j, where, "T"), where + ".T");
        if (!(A >= 0.0) || !(T > 0.0)) fail(where + ": triangle requires A >= 0 and T > 0");
        return {{"type", "triangle"}, {"A", A}, {"T", T}};
    }
    if (type == "sum") {
        check_keys(j, where, {"type", "terms"});
        json terms = json::array();
        for (const auto& t : require(j, where, "terms")) terms.push_back(resolve_signal(t, where + ".terms"));
        return {{"type", "sum"}, {"terms", terms}};
    }
    fail(where + ": unknown signal type '" + type + "'");
}

json resolve_leader(const json& j) {
    const std::string sec = "leader";
    check_keys(j, sec, {"type", "eps0", "A", "B", "v0", "output", "input"});
    const std::string type = j.value("type", "grasman");
    json out{{"type", type}};
    int dim = 0;
    if (type == "grasman") {
        check_keys(j, sec, {"type", "eps0", "v0", "output", "input"});
        out["eps0"] = number_or(j, "eps0", 0.1, sec);
        dim = 2;
    } else if (type == "linear") {
        const Mat A = matrix_of(require(j, sec, "A"), "leader.A");
        if (A.rows() != A.cols()) fail("leader: A must be square");
        dim = static_cast<int>(A.rows());
        const Vec B = j.contains("B") ? vector_of(j.at("B"), "leader.B") : Vec(Vec::Unit(dim, 0));
        if (B.size() != dim) fail("leader: B dimension mismatch");
        out["A"] = to_json(A);
        out["B"] = to_json(B);
    } else {
        fail("leader: unknown type '" + type + "'");
    }
    const Vec v0 = j.contains("v0") ? vector_of(j.at("v0"), "leader.v0") : Vec(Vec::Zero(dim));
    if (v0.size() != dim) fail("leader: v0 dimension mismatch");
    out["v0"] = to_json(v0);

    const json output = j.value("output", json{{"type", "scaled_first"}});
    check_keys(output, "leader.output", {"type", "row"});
    const std::string otype = require(output, "leader.output", "type").get<std::string>();
    if (otype == "scaled_first") {
        check_keys(output, "leader.output", {"type"});
        out["output"] = {{"type", "scaled_first"}};
    } else if (otype == "linear") {
        const Vec row = vector_of(require(output, "leader.output", "row"), "leader.output.row");
        if (row.size() != dim) fail("leader.output: row dimension mismatch");
        out["output"] = {{"type", "linear"}, {"row", to_json(row)}};
    } else {
        fail("leader.output: unknown type '" + otype + "'");
    }
    out["input"] = resolve_signal(j.value("input", json{{"type", "zero"}}), "leader.input");
    return out;
}

json resolve_follower(const json& j, int i) {
    const std::string sec = "followers[" + std::to_string(i) + "]";
    check_keys(j, sec, {"type", "c1", "c2", "b", "z0", "y0"});
    const std::string type = j.value("type", "fitzhugh_nagumo");
    if (type != "fitzhugh_nagumo") fail(sec + ": unknown type '" + type + "'");
    const double b = number_or(j, "b", 1.0, sec);
    if (!(b > 0.0)) fail(sec + ": b must be positive");
    const Vec z0 = j.contains("z0") ? vector_of(j.at("z0"), sec + ".z0") : Vec(Vec::Zero(2));
    if (z0.size() != 2) fail(sec + ": z0 must have 2 entries");
    return {{"type", type},
            {"c1", number_or(j, "c1", 1.0, sec)},
            {"c2", number_or(j, "c2", 1.0, sec)},
            {"b", b},
            {"z0", to_json(z0)},
            {"y0", number_or(j, "y0", 0.0, sec)}};
}

json resolve_disturbance(const json& j, int i) {
    const std::string sec = "disturbances[" + std::to_string(i) + "]";
    check_keys(j, sec, {"S", "D", "omega0"});
    const Mat S = matrix_of(require(j, sec, "S"), sec + ".S");
    if (S.rows() != S.cols()) fail(sec + ": S must be square");
    const auto n = S.rows();
    json D;
    const json& Dj = require(j, sec, "D");
    if (Dj.is_object()) {
        check_keys(Dj, sec + ".D", {"constant", "mu"});
        const Vec c = vector_of(require(Dj, sec + ".D", "constant"), sec + ".D.constant");
        if (c.size() != n) fail(sec + ": D dimension mismatch");
        json terms = json::object();
        if (Dj.contains("mu")) {
            if (!Dj.at("mu").is_object()) fail(sec + ".D.mu: expected an object");
            for (const auto& [name, row] : Dj.at("mu").items()) {
                mu_index(name);
                const Vec r = vector_of(row, sec + ".D.mu." + name);
                if (r.size() != n) fail(sec + ": D mu-term dimension mismatch");
                terms[name] = to_json(r);
            }
        }
        D = {{"constant", to_json(c)}, {"mu", terms}};
    } else {
        const Vec c = vector_of(Dj, sec + ".D");
        if (c.size() != n) fail(sec + ": D dimension mismatch");
        D = {{"constant", to_json(c)}, {"mu", json::object()}};
    }
    const Vec w0 = j.contains("omega0") ? vector_of(j.at("omega0"), sec + ".omega0") : Vec(Vec::Zero(n));
    if (w0.size() != n) fail(sec + ": omega0 dimension mismatch");
    return {{"S", to_json(S)}, {"D", D}, {"omega0", to_json(w0)}};
}

json resolve_controller(const json& j, const Overrides& ov) {
    const std::string sec = "controller";
    check_keys(j, sec, {"type", "lambda", "gamma", "rho", "switch", "poles"});
    const std::string type = ov.controller.value_or(j.value("type", "global"));
    if (type != "global" && type != "semiglobal") fail("controller: type must be global or semiglobal");
    const double lambda = number_or(j, "lambda", 1.0, sec);
    const double gamma = number_or(j, "gamma", 5.0, sec);
    if (type == "global" && !(lambda > 0.0)) fail("controller: lambda must be positive");
    if (type == "semiglobal" && !(gamma > 0.0)) fail("controller: gamma must be positive");

    const Vec rho = j.contains("rho") ? vector_of(j.at("rho"), "controller.rho")
                                      : (Vec(4) << 1, 0, 0, 1).finished();
    RhoSpec rs{std::vector<double>(rho.data(), rho.data() + rho.size())};
    rs.validate();

    json sw = j.value("switch", json{{"type", "sat"}, {"eps", 1e-3}});
    check_keys(sw, "controller.switch", {"type", "eps"});
    std::string stype = ov.switch_kind.value_or(sw.value("type", "sat"));
    double eps = ov.eps.value_or(number_or(sw, "eps", 1e-3, "controller.switch"));
    json sw_out;
    if (stype == "sat") {
        if (!(eps > 0.0)) fail("controller: switch eps must be positive");
        sw_out = {{"type", "sat"}, {"eps", eps}};
    } else if (stype == "sign") {
        sw_out = {{"type", "sign"}};
    } else {
        fail("controller.switch: type must be sign or sat");
    }

    json poles = json::array();
    if (j.contains("poles") && !j.at("poles").is_null()) {
        const json& p = j.at("poles");
        if (!p.is_array()) fail("controller.poles: expected an array");
        for (std::size_t a = 0; a < p.size(); ++a) {
            json agent = json::array();
            if (!p[a].is_array()) fail("controller.poles: expected one pole list per agent");
            for (const auto& pole : p[a]) {
                if (pole.is_number()) {
                    agent.push_back(json::array({pole.get<double>(), 0.0}));
                } else if (pole.is_array() && pole.size() == 2) {
                    agent.push_back(json::array({number(pole[0], "controller.poles"),
                                                 number(pole[1], "controller.poles")}));
                } else {
                    fail("controller.poles: pole must be a number or [re, im]");
                }
            }
            poles.push_back(agent);
        }
    }
    return {{"type", type}, {"lambda", lambda}, {"gamma", gamma}, {"rho", to_json(rho)},
            {"switch", sw_out}, {"poles", poles}};
}

json resolve_regulator(const json& j) {
    if (j.is_null()) return nullptr;
    const std::string sec = "regulator";
    check_keys(j, sec, {"candidate", "samples", "seed", "fd_step", "tolerance", "v_range", "mu_v_range"});
    const std::string cand = j.value("candidate", "fhn_builtin");
    if (cand != "fhn_builtin" && cand != "zero") fail("regulator: candidate must be fhn_builtin or zero");
    const int samples = j.value("samples", 100);
    if (samples < 1) fail("regulator: samples must be >= 1");
    const double fd = number_or(j, "fd_step", 1e-5, sec);
    if (!(fd > 0.0)) fail("regulator: fd_step must be positive");
    auto range = [&](const char* key, std::pair<double, double> dflt) {
        if (!j.contains(key)) return json::array({dflt.first, dflt.second});
        const Vec r = vector_of(j.at(key), std::string("regulator.") + key);
        if (r.size() != 2 || r(0) > r(1)) fail(std::string("regulator.") + key + ": expected [lo, hi]");
        return json::array({r(0), r(1)});
    };
    return {{"candidate", cand},
            {"samples", samples},
            {"seed", j.value("seed", std::uint64_t{7})},
            {"fd_step", fd},
            {"tolerance", number_or(j, "tolerance", 1e-6, sec)},
            {"v_range", range("v_range", {-2.0, 2.0})},
            {"mu_v_range", range("mu_v_range", {-0.5, 0.5})}};
}

json resolve_mu(const json& j, const Overrides& ov) {
    const std::string sec = "mu";
    check_keys(j, sec, {"value", "box", "samples", "seed"});
    const Vec value = j.contains("value") ? vector_of(j.at("value"), "mu.value") : Vec(Vec::Zero(5));
    if (value.size() != 5) fail("mu: value must have 5 entries (mu_v, mu_x, mu_1, mu_2, mu_3)");
    json box = json::array();
    if (j.contains("box")) {
        const Mat b = matrix_of(j.at("box"), "mu.box");
        if (b.rows() != 5 || b.cols() != 2) fail("mu: box must be 5 rows of [lo, hi]");
        for (int k = 0; k < 5; ++k) {
            if (b(k, 0) > b(k, 1)) fail("mu: box interval with lo > hi");
            box.push_back(json::array({b(k, 0), b(k, 1)}));
        }
    } else {
        for (const auto& [lo, hi] : MuBox{}.bounds) box.push_back(json::array({lo, hi}));
    }
    const int samples = ov.count.value_or(j.value("samples", 20));
    if (samples < 1) fail("mu: samples must be >= 1");
    return {{"value", to_json(value)}, {"box", box}, {"samples", samples},
            {"seed", ov.seed.value_or(j.value("seed", std::uint64_t{42}))}};
}

json resolve_integrator(const json& j, const Overrides& ov) {
    const std::string sec = "integrator";
    check_keys(j, sec, {"dt", "t_end", "method"});
    const double dt = ov.dt.value_or(number_or(j, "dt", 1e-3, sec));
    const double t_end = ov.t_end.value_or(number_or(j, "t_end", 60.0, sec));
    const std::string method = j.value("method", "rk4");
    if (!(dt > 0.0)) fail("integrator: dt must be positive");
    if (!(t_end > 0.0)) fail("integrator: t_end must be positive");
    if (dt > t_end) fail("integrator: dt exceeds t_end");
    if (method != "rk4" && method != "euler") fail("integrator: method must be rk4 or euler");
    return {{"dt", dt}, {"t_end", t_end}, {"method", method}};
}

json resolve_output(const json& j, const Overrides& ov) {
    const std::string sec = "output";
    check_keys(j, sec, {"tail_fraction", "threshold", "stride", "svg"});
    const double tail = number_or(j, "tail_fraction", 1.0 / 6.0, sec);
    if (!(tail > 0.0 && tail < 1.0)) fail("output: tail_fraction must lie in (0, 1)");
    const int stride = j.value("stride", 1);
    if (stride < 1) fail("output: stride must be >= 1");
    return {{"tail_fraction", tail},
            {"threshold", ov.threshold.value_or(number_or(j, "threshold", 0.05, sec))},
            {"stride", stride},
            {"svg", j.value("svg", true)}};
}

json resolve(const json& doc, const Overrides& ov) {
    check_keys(doc, "config", {"version", "name", "topology", "leader", "followers", "disturbances",
                               "controller", "regulator", "mu", "integrator", "output"});
    const int version = doc.value("version", kConfigVersion);
    if (version != kConfigVersion) fail("config: unsupported version " + std::to_string(version));

    json out;
    out["version"] = version;
    out["name"] = doc.value("name", "scenario");

    const json& topo = require(doc, "config", "topology");
    check_keys(topo, "topology", {"adjacency"});
    const Mat adj = matrix_of(require(topo, "topology", "adjacency"), "topology.adjacency");
    Topology{adj};  // validates
    out["topology"] = {{"adjacency", to_json(adj)}};
    const int n = static_cast<int>(adj.rows()) - 1;

    out["leader"] = resolve_leader(require(doc, "config", "leader"));

    const json& fol = require(doc, "config", "followers");
    const json& dis = require(doc, "config", "disturbances");
    if (!fol.is_array() || static_cast<int>(fol.size()) != n)
        fail("followers: expected " + std::to_string(n) + " entries (one per follower node)");
    if (!dis.is_array() || static_cast<int>(dis.size()) != n)
        fail("disturbances: expected " + std::to_string(n) + " entries (one per follower node)");
    out["followers"] = json::array();
    out["disturbances"] = json::array();
    for (int i = 0; i < n; ++i) {
        out["followers"].push_back(resolve_follower(fol[i], i));
        out["disturbances"].push_back(resolve_disturbance(dis[i], i));
    }

    out["controller"] = resolve_controller(doc.value("controller", json::object()), ov);
    if (!out["controller"]["poles"].empty() && static_cast<int>(out["controller"]["poles"].size()) != n)
        fail("controller.poles: expected one pole list per agent");
    out["regulator"] = resolve_regulator(doc.value("regulator", json(nullptr)));
    out["mu"] = resolve_mu(doc.value("mu", json::object()), ov);
    out["integrator"] = resolve_integrator(doc.value("integrator", json::object()), ov);
    out["output"] = resolve_output(doc.value("output", json::object()), ov);
    return out;
}

// --- building -------------------------------------------------------------

SignalSpec build_signal(const json& j) {
    const std::string type = j.at("type");
    if (type == "constant") return SignalSpec::constant(j.at("value"));
    if (type == "sinusoid") return SignalSpec::sinusoid(j.at("amp"), j.at("freq"), j.at("phase"));
    if (type == "triangle") return SignalSpec::triangle(j.at("A"), j.at("T"));
    if (type == "sum") {
        std::vector<SignalSpec> terms;
        for (const auto& t : j.at("terms")) terms.push_back(build_signal(t));
        return SignalSpec::sum(std::move(terms));
    }
    return SignalSpec::zero();
}

LoadedConfig build(json resolved) {
    LoadedConfig cfg;
    Scenario& s = cfg.scenario;
    s.topology = Topology(matrix_of(resolved["topology"]["adjacency"], "topology"));

    const json& L = resolved["leader"];
    if (L["type"] == "grasman") {
        s.leader.dynamics = GrasmanLeader{L["eps0"].get<double>()};
    } else {
        s.leader.dynamics = LinearLeader{matrix_of(L["A"], "leader.A"), vector_of(L["B"], "leader.B")};
    }
    if (L["output"]["type"] == "linear")
        s.leader.output = LinearOutput{RowVec(vector_of(L["output"]["row"], "row").transpose())};
    else
        s.leader.output = ScaledFirstOutput{};
    s.leader.input = build_signal(L["input"]);
    s.v0 = vector_of(L["v0"], "leader.v0");

    const Vec mu = vector_of(resolved["mu"]["value"], "mu.value");
    for (std::size_t k = 0; k < Mu::size; ++k) s.mu[k] = mu(static_cast<Eigen::Index>(k));

    const json& C = resolved["controller"];
    ControllerTuning tuning;
    tuning.kind = C["type"] == "global" ? ControllerKind::global : ControllerKind::semiglobal;
    tuning.lambda = C["lambda"];
    tuning.gamma = C["gamma"];
    tuning.rho.even_coeffs = C["rho"].get<std::vector<double>>();
    tuning.switching = C["switch"]["type"] == "sign" ? SwitchSpec::sign()
                                                     : SwitchSpec::sat(C["switch"]["eps"].get<double>());

    const int n = s.topology.followers();
    for (int i = 0; i < n; ++i) {
        const json& F = resolved["followers"][i];
        const json& D = resolved["disturbances"][i];
        AgentSpec a;
        a.follower.dynamics = FitzHughNagumo{F["c1"], F["c2"], F["b"]};
        a.z0 = vector_of(F["z0"], "z0");
        a.y0 = F["y0"];
        a.disturbance.S = matrix_of(D["S"], "S");
        a.disturbance.D.constant = vector_of(D["D"]["constant"], "D").transpose();
        for (const auto& [name, row] : D["D"]["mu"].items())
            a.disturbance.D.terms.emplace_back(mu_index(name), vector_of(row, "D").transpose());
        a.disturbance.omega0 = vector_of(D["omega0"], "omega0");

        std::vector<std::complex<double>> poles;
        if (!C["poles"].empty())
            for (const auto& p : C["poles"][i]) poles.emplace_back(p[0].get<double>(), p[1].get<double>());
        InternalModel im;
        try {
            im = synthesize(a.disturbance.materialize(s.mu), poles);
        } catch (const Error& e) {
            fail("agent " + std::to_string(i + 1) + ": internal model synthesis failed: " + e.what());
        }
        a.controller = make_controller(tuning, im);
        s.agents.push_back(std::move(a));
    }

    const json& I = resolved["integrator"];
    s.integrator.dt = I["dt"];
    s.integrator.t_end = I["t_end"];
    s.integrator.method = I["method"] == "euler" ? Method::euler : Method::rk4;
    const json& O = resolved["output"];
    s.integrator.stride = O["stride"];

    cfg.settings.name = resolved["name"];
    cfg.settings.tail_fraction = O["tail_fraction"];
    cfg.settings.threshold = O["threshold"];
    cfg.settings.svg = O["svg"];
    for (std::size_t k = 0; k < Mu::size; ++k)
        cfg.settings.box.bounds[k] = {resolved["mu"]["box"][k][0].get<double>(),
                                      resolved["mu"]["box"][k][1].get<double>()};
    cfg.settings.count = resolved["mu"]["samples"];
    cfg.settings.seed = resolved["mu"]["seed"];

    const json& R = resolved["regulator"];
    if (!R.is_null()) {
        RegulatorCheckSettings rc;
        rc.samples = R["samples"];
        rc.seed = R["seed"];
        rc.fd_step = R["fd_step"];
        rc.tolerance = R["tolerance"];
        rc.v_range = {R["v_range"][0].get<double>(), R["v_range"][1].get<double>()};
        rc.mu_v_range = {R["mu_v_range"][0].get<double>(), R["mu_v_range"][1].get<double>()};
        cfg.settings.regulator_check = rc;
        if (R["candidate"] == "zero") {
            s.regulator = RegulatorSolution::custom([](const Vec&, const Mu&) { return Vec(Vec::Zero(2)); });
        } else {
            s.regulator = RegulatorSolution::fhn_builtin();
        }
    }

    try {
        cfg.warnings = validate(s);
    } catch (const Error& e) {
        fail(e.what());
    }
    cfg.resolved = std::move(resolved);
    return cfg;
}

}  // namespace

LoadedConfig load_config(const json& document, const Overrides& overrides) {
    try {
        return build(resolve(document, overrides));
    } catch (const Error& e) {
        if (e.tag() == "config") throw;
        fail(e.what());
    } catch (const json::exception& e) {
        fail(std::string("config: malformed value: ") + e.what());
    }
}

LoadedConfig load_config_file(const std::string& path, const Overrides& overrides) {
    std::ifstream in(path);
    if (!in) fail("config: cannot open '" + path + "'");
    json doc;
    try {
        doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        fail(std::string("config: parse error: ") + e.what());
    }
    return load_config(doc, overrides);
}

std::string emit_config(const LoadedConfig& config) { return config.resolved.dump(2) + "\n"; }

}  // namespace dreg
