#include "aggseek/scenario.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "aggseek/errors.hpp"

namespace aggseek {
namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object()) throw ScenarioError(where, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) throw ScenarioError(where.empty() ? key : where + "." + key, "missing");
    return *it;
}

std::string join(const std::string& where, const char* key) { return where.empty() ? key : where + "." + key; }

double read_real(const json& v, const std::string& field) {
    if (!v.is_number()) throw ScenarioError(field, "expected a number");
    return v.get<double>();
}

Vector read_vector(const json& v, const std::string& field, Eigen::Index expected) {
    if (!v.is_array()) throw ScenarioError(field, "expected an array of numbers");
    if (static_cast<Eigen::Index>(v.size()) != expected) {
        throw ScenarioError(field, "dimension mismatch: expected " + std::to_string(expected) + " entries, got " +
                                       std::to_string(v.size()));
    }
    Vector out(expected);
    for (Eigen::Index j = 0; j < expected; ++j) out[j] = read_real(v[j], field + "[" + std::to_string(j) + "]");
    return out;
}

Matrix read_matrix(const json& v, Eigen::Index n) {
    if (!v.is_array() || v.empty()) throw ScenarioError("C", "expected a nonempty array of rows");
    if (static_cast<Eigen::Index>(v.size()) != n) {
        throw ScenarioError("C", "dimension mismatch: expected " + std::to_string(n) + " rows, got " +
                                     std::to_string(v.size()));
    }
    Matrix C(n, n);
    for (Eigen::Index r = 0; r < n; ++r) C.row(r) = read_vector(v[r], "C[" + std::to_string(r) + "]", n).transpose();
    return C;
}

ConvexSet read_set(const json& v, const std::string& field, Eigen::Index n) {
    if (!v.is_object()) throw ScenarioError(field, "expected {\"box\": ...} or {\"ball\": ...}");
    try {
        if (const auto it = v.find("box"); it != v.end()) {
            const std::string where = field + ".box";
            Vector lo = read_vector(require(*it, "lo", where), where + ".lo", n);
            Vector hi = read_vector(require(*it, "hi", where), where + ".hi", n);
            if ((lo.array() > hi.array()).any()) throw ScenarioError(where, "empty box (lo > hi)");
            return ConvexSet::box(std::move(lo), std::move(hi));
        }
        if (const auto it = v.find("ball"); it != v.end()) {
            const std::string where = field + ".ball";
            Vector center = read_vector(require(*it, "center", where), where + ".center", n);
            const double radius = read_real(require(*it, "radius", where), where + ".radius");
            if (!(radius > 0.0)) throw ScenarioError(where + ".radius", "must be positive");
            return ConvexSet::ball(std::move(center), radius);
        }
    } catch (const std::invalid_argument& e) {
        throw ScenarioError(field, e.what());
    }
    throw ScenarioError(field, "expected {\"box\": ...} or {\"ball\": ...}");
}

double read_ell(const json& v, const std::string& field) {
    const double ell = read_real(v, field);
    if (!(ell > 0.0)) throw ScenarioError(field, "must be positive");
    return ell;
}

Vector read_linear(const json& obj, const std::string& where, Eigen::Index n) {
    const auto it = obj.find("linear");
    if (it == obj.end()) return Vector::Zero(n);
    return read_vector(*it, join(where, "linear"), n);
}

std::vector<Agent> read_list(const json& list, Eigen::Index n) {
    if (!list.is_array() || list.empty()) throw ScenarioError("agents.list", "expected a nonempty array");
    std::vector<Agent> agents;
    agents.reserve(list.size());
    for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string where = "agents.list[" + std::to_string(i) + "]";
        const json& a = list[i];
        QuadraticCost cost{read_ell(require(a, "ell", where), where + ".ell"),
                           read_vector(require(a, "xstar", where), where + ".xstar", n), read_linear(a, where, n)};
        agents.push_back(Agent{std::move(cost), read_set(require(a, "set", where), where + ".set", n)});
    }
    return agents;
}

std::vector<Agent> read_generator(const json& gen, Eigen::Index n, std::uint64_t& seed_out) {
    const std::string where = "agents.generator";
    const json& count_v = require(gen, "count", where);
    if (!count_v.is_number_integer() || count_v.get<long long>() <= 0) {
        throw ScenarioError(where + ".count", "expected a positive integer");
    }
    const auto count = count_v.get<std::size_t>();
    const double ell = read_ell(require(gen, "ell", where), where + ".ell");
    const Vector linear = read_linear(gen, where, n);
    const ConvexSet set = read_set(require(gen, "set", where), where + ".set", n);

    const json& xs = require(gen, "xstar", where);
    const std::string uwhere = where + ".xstar.uniform";
    const json& uni = require(xs, "uniform", where + ".xstar");
    const double lo = read_real(require(uni, "lo", uwhere), uwhere + ".lo");
    const double hi = read_real(require(uni, "hi", uwhere), uwhere + ".hi");
    if (!(lo <= hi)) throw ScenarioError(uwhere, "lo must not exceed hi");
    const json& seed_v = require(uni, "seed", uwhere);
    if (!seed_v.is_number_unsigned() && !(seed_v.is_number_integer() && seed_v.get<long long>() >= 0)) {
        throw ScenarioError(uwhere + ".seed", "expected an unsigned 64-bit integer");
    }
    seed_out = seed_v.get<std::uint64_t>();

    SplitMix64 rng(seed_out);
    std::vector<Agent> agents;
    agents.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Vector xstar(n);
        for (Eigen::Index j = 0; j < n; ++j) xstar[j] = rng.uniform(lo, hi);
        agents.push_back(Agent{QuadraticCost{ell, std::move(xstar), linear}, set});
    }
    return agents;
}

SystemState read_initial(const json& doc, const GameSpec& game) {
    SystemState state = default_initial_state(game);
    const auto it = doc.find("initial");
    if (it == doc.end()) return state;
    const json& init = *it;
    const Eigen::Index n = game.dim();
    if (!init.is_object()) throw ScenarioError("initial", "expected an object");
    if (const auto xs = init.find("x"); xs != init.end()) {
        if (xs->is_string()) {
            const auto mode = xs->get<std::string>();
            if (mode == "center") state.x = stacked_centers(game);
            else if (mode != "xstar") throw ScenarioError("initial.x", "expected \"xstar\", \"center\" or rows");
        } else {
            if (!xs->is_array() || xs->size() != game.agent_count()) {
                throw ScenarioError("initial.x", "expected one row per agent");
            }
            for (std::size_t i = 0; i < game.agent_count(); ++i) {
                agent_block(state.x, i, n) = read_vector((*xs)[i], "initial.x[" + std::to_string(i) + "]", n);
            }
            state.x = project_stacked(game, state.x);
        }
    }
    if (const auto s = init.find("sigma"); s != init.end()) state.sigma = read_vector(*s, "initial.sigma", n);
    return state;
}

}  // namespace

SystemState default_initial_state(const GameSpec& game) {
    const Eigen::Index n = game.dim();
    Vector x(n * static_cast<Eigen::Index>(game.agent_count()));
    for (std::size_t i = 0; i < game.agent_count(); ++i) {
        agent_block(x, i, n) = project(game.agent(i).set, game.agent(i).cost.xstar);
    }
    return SystemState{std::move(x), Vector::Zero(n)};
}

Scenario load_scenario(std::string_view document) {
    json doc;
    try {
        doc = json::parse(document.begin(), document.end());
    } catch (const json::parse_error& e) {
        throw ScenarioError("document", std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ScenarioError("document", "expected a JSON object");

    const json& c_v = require(doc, "C", "");
    if (!c_v.is_array() || c_v.empty()) throw ScenarioError("C", "expected a nonempty array of rows");
    Eigen::Index n = static_cast<Eigen::Index>(c_v.size());
    if (const auto it = doc.find("n"); it != doc.end()) {
        if (!it->is_number_integer() || it->get<long long>() <= 0) {
            throw ScenarioError("n", "expected a positive integer");
        }
        n = it->get<Eigen::Index>();
    }
    Matrix C = read_matrix(c_v, n);

    const double k = read_real(require(doc, "k", ""), "k");
    if (!(k > 0.0)) throw ScenarioError("k", "must be positive");

    const json& agents_v = require(doc, "agents", "");
    std::uint64_t seed = 0;
    std::vector<Agent> agents;
    if (const auto it = agents_v.find("list"); agents_v.is_object() && it != agents_v.end()) {
        agents = read_list(*it, n);
    } else if (const auto gt = agents_v.find("generator"); agents_v.is_object() && gt != agents_v.end()) {
        agents = read_generator(*gt, n, seed);
    } else {
        throw ScenarioError("agents", "expected {\"list\": [...]} or {\"generator\": {...}}");
    }

    GameSpec game(std::move(C), k, std::move(agents), seed);
    SystemState initial = read_initial(doc, game);
    return Scenario{std::move(game), std::move(initial)};
}

Scenario load_scenario_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("scenario", "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_scenario(buf.str());
}

}  // namespace aggseek
