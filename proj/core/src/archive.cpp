#include "tkrylov/archive.hpp"

#include <fstream>
#include <json.hpp>
#include <stdexcept>

namespace tkrylov {

namespace {

using nlohmann::json;

json matrix_to_json(const Eigen::MatrixXd& M) {
    json cols = json::array();
    for (Eigen::Index c = 0; c < M.cols(); ++c) {
        json col = json::array();
        for (Eigen::Index r = 0; r < M.rows(); ++r) col.push_back(M(r, c));
        cols.push_back(std::move(col));
    }
    return json{{"rows", M.rows()}, {"cols", M.cols()}, {"data", std::move(cols)}};
}

Eigen::MatrixXd matrix_from_json(const json& j) {
    const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
    const Eigen::Index cols = j.at("cols").get<Eigen::Index>();
    Eigen::MatrixXd M(rows, cols);
    const json& data = j.at("data");
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r) M(r, c) = data.at(c).at(r).get<double>();
    return M;
}

json basis_to_json(const OrthoBasis& b) {
    return json{{"mode", mode_index(b.mode())},
                {"dim", b.dim()},
                {"vectors", matrix_to_json(b.matrix())}};
}

OrthoBasis basis_from_json(const json& j) {
    const Mode mode = mode_from_index(j.at("mode").get<int>());
    Eigen::MatrixXd cols = matrix_from_json(j.at("vectors"));
    if (cols.rows() != j.at("dim").get<Eigen::Index>())
        throw std::runtime_error("archive: basis dimension mismatch");
    return OrthoBasis::from_columns(mode, cols);
}

json coeff_to_json(const CoeffTensor& H) {
    return json{{"dims", H.dims()}, {"values", H.values_flat()}, {"mask", H.mask_flat()}};
}

CoeffTensor coeff_from_json(const json& j) {
    return CoeffTensor::from_flat(j.at("dims").get<std::array<int, 3>>(),
                                  j.at("values").get<std::vector<double>>(),
                                  j.at("mask").get<std::vector<std::uint8_t>>());
}

json counters_to_json(const Counters& c) {
    return json{{"tvv", c.tvv},
                {"gram_matvec", c.gram_matvec},
                {"inner_products", c.inner_products}};
}

Counters counters_from_json(const json& j) {
    Counters c;
    c.tvv = j.at("tvv").get<std::int64_t>();
    c.gram_matvec = j.at("gram_matvec").get<std::int64_t>();
    c.inner_products = j.at("inner_products").get<std::int64_t>();
    return c;
}

const char* method_name(RecursionMethod m) {
    switch (m) {
        case RecursionMethod::minimal: return "minimal";
        case RecursionMethod::modified_minimal: return "modified-minimal";
        case RecursionMethod::maximal: return "maximal";
        case RecursionMethod::optimized: return "optimized";
        case RecursionMethod::small_mode: return "small-mode";
        default: return "contracted";
    }
}

RecursionMethod method_from_name(const std::string& name) {
    if (name == "minimal") return RecursionMethod::minimal;
    if (name == "modified-minimal") return RecursionMethod::modified_minimal;
    if (name == "maximal") return RecursionMethod::maximal;
    if (name == "optimized") return RecursionMethod::optimized;
    if (name == "small-mode") return RecursionMethod::small_mode;
    if (name == "contracted") return RecursionMethod::contracted;
    throw std::runtime_error("archive: unknown method " + name);
}

}  // namespace

std::string to_json(const KrylovState& s) {
    json j;
    j["kind"] = "krylov-state";
    j["method"] = method_name(s.method);
    j["variant"] = s.variant == MinimalVariant::latest_pairs ? "latest-pairs" : "lagged-pairs";
    j["seed"] = s.seed;
    j["bases"] = json{{"u", basis_to_json(s.U)}, {"v", basis_to_json(s.V)},
                      {"w", basis_to_json(s.W)}};
    j["H"] = coeff_to_json(s.H);
    j["counters"] = counters_to_json(s.counters);
    json events = json::array();
    for (const auto& e : s.events)
        events.push_back(json{{"mode", mode_index(e.mode)},
                              {"step", e.step},
                              {"residual_norm", e.residual_norm},
                              {"resolution",
                               e.resolution == BreakdownEvent::Resolution::subspace_complete
                                   ? "subspace-complete"
                                   : "random-replacement"}});
    j["events"] = std::move(events);
    json loops = json::array();
    for (const auto& r : s.loops)
        loops.push_back(json{{"mode", mode_index(r.mode)},
                             {"alpha", r.alpha},
                             {"beta", r.beta},
                             {"gamma", r.gamma},
                             {"complete", r.complete}});
    j["loops"] = std::move(loops);
    j["small_mode_selections"] = s.small_mode_selections;
    return j.dump(2);
}

KrylovState state_from_json(const std::string& text) {
    const json j = json::parse(text);
    if (j.at("kind").get<std::string>() != "krylov-state")
        throw std::runtime_error("archive: not a krylov-state document");
    KrylovState s;
    s.method = method_from_name(j.at("method").get<std::string>());
    s.variant = j.at("variant").get<std::string>() == "latest-pairs"
                    ? MinimalVariant::latest_pairs
                    : MinimalVariant::lagged_pairs;
    s.seed = j.at("seed").get<std::uint64_t>();
    s.U = basis_from_json(j.at("bases").at("u"));
    s.V = basis_from_json(j.at("bases").at("v"));
    s.W = basis_from_json(j.at("bases").at("w"));
    s.H = coeff_from_json(j.at("H"));
    s.counters = counters_from_json(j.at("counters"));
    for (const auto& e : j.at("events")) {
        BreakdownEvent ev{mode_from_index(e.at("mode").get<int>()), e.at("step").get<int>(),
                          e.at("residual_norm").get<double>(),
                          e.at("resolution").get<std::string>() == "subspace-complete"
                              ? BreakdownEvent::Resolution::subspace_complete
                              : BreakdownEvent::Resolution::random_replacement};
        s.events.push_back(ev);
    }
    for (const auto& r : j.at("loops"))
        s.loops.push_back({mode_from_index(r.at("mode").get<int>()), r.at("alpha").get<int>(),
                           r.at("beta").get<int>(), r.at("gamma").get<int>(),
                           r.at("complete").get<bool>()});
    s.small_mode_selections = j.at("small_mode_selections").get<std::vector<int>>();
    return s;
}

std::string to_json(const TuckerDecomp& d) {
    json j;
    j["kind"] = "tucker-decomp";
    j["method"] = d.method;
    j["rel_error"] = d.rel_error;
    j["counters"] = counters_to_json(d.counters);
    j["U"] = matrix_to_json(d.U);
    j["V"] = matrix_to_json(d.V);
    j["W"] = matrix_to_json(d.W);
    j["core"] = json{{"dims", d.core.dims()},
                     {"values", std::vector<double>(d.core.data().begin(), d.core.data().end())}};
    return j.dump(2);
}

TuckerDecomp decomp_from_json(const std::string& text) {
    const json j = json::parse(text);
    if (j.at("kind").get<std::string>() != "tucker-decomp")
        throw std::runtime_error("archive: not a tucker-decomp document");
    TuckerDecomp d;
    d.method = j.at("method").get<std::string>();
    d.rel_error = j.at("rel_error").get<double>();
    d.counters = counters_from_json(j.at("counters"));
    d.U = matrix_from_json(j.at("U"));
    d.V = matrix_from_json(j.at("V"));
    d.W = matrix_from_json(j.at("W"));
    const auto dims = j.at("core").at("dims").get<std::array<int, 3>>();
    d.core = DenseTensor3(dims[0], dims[1], dims[2],
                          j.at("core").at("values").get<std::vector<double>>());
    return d;
}

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open archive: " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write archive: " + path);
    out << text;
}

}  // namespace

void save_state(const std::string& path, const KrylovState& state) { spit(path, to_json(state)); }

KrylovState load_state(const std::string& path) { return state_from_json(slurp(path)); }

void save_decomp(const std::string& path, const TuckerDecomp& decomp) {
    spit(path, to_json(decomp));
}

TuckerDecomp load_decomp(const std::string& path) { return decomp_from_json(slurp(path)); }

}  // namespace tkrylov
