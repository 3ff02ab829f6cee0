#include "socnet/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace socnet {

namespace {

using nlohmann::json;

std::string format_weight(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json empirical_to_json(const EmpiricalCdf& e) {
    return json{{"values", e.values}, {"levels", e.levels}, {"counts", e.counts}, {"n", e.n}};
}

EmpiricalCdf empirical_from_json(const json& j) {
    EmpiricalCdf e;
    e.values = j.at("values").get<std::vector<double>>();
    e.levels = j.at("levels").get<std::vector<double>>();
    e.counts = j.at("counts").get<std::vector<std::size_t>>();
    e.n = j.at("n").get<std::size_t>();
    return e;
}

json dist_to_json(const Distribution& d) {
    switch (d.kind) {
        case DistKind::Normal:
            return json{{"kind", "normal"}, {"mean", d.p1}, {"variance", d.p2}};
        case DistKind::Exponential:
            return json{{"kind", "exponential"}, {"rate", d.p1}};
        case DistKind::Gamma:
            return json{{"kind", "gamma"}, {"shape", d.p1}, {"rate", d.p2}};
        case DistKind::Uniform:
            return json{{"kind", "uniform"}, {"lo", d.p1}, {"hi", d.p2}};
        case DistKind::NegGamma:
            return json{{"kind", "neg_gamma"}, {"shape", d.p1}, {"rate", d.p2}};
        case DistKind::Triangular:
            return json{{"kind", "triangular"}, {"lo", d.p1}, {"hi", d.p2}};
        case DistKind::Tabulated:
            return json{{"kind", "tabulated"}, {"grid", d.grid}, {"cdf", d.gcdf}};
        case DistKind::Empirical:
            return json{{"kind", "empirical"}, {"cdf", empirical_to_json(d.emp)}};
    }
    throw std::logic_error("dist_to_json: unknown kind");
}

Distribution dist_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "normal") return normal_dist(j.at("mean"), j.at("variance"));
    if (kind == "exponential") return exponential_dist(j.at("rate"));
    if (kind == "gamma") return gamma_dist(j.at("shape"), j.at("rate"));
    if (kind == "uniform") return uniform_dist(j.at("lo"), j.at("hi"));
    if (kind == "neg_gamma") return neg_gamma_dist(j.at("shape"), j.at("rate"));
    if (kind == "triangular") return triangular_dist(j.at("lo"), j.at("hi"));
    if (kind == "tabulated")
        return tabulated_dist(j.at("grid").get<std::vector<double>>(),
                              j.at("cdf").get<std::vector<double>>());
    if (kind == "empirical") return empirical_dist(empirical_from_json(j.at("cdf")));
    throw std::invalid_argument("unknown distribution kind: " + kind);
}

std::string assoc_name(Association a) {
    switch (a) {
        case Association::Positive: return "positive";
        case Association::Negative: return "negative";
        case Association::SimpsonX: return "simpson_x";
        case Association::SimpsonY: return "simpson_y";
    }
    throw std::logic_error("assoc_name: unknown association");
}

Association assoc_from_name(const std::string& s) {
    if (s == "positive") return Association::Positive;
    if (s == "negative") return Association::Negative;
    if (s == "simpson_x") return Association::SimpsonX;
    if (s == "simpson_y") return Association::SimpsonY;
    throw std::invalid_argument("unknown association: " + s);
}

json hfunc_to_json(const HFunction& h) {
    json j;
    j["association"] = assoc_name(h.association);
    switch (h.construction) {
        case HConstruction::ConvolutionPair:
            j["construction"] = "convolution_pair";
            j["f1"] = dist_to_json(h.f1);
            j["f2"] = dist_to_json(h.f2);
            j["f12"] = dist_to_json(h.f12);
            break;
        case HConstruction::NormalRho:
            j["construction"] = "normal_rho";
            j["rho"] = h.rho;
            break;
        case HConstruction::Projection:
            j["construction"] = "projection";
            j["axis"] = h.axis;
            break;
    }
    return j;
}

HFunction hfunc_from_json(const json& j) {
    const std::string c = j.at("construction").get<std::string>();
    const Association assoc = assoc_from_name(j.at("association").get<std::string>());
    if (c == "convolution_pair")
        return convolution_pair(dist_from_json(j.at("f1")), dist_from_json(j.at("f2")),
                                dist_from_json(j.at("f12")), assoc);
    if (c == "normal_rho") return normal_rho(j.at("rho").get<double>(), assoc);
    if (c == "projection") return projection(j.at("axis").get<int>(), assoc);
    throw std::invalid_argument("unknown construction: " + c);
}

json assignment_to_json(const CommunityAssignment& a) {
    return json{{"labels", a.labels}, {"K", a.K}};
}

CommunityAssignment assignment_from_json(const json& j) {
    CommunityAssignment a;
    a.labels = j.at("labels").get<std::vector<int>>();
    a.K = j.at("K").get<int>();
    validate_assignment(a, static_cast<int>(a.labels.size()));
    return a;
}

json pair_to_json(const PairModel& p) {
    json j;
    j["g_hat"] = empirical_to_json(p.g_hat);
    j["h_hat"] = hfunc_to_json(p.h_hat);
    j["sigma_hat"] = p.sigma_hat;
    j["psi_i_wrt_j"] = p.psi_i_wrt_j;
    j["psi_j_wrt_i"] = p.psi_j_wrt_i;
    j["mse"] = p.mse;
    j["spurious"] = p.spurious;
    j["within"] = p.within;
    if (p.lsm_fit) {
        j["lsm_fit"] = json{{"alpha", p.lsm_fit->alpha},
                            {"beta", p.lsm_fit->beta},
                            {"gamma", p.lsm_fit->gamma},
                            {"z_i", p.lsm_fit->z_i},
                            {"z_j", p.lsm_fit->z_j}};
    }
    return j;
}

PairModel pair_from_json(const json& j) {
    PairModel p;
    p.g_hat = empirical_from_json(j.at("g_hat"));
    p.h_hat = hfunc_from_json(j.at("h_hat"));
    p.sigma_hat = j.at("sigma_hat").get<double>();
    p.psi_i_wrt_j = j.at("psi_i_wrt_j").get<std::vector<double>>();
    p.psi_j_wrt_i = j.at("psi_j_wrt_i").get<std::vector<double>>();
    p.mse = j.at("mse").get<double>();
    p.spurious = j.at("spurious").get<bool>();
    p.within = j.value("within", false);
    if (j.contains("lsm_fit")) {
        const json& l = j.at("lsm_fit");
        LsmFit fit;
        fit.alpha = l.at("alpha").get<double>();
        fit.beta = l.at("beta").get<double>();
        fit.gamma = l.at("gamma").get<double>();
        fit.z_i = l.at("z_i").get<std::vector<double>>();
        fit.z_j = l.at("z_j").get<std::vector<double>>();
        p.lsm_fit = std::move(fit);
    }
    return p;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spill(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

}  // namespace

void write_weights_csv(const WeightedNetwork& net, const std::string& path) {
    std::ostringstream out;
    const int n = net.n();
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            if (c) out << ',';
            if (net.is_missing(r, c))
                out << 0;  // the sparse convention on disk: 0 means absent
            else
                out << format_weight(net.weights(r, c));
        }
        out << '\n';
    }
    spill(path, out.str());
}

WeightedNetwork read_weights_csv(const std::string& path, bool sparse) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            std::size_t comma = line.find(',', pos);
            std::string cell =
                line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            std::size_t used = 0;
            double v;
            try {
                v = std::stod(cell, &used);
            } catch (const std::exception&) {
                throw std::runtime_error("bad numeric cell in " + path + ": '" + cell + "'");
            }
            row.push_back(v);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        rows.push_back(std::move(row));
    }
    const std::size_t n = rows.size();
    if (n == 0) throw std::runtime_error("empty weights file: " + path);
    for (const auto& r : rows)
        if (r.size() != n) throw std::runtime_error("weights file is not square: " + path);
    WeightedNetwork net;
    net.weights = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            net.weights(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    if (sparse) {
        BoolMatrix mask(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        mask.setConstant(false);
        bool any = false;
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                if (r != c && rows[r][c] == 0.0) {
                    mask(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = true;
                    any = true;
                }
        if (any) net.missing = std::move(mask);
    }
    return net;
}

void write_labels(const CommunityAssignment& a, const std::string& path) {
    std::ostringstream out;
    for (int l : a.labels) out << l << '\n';
    spill(path, out.str());
}

CommunityAssignment read_labels(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    CommunityAssignment a;
    std::unordered_map<int, int> seen;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        int raw;
        try {
            raw = std::stoi(line);
        } catch (const std::exception&) {
            throw std::runtime_error("bad label line in " + path + ": '" + line + "'");
        }
        auto [it, fresh] = seen.try_emplace(raw, static_cast<int>(seen.size()) + 1);
        a.labels.push_back(it->second);
    }
    a.K = static_cast<int>(seen.size());
    if (a.labels.empty()) throw std::runtime_error("empty labels file: " + path);
    return a;
}

std::string model_to_json(const FittedModel& model) {
    json j;
    j["assignment"] = assignment_to_json(model.assignment);
    json pairs = json::array();
    for (const PairModel& p : model.pairs) pairs.push_back(pair_to_json(p));
    j["pairs"] = std::move(pairs);
    return j.dump(2) + "\n";
}

FittedModel model_from_json(const std::string& text) {
    const json j = json::parse(text);
    FittedModel m;
    m.assignment = assignment_from_json(j.at("assignment"));
    for (const json& p : j.at("pairs")) m.pairs.push_back(pair_from_json(p));
    const std::size_t expected =
        static_cast<std::size_t>(m.assignment.K * (m.assignment.K + 1) / 2);
    if (m.pairs.size() != expected)
        throw std::invalid_argument("model file: pair count does not match K(K+1)/2");
    return m;
}

std::string generator_spec_to_json(const GeneratorSpec& spec) {
    json j;
    j["assignment"] = assignment_to_json(spec.assignment);
    json pairs = json::array();
    for (const PairGen& p : spec.pairs) {
        json e;
        e["h"] = hfunc_to_json(p.h);
        e["sigma"] = p.sigma;
        e["marginal"] = dist_to_json(p.marginal);
        e["external_noise_sd"] = p.external_noise_sd;
        e["retention"] = p.retention;
        pairs.push_back(std::move(e));
    }
    j["pairs"] = std::move(pairs);
    j["psi_mode"] = spec.psi_iid ? "iid_uniform" : "grid";
    if (!spec.psi_iid) j["psi_grid"] = spec.psi_grid;
    return j.dump(2) + "\n";
}

GeneratorSpec generator_spec_from_json(const std::string& text) {
    const json j = json::parse(text);
    GeneratorSpec spec;
    spec.assignment = assignment_from_json(j.at("assignment"));
    for (const json& e : j.at("pairs")) {
        PairGen p;
        p.h = hfunc_from_json(e.at("h"));
        p.sigma = e.at("sigma").get<double>();
        p.marginal = dist_from_json(e.at("marginal"));
        p.external_noise_sd = e.value("external_noise_sd", 0.0);
        p.retention = e.value("retention", 1.0);
        spec.pairs.push_back(std::move(p));
    }
    const std::string mode = j.at("psi_mode").get<std::string>();
    if (mode == "iid_uniform") {
        spec.psi_iid = true;
    } else if (mode == "grid") {
        spec.psi_iid = false;
        spec.psi_grid = j.at("psi_grid").get<std::vector<std::vector<double>>>();
    } else {
        throw std::invalid_argument("unknown psi_mode: " + mode);
    }
    validate_spec(spec);
    return spec;
}

void write_model(const FittedModel& model, const std::string& path) {
    spill(path, model_to_json(model));
}

FittedModel read_model(const std::string& path) { return model_from_json(slurp(path)); }

void write_generator_spec(const GeneratorSpec& spec, const std::string& path) {
    spill(path, generator_spec_to_json(spec));
}

GeneratorSpec read_generator_spec(const std::string& path) {
    return generator_spec_from_json(slurp(path));
}

}  // namespace socnet
