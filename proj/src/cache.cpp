#include "kmd/error.hpp"
#include "kmd/liealg.hpp"

#include "json.hpp"

#include <algorithm>

namespace kmd {

using nlohmann::json;

namespace {

Q parse_rational(const std::string& s)
{
    const auto slash = s.find('/');
    if (slash == std::string::npos)
        throw Error(Err::CacheError, "bad rational " + s);
    Z num, den;
    if (num.set_str(s.substr(0, slash), 10) != 0 || den.set_str(s.substr(slash + 1), 10) != 0 || den <= 0)
        throw Error(Err::CacheError, "bad rational " + s);
    Q q(num, den);
    q.canonicalize();
    return q;
}

RootVec parse_degree(const std::string& s, int n)
{
    json j;
    try {
        j = json::parse(s);
    } catch (const json::exception&) {
        throw Error(Err::CacheError, "bad degree key " + s);
    }
    if (!j.is_array() || static_cast<int>(j.size()) != n)
        throw Error(Err::CacheError, "bad degree key " + s);
    RootVec r = RootVec::zero(n);
    for (int i = 0; i < n; ++i)
        r[i] = j[i].get<int>();
    return r;
}

}  // namespace

std::string GradedAlgebra::to_cache_json() const
{
    json j;
    j["version"] = 1;
    j["gcm"] = gcm_.entries();
    j["height"] = cap_;
    if (box_)
        j["box"] = box_->c;
    json dims = json::object(), basis = json::object();
    for (const auto& d : degrees_) {
        dims[d.beta.str()] = d.dim;
        json labs = json::array();
        for (int k = 0; k < d.dim; ++k)
            labs.push_back(labels_[d.offset + k]);
        basis[d.beta.str()] = labs;
    }
    j["dims"] = dims;
    j["basis"] = basis;
    json br = json::object();
    for (const auto& [k, v] : table_) {
        const int u = static_cast<int>(k / labels_.size()), w = static_cast<int>(k % labels_.size());
        json entry = json::object();
        for (const auto& [g, c] : v)
            entry[labels_[g]] = to_string(c);
        br["(" + labels_[u] + "," + labels_[w] + ")"] = entry;
    }
    j["brackets"] = br;
    return j.dump(1) + "\n";
}

GradedAlgebra GradedAlgebra::from_cache_json(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(Err::CacheError, std::string("unparsable cache: ") + e.what());
    }
    try {
        if (!j.contains("version") || j["version"] != 1)
            throw Error(Err::CacheError, "cache version mismatch");
        Gcm g = Gcm::validate(j.at("gcm").get<IMat>());
        const int n = g.size();
        std::optional<RootVec> box;
        if (j.contains("box"))
            box = RootVec(j["box"].get<std::vector<int>>());
        GradedAlgebra alg(g, j.at("height").get<int>(), box);

        std::vector<RootVec> degs;
        for (const auto& [k, v] : j.at("dims").items())
            degs.push_back(parse_degree(k, n));
        std::sort(degs.begin(), degs.end());
        int offset = 0;
        for (const auto& beta : degs) {
            if (!alg.covers(beta))
                throw Error(Err::CacheError, "degree " + beta.str() + " outside the cap");
            DegreeInfo d;
            d.beta = beta;
            d.offset = offset;
            d.dim = j["dims"][beta.str()].get<int>();
            const Z fd = witt_dimension(beta);
            d.free_dim = static_cast<int>(fd.get_si());
            if (d.dim < 0 || d.dim > d.free_dim)
                throw Error(Err::CacheError, "dimension out of range at " + beta.str());
            const auto labs = j.at("basis").at(beta.str()).get<std::vector<std::string>>();
            if (static_cast<int>(labs.size()) != d.dim)
                throw Error(Err::CacheError, "basis size mismatch at " + beta.str());
            for (const auto& l : labs)
                alg.labels_.push_back(l);
            offset += d.dim;
            alg.degrees_.push_back(d);
        }
        if (degs != degrees_up_to(n, alg.cap_, alg.box_))
            throw Error(Err::CacheError, "degree set does not match the cap");
        alg.index_degrees();
        if (static_cast<int>(alg.label_index_.size()) != alg.dim_total())
            throw Error(Err::CacheError, "duplicate basis labels");

        for (const auto& [k, v] : j.at("brackets").items()) {
            if (k.size() < 5 || k.front() != '(' || k.back() != ')')
                throw Error(Err::CacheError, "bad bracket key " + k);
            const auto comma = k.find(',');
            const int u = alg.index_of_label(k.substr(1, comma - 1));
            const int w = alg.index_of_label(k.substr(comma + 1, k.size() - comma - 2));
            if (u < 0 || w < 0 || u >= w)
                throw Error(Err::CacheError, "bad bracket key " + k);
            SpVec out;
            for (const auto& [lab, val] : v.items()) {
                const int t = alg.index_of_label(lab);
                if (t < 0)
                    throw Error(Err::CacheError, "unknown label " + lab);
                Q q = parse_rational(val.get<std::string>());
                if (sgn(q) == 0)
                    throw Error(Err::CacheError, "zero entry stored under " + k);
                out.emplace_back(t, std::move(q));
            }
            std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
            alg.table_.emplace(alg.key(u, w), std::move(out));
        }
        for (auto check : {&GradedAlgebra::check_generators, &GradedAlgebra::check_serre}) {
            const std::string err = (alg.*check)();
            if (!err.empty())
                throw Error(Err::CacheError, "invalid cache: " + err);
        }
        const std::string err = alg.check_antisymmetry_jacobi();
        if (!err.empty())
            throw Error(Err::CacheError, "invalid cache: " + err);
        return alg;
    } catch (const json::exception& e) {
        throw Error(Err::CacheError, std::string("malformed cache: ") + e.what());
    } catch (const Error& e) {
        if (e.kind() == Err::CacheError)
            throw;
        throw Error(Err::CacheError, e.what());
    }
}

}  // namespace kmd
