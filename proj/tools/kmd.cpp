// kmd: command-line front end for the Kac-Moody derivation toolkit.

#include "kmd/autos.hpp"
#include "kmd/combid.hpp"
#include "kmd/deriv.hpp"
#include "kmd/error.hpp"
#include "kmd/gcm.hpp"
#include "kmd/liealg.hpp"
#include "kmd/roots.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using nlohmann::json;
using namespace kmd;

namespace {

enum Exit { Ok = 0, InputErr = 2, CapErr = 3, VerifyErr = 4, CacheErr = 5 };

struct RunConfig {
    std::string matrix_path;
    int height = 0;
    std::string beta;
    std::string format = "json";
    std::string cache_dir;
    int jobs = 1;
    // identities
    long rmax = 8, sl2_max = 10;
    long r = -1, r1 = -1, k0 = -1;
};

struct Failure {
    Exit code;
    std::string msg;
};

Gcm read_gcm(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Failure{InputErr, "cannot read " + path};
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Failure{InputErr, std::string("bad JSON in ") + path + ": " + e.what()};
    }
    const json& m = j.is_object() ? j.at("matrix") : j;
    try {
        return Gcm::validate(m.get<IMat>());
    } catch (const json::exception& e) {
        throw Failure{InputErr, std::string("matrix must be a list of integer rows: ") + e.what()};
    }
}

RootVec parse_beta(const std::string& s, int n)
{
    try {
        const auto v = json::parse(s).get<std::vector<int>>();
        if (static_cast<int>(v.size()) != n)
            throw Failure{InputErr, "--beta needs " + std::to_string(n) + " coordinates"};
        return RootVec(v);
    } catch (const json::exception&) {
        throw Failure{InputErr, "--beta must look like [1,0,...]"};
    }
}

std::string cache_name(const Gcm& g, int N)
{
    // FNV-1a over the matrix text keeps names stable across platforms.
    const std::string text = json(g.entries()).dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream os;
    os << "kmd_" << std::hex << std::setw(16) << std::setfill('0') << h << "_N" << std::dec << N << ".json";
    return os.str();
}

void write_cache(const GradedAlgebra& alg, const std::filesystem::path& file)
{
    std::filesystem::create_directories(file.parent_path());
    const std::filesystem::path tmp = file.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out)
            throw Failure{CacheErr, "cannot write " + tmp.string()};
        out << alg.to_cache_json();
    }
    std::filesystem::rename(tmp, file);
}

GradedAlgebra obtain(const Gcm& g, int N, const std::string& cache_dir)
{
    if (cache_dir.empty())
        return build_nilradical(g, N);
    const std::filesystem::path file = std::filesystem::path(cache_dir) / cache_name(g, N);
    if (std::filesystem::exists(file)) {
        std::ifstream in(file, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        GradedAlgebra alg = GradedAlgebra::from_cache_json(ss.str());
        if (!(alg.gcm() == g) || alg.height_cap() != N || alg.box())
            throw Error(Err::CacheError, "cache file " + file.string() + " does not match the request");
        return alg;
    }
    GradedAlgebra alg = build_nilradical(g, N);
    write_cache(alg, file);
    return alg;
}

std::string kind_name(Kind k)
{
    switch (k) {
    case Kind::Finite:
        return "finite";
    case Kind::Affine:
        return "affine";
    default:
        return "indefinite";
    }
}

json line_json(const DegreeReport& l)
{
    return {{"degree", l.degree.c}, {"dim", l.dim},       {"inner", l.inner},
            {"outer", l.outer},     {"status", l.pass ? "pass" : "fail"}};
}

void print_lines(const RunConfig& cfg, const std::vector<json>& lines, const json& summary)
{
    if (cfg.format == "json") {
        for (const auto& l : lines)
            std::cout << l.dump() << "\n";
        std::cout << summary.dump() << "\n";
        return;
    }
    if (!lines.empty()) {
        std::vector<std::string> keys;
        for (const auto& [k, v] : lines.front().items())
            keys.push_back(k);
        for (const auto& k : keys)
            std::cout << std::setw(14) << k;
        std::cout << "\n";
        for (const auto& l : lines) {
            for (const auto& k : keys) {
                const json& v = l.contains(k) ? l[k] : json();
                std::cout << std::setw(14) << (v.is_string() ? v.get<std::string>() : v.dump());
            }
            std::cout << "\n";
        }
    }
    for (const auto& [k, v] : summary.items())
        std::cout << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
}

json sp_json(const GradedAlgebra& alg, const SpVec& x, int shift = 0)
{
    json o = json::object();
    for (const auto& [g, q] : x)
        o[g < shift ? "h" + std::to_string(g) : alg.label(g - shift)] = to_string(q);
    return o;
}

int sweep_cap(const GradedAlgebra& alg)
{
    return alg.height_cap() - alg.gcm().serre_span();
}

int cmd_classify(const RunConfig& cfg)
{
    const Gcm g = read_gcm(cfg.matrix_path);
    const GcmType t = classify(g);
    json j;
    j["type"] = kind_name(t.kind);
    if (t.kind != Kind::Indefinite)
        j["label"] = t.label;
    j["size"] = g.size();
    if (auto s = try_symmetrizer(g))
        j["symmetrizer"] = s->d;
    else
        j["symmetrizer"] = "nonsymmetrizable";
    j["autA"] = diagram_automorphisms(g).size();
    if (t.kind == Kind::Affine) {
        j["marks"] = t.marks;
        j["comarks"] = t.comarks;
        j["epsilon"] = t.epsilon_input;
    }
    print_lines(cfg, {}, j);
    return Ok;
}

int cmd_der(const RunConfig& cfg)
{
    const Gcm g = read_gcm(cfg.matrix_path);
    const RootVec beta = parse_beta(cfg.beta, g.size());
    const GradedAlgebra alg = obtain(g, cfg.height, cfg.cache_dir);
    const DerivationSpace ds = der_space_n(alg, beta);
    bool ok = ds.inner_dim + ds.outer_dim == ds.dim();
    for (const auto& v : ds.basis)
        ok = ok && annihilates_serre(alg, beta, ds.images(v));
    json line = {{"degree", beta.c},
                 {"dim", ds.dim()},
                 {"inner", ds.inner_dim},
                 {"outer", ds.outer_dim},
                 {"status", ok ? "pass" : "fail"}};
    json reps = json::array();
    for (const auto& v : ds.outer_reps) {
        json d = json::array();
        for (const auto& e : ds.images(v).e)
            d.push_back(sp_json(alg, e));
        reps.push_back(d);
    }
    json summary = {{"theorem", "der"}, {"validity_cap", ds.validity_cap}, {"outer_representatives", reps},
                    {"pass", ok}};
    print_lines(cfg, {line}, summary);
    return ok ? Ok : VerifyErr;
}

int report_sweep(const RunConfig& cfg, const SweepReport& rep, json extra)
{
    std::vector<json> lines;
    for (const auto& l : rep.lines)
        lines.push_back(line_json(l));
    json summary = {{"theorem", rep.theorem}, {"pass", rep.pass}, {"h1", rep.h1}};
    if (!rep.note.empty())
        summary["note"] = rep.note;
    for (const auto& [k, v] : extra.items())
        summary[k] = v;
    print_lines(cfg, lines, summary);
    return rep.pass ? Ok : VerifyErr;
}

int cmd_moody(const RunConfig& cfg)
{
    const Gcm g = read_gcm(cfg.matrix_path);
    if (classify(g).kind != Kind::Indefinite)
        throw Failure{InputErr, "moody needs an indefinite matrix"};
    const GradedAlgebra alg = obtain(g, cfg.height, cfg.cache_dir);
    const int H = sweep_cap(alg);
    return report_sweep(cfg, verify_moody(alg, H, cfg.jobs), {{"H", H}, {"N", cfg.height}});
}

int cmd_h1(const RunConfig& cfg)
{
    const Gcm g = read_gcm(cfg.matrix_path);
    const GradedAlgebra alg = obtain(g, cfg.height, cfg.cache_dir);
    const int H = sweep_cap(alg);
    const SweepReport rep = h1_report(alg, H, cfg.jobs);
    int outer = 0;
    for (const auto& l : rep.lines)
        outer += l.outer;
    return report_sweep(cfg, rep,
                        {{"H", H}, {"N", cfg.height}, {"degree0", g.size()}, {"outer_total", outer}});
}

int cmd_borel(const RunConfig& cfg)
{
    const Gcm g = read_gcm(cfg.matrix_path);
    auto nil = std::make_shared<const GradedAlgebra>(obtain(g, cfg.height, cfg.cache_dir));
    const BorelAlgebra bor(nil);
    json info = {{"h_dim", bor.h_dim()}, {"c_dim", bor.m_prime()}, {"N", cfg.height}};
    if (!cfg.beta.empty()) {
        const RootVec beta = parse_beta(cfg.beta, g.size());
        const DerivationSpace ds = der_space_b(bor, beta);
        json line = {{"degree", beta.c},
                     {"dim", ds.dim()},
                     {"inner", ds.inner_dim},
                     {"outer", ds.outer_dim},
                     {"status", ds.inner_dim + ds.outer_dim == ds.dim() ? "pass" : "fail"}};
        info["theorem"] = "borel";
        info["pass"] = line["status"] == "pass";
        print_lines(cfg, {line}, info);
        return info["pass"].get<bool>() ? Ok : VerifyErr;
    }
    const int H = sweep_cap(*nil);
    info["H"] = H;
    return report_sweep(cfg, borel_sweep(bor, H, cfg.jobs), info);
}

json identity_json(const IdentityReport& r)
{
    json p = json::object();
    for (const auto& [k, v] : r.params)
        p[k] = v;
    json j = {{"identity", r.name}, {"params", p}, {"lhs", to_string(r.lhs)}, {"rhs", to_string(r.rhs)},
              {"status", r.pass ? "pass" : "fail"}};
    if (!r.pass)
        for (const auto& [k, v] : r.diagnostics)
            j["diagnostics"][k] = v;
    return j;
}

int cmd_identities(const RunConfig& cfg)
{
    if (cfg.rmax < 1 || cfg.sl2_max < 1)
        throw Failure{InputErr, "sweep bounds must be >= 1"};
    std::vector<json> lines;
    bool ok = true;
    if (cfg.r1 >= 0 || cfg.k0 >= 0 || cfg.r >= 0) {
        if (cfg.r1 < 1 || cfg.k0 < 0)
            throw Failure{InputErr, "single case needs --r1 >= 1 and --k0 >= 0"};
        std::vector<IdentityReport> reps{beta_sum(cfg.r1, cfg.k0)};
        if (cfg.r >= 0)
            reps.push_back(coeff_3_16(cfg.r, cfg.r1, cfg.k0));
        for (const auto& r : reps) {
            lines.push_back(identity_json(r));
            ok = ok && r.pass;
        }
        json summary = {{"S", to_string(reps.front().lhs)}, {"pass", ok}};
        print_lines(cfg, lines, summary);
        return ok ? Ok : VerifyErr;
    }
    const IdentitySweep sw = identity_sweep(cfg.rmax, cfg.sl2_max);
    for (const auto& r : sw.reports)
        if (!r.pass)
            lines.push_back(identity_json(r));
    json fam = json::object();
    for (const auto& [name, tf] : sw.per_family)
        fam[name] = {{"total", tf.first}, {"failed", tf.second}};
    json summary = {{"total", sw.total}, {"failed", sw.failed}, {"families", fam}, {"pass", sw.pass()}};
    print_lines(cfg, lines, summary);
    return sw.pass() ? Ok : VerifyErr;
}

int cmd_build(const RunConfig& cfg)
{
    const Gcm g = read_gcm(cfg.matrix_path);
    const std::string dir = cfg.cache_dir.empty() ? "kmd-cache" : cfg.cache_dir;
    const std::filesystem::path file = std::filesystem::path(dir) / cache_name(g, cfg.height);
    GradedAlgebra alg = build_nilradical(g, cfg.height);
    write_cache(alg, file);
    // Round trip through the loader so a bad file is caught now.
    std::ifstream in(file, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    GradedAlgebra::from_cache_json(ss.str());

    std::map<int, int> by_height;
    std::vector<json> lines;
    for (const auto& d : alg.degrees()) {
        by_height[d.beta.height()] += d.dim;
        if (d.dim > 0)
            lines.push_back({{"degree", d.beta.c}, {"dim", d.dim}});
    }
    json heights = json::array();
    for (const auto& [h, d] : by_height)
        heights.push_back({{"height", h}, {"dim", d}});
    json summary = {{"cache", file.string()}, {"N", cfg.height}, {"dims_by_height", heights},
                    {"dim_total", alg.dim_total()}};
    print_lines(cfg, lines, summary);
    return Ok;
}

Exit exit_for(Err e)
{
    switch (e) {
    case Err::CapTooSmall:
    case Err::HeightOverflow:
    case Err::OutOfBox:
        return CapErr;
    case Err::CacheError:
        return CacheErr;
    case Err::Internal:
        return VerifyErr;
    default:
        return InputErr;
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact derivations and automorphisms of Kac-Moody nilradicals"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto common = [&](CLI::App* sub, bool needs_height) {
        sub->add_option("--matrix", cfg.matrix_path, "GCM JSON file {\"matrix\": [[...]]}")->required();
        auto* h = sub->add_option("--height", cfg.height, "height cap N")->check(CLI::Range(2, 1000));
        if (needs_height)
            h->required();
        sub->add_option("--format", cfg.format, "json or table")->check(CLI::IsMember({"json", "table"}));
        sub->add_option("--cache", cfg.cache_dir, "cache directory");
        sub->add_option("--jobs", cfg.jobs, "parallel degree sweeps")->check(CLI::Range(1, 1024));
    };

    std::map<std::string, int (*)(const RunConfig&)> handlers;
    auto* classify_cmd = app.add_subcommand("classify", "type, label, symmetrizer, marks");
    common(classify_cmd, false);
    handlers["classify"] = cmd_classify;

    auto* der_cmd = app.add_subcommand("der", "derivation space at one degree");
    common(der_cmd, true);
    der_cmd->add_option("--beta", cfg.beta, "degree, e.g. [-1,1]")->required();
    handlers["der"] = cmd_der;

    auto* moody_cmd = app.add_subcommand("moody", "all candidate degrees for an indefinite matrix");
    common(moody_cmd, true);
    handlers["moody"] = cmd_moody;

    auto* borel_cmd = app.add_subcommand("borel", "derivations of the Borel subalgebra");
    common(borel_cmd, true);
    borel_cmd->add_option("--beta", cfg.beta, "single degree in Q+");
    handlers["borel"] = cmd_borel;

    auto* h1_cmd = app.add_subcommand("h1", "outer derivation count per degree");
    common(h1_cmd, true);
    handlers["h1"] = cmd_h1;

    auto* id_cmd = app.add_subcommand("identities", "exact binomial and sl2 identity sweeps");
    id_cmd->add_option("--rmax", cfg.rmax, "sweep bound for r");
    id_cmd->add_option("--sl2-max", cfg.sl2_max, "sweep bound for the sl2 module");
    id_cmd->add_option("--r", cfg.r, "single case r");
    id_cmd->add_option("--r1", cfg.r1, "single case r1");
    id_cmd->add_option("--k0", cfg.k0, "single case k0");
    id_cmd->add_option("--format", cfg.format, "json or table")->check(CLI::IsMember({"json", "table"}));
    handlers["identities"] = cmd_identities;

    auto* build_cmd = app.add_subcommand("build", "build the truncated nilradical and write the cache");
    common(build_cmd, true);
    handlers["build"] = cmd_build;

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return InputErr;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    try {
        return handlers.at(name)(cfg);
    } catch (const Failure& f) {
        std::cerr << "error: " << f.msg << "\n";
        return f.code;
    } catch (const Error& e) {
        std::cerr << "error: " << e.name() << ": " << e.what() << "\n";
        return exit_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return InputErr;
    }
}
