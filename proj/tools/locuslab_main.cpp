// Command-line front end: configuration verification, generators, BA
// functions, commuting integrals, Hadamard certificates and the
// one-dimensional constructions, all emitting deterministic JSON.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "locuslab/huygens.hpp"
#include "locuslab/locus.hpp"
#include "locuslab/onedim.hpp"

using namespace locuslab;
using nlohmann::json;

namespace {

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
    return j;
}

Configuration load_config(const std::string& path) {
    try {
        return config_from_json(load_json(path));
    } catch (const InputError&) {
        throw;
    } catch (const std::exception& e) {
        throw InputError(path + ": " + e.what());
    }
}

void emit(const json& j, const std::string& out_path) {
    std::string text = j.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) throw InputError("cannot write " + out_path);
        out << text;
    }
}

std::vector<TowerScalar> parse_scalar_list(const std::string& s) {
    std::vector<TowerScalar> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(parse_scalar(item));
    return out;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stoi(item));
    return out;
}

// "a+bi" with decimal a, b (either part optional)
CF parse_cf(const std::string& s) {
    std::string t;
    for (char c : s)
        if (!std::isspace((unsigned char)c)) t += c;
    size_t split = t.npos;
    for (size_t i = 1; i < t.size(); ++i)
        if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E')
            split = i;
    try {
        if (t.back() == 'i') {
            std::string re = split == t.npos ? "0" : t.substr(0, split);
            std::string im = t.substr(split == t.npos ? 0 : split, t.size() - 1 -
                                      (split == t.npos ? 0 : split));
            if (im.empty() || im == "+") im = "1";
            if (im == "-") im = "-1";
            return CF(BigFloat(re), BigFloat(im));
        }
        return CF(BigFloat(t));
    } catch (const std::exception&) {
        throw InputError("cannot parse complex number: " + s);
    }
}

std::vector<CF> parse_cf_list(const std::string& s) {
    std::vector<CF> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(parse_cf(item));
    return out;
}

LocusReport run_verify(const Configuration& c, const std::string& mode,
                       std::uint64_t seed, int jobs) {
    std::vector<int> all = detail::all_indices(c);
    if (jobs <= 1 || all.size() < 2) return detail::verify_subset(c, all, mode, seed);
    std::vector<std::future<LocusReport>> parts;
    for (int a : all)
        parts.push_back(std::async(std::launch::async, [&, a] {
            std::vector<int> target = {a};
            return detail::verify_subset(c, all, mode, seed, &target);
        }));
    LocusReport rep;
    for (auto& f : parts) {
        LocusReport sub = f.get();
        rep.pass = rep.pass && sub.pass;
        for (auto& it : sub.items) rep.items.push_back(std::move(it));
    }
    return rep;
}

json report_json(const LocusReport& rep, const std::string& mode, std::uint64_t seed) {
    json j = locus_report_to_json(rep);
    j["mode"] = mode;
    if (mode == "probabilistic") j["seed"] = seed;
    return j;
}

std::string render_report(const json& j) {
    std::ostringstream out;
    if (j.contains("items")) {  // locus report
        out << "locus verification: " << (j["pass"].get<bool>() ? "pass" : "FAIL")
            << "\n";
        for (auto& it : j["items"]) {
            out << "  hyperplane " << it["hyperplane"] << ", j = " << it["j"] << ": ";
            std::string res = it["residual"].get<std::string>();
            out << (res == "0" ? "0" : "residual " + res) << "\n";
        }
    } else if (j.contains("minimal_N")) {  // certificate
        out << "Hadamard chain: M = " << j["M"] << ", minimal odd N = "
            << j["minimal_N"] << ", terminates = " << j["terminates"]
            << ", verified = " << j["chain_verified"] << "\n";
    } else {
        out << j.dump(2) << "\n";
    }
    return out.str();
}

}  // namespace

int run(int argc, char** argv) {
    CLI::App app{"exact verification of locus configurations, Baker-Akhiezer "
                 "functions and Hadamard chains"};
    app.require_subcommand(1);

    std::string in_path, out_path, mode = "exact", checks = "eigen,axioms";
    std::uint64_t seed = 0;
    int jobs = 1, precision = 256;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", out_path, "write the JSON result to a file");
        sub->add_option("--mode", mode, "zero test: exact or probabilistic")
            ->check(CLI::IsMember({"exact", "probabilistic"}));
        sub->add_option("--seed", seed, "seed for probabilistic zero tests");
        sub->add_option("--jobs", jobs, "parallel per-hyperplane checks");
        sub->add_option("--precision", precision, "working precision in bits");
    };

    CLI::App* verify = app.add_subcommand("verify", "run the locus equations");
    verify->add_option("--in", in_path, "configuration file")->required();
    bool with_structure = false;
    verify->add_flag("--structure", with_structure,
                     "also run the affine structure check");
    add_common(verify);

    CLI::App* gen = app.add_subcommand("generate", "emit a configuration document");
    std::string gen_name;
    int gn = 2, gm = 1, gl = 0, gp = 3, gm2 = -1, grank = 2;
    std::string gt = "1";
    gen->add_option("name", gen_name,
                    "coxeter-a | coxeter-i2 | deformed-a | deformed-c | "
                    "adler-moser-points | projectivise")
        ->required();
    gen->add_option("--n", gn, "rank / dimension parameter");
    gen->add_option("--rank", grank, "Coxeter rank");
    gen->add_option("--m", gm, "multiplicity or level");
    gen->add_option("--m2", gm2, "second multiplicity (coxeter-i2, even p)");
    gen->add_option("--l", gl, "second parameter of deformed-c");
    gen->add_option("--p", gp, "dihedral order");
    gen->add_option("--t", gt,
                    "adler-moser-points level 2: tau = t^3, points are the "
                    "roots of z^3 + t^3");
    gen->add_option("--in", in_path, "input file for projectivise");
    add_common(gen);

    CLI::App* psi = app.add_subcommand("psi", "construct the BA function");
    psi->add_option("--in", in_path, "configuration file")->required();
    psi->add_option("--check", checks,
                    "comma list of eigen,axioms,symmetry,bispectral");
    add_common(psi);

    CLI::App* integrals =
        app.add_subcommand("integrals", "commuting operator from a power sum");
    integrals->add_option("--in", in_path, "configuration file")->required();
    int ipow = 3;
    integrals->add_option("--power", ipow, "degree of the power sum f = sum k_i^p");
    add_common(integrals);

    CLI::App* hadamard = app.add_subcommand("hadamard", "Huygens certificate");
    hadamard->add_option("--in", in_path, "configuration file")->required();
    add_common(hadamard);

    CLI::App* onedim = app.add_subcommand("onedim", "one-dimensional constructions");
    onedim->require_subcommand(1);
    CLI::App* am = onedim->add_subcommand("adler-moser", "Wronskian potential");
    int am_m = 1;
    std::string am_constants;
    am->add_option("--m", am_m, "level")->required();
    am->add_option("--constants", am_constants, "comma list c_2..c_m");
    add_common(am);
    CLI::App* xi = onedim->add_subcommand("xi", "BA function from tail conditions");
    int xi_m = 1;
    std::string xi_list = "0";
    xi->add_option("--m", xi_m, "level")->required();
    xi->add_option("--xi", xi_list, "comma list xi_1..xi_m");
    add_common(xi);
    CLI::App* bl = onedim->add_subcommand("berest-lutsenko",
                                          "planar lines from a trigonometric Wronskian");
    std::string bl_k = "1", bl_theta = "0";
    bl->add_option("--k", bl_k, "comma list of increasing positive integers")
        ->required();
    bl->add_option("--theta", bl_theta, "comma list of phases (a+bi)");
    add_common(bl);

    CLI::App* report = app.add_subcommand("report", "render a saved JSON report");
    report->add_option("--in", in_path, "report file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (const char* env = std::getenv("LOCUSLAB_SEED")) seed = std::strtoull(env, nullptr, 10);

    try {
        if (*verify) {
            Configuration c = load_config(in_path);
            LocusReport rep = run_verify(c, mode, seed, jobs);
            json j = report_json(rep, mode, seed);
            j["kind"] = c.is_linear() ? "linear" : "affine";
            bool pass = rep.pass;
            if (with_structure && !c.is_linear()) {
                StructureReport sr = structure_check_affine(c, mode, seed);
                j["structure"] = {{"pass", sr.pass},
                                  {"flats_checked", sr.flats_checked},
                                  {"parallel_classes_checked", sr.parallel_classes_checked},
                                  {"notes", sr.notes}};
                pass = pass && sr.pass;
            }
            emit(j, out_path);
            return pass ? 0 : 1;
        }
        if (*gen) {
            Configuration c = [&] {
                if (gen_name == "coxeter-a") return make_coxeter("A", grank, {gm});
                if (gen_name == "coxeter-i2")
                    return make_dihedral(gp, gm2 < 0 ? std::vector<int>{gm}
                                                     : std::vector<int>{gm, gm2});
                if (gen_name == "deformed-a") return make_deformed_An(gn, gm);
                if (gen_name == "deformed-c") return make_deformed_Cn(gn, gm, gl);
                if (gen_name == "adler-moser-points") {
                    TowerScalar t = parse_scalar(gt);
                    if (gm == 2 && !t.is_zero()) {
                        std::vector<std::pair<TowerScalar, int>> pts = {
                            {-t, 1},
                            {t * parse_scalar("1/2 + 1/2*i*r3"), 1},
                            {t * parse_scalar("1/2 - 1/2*i*r3"), 1}};
                        return points_configuration(pts);
                    }
                    // confluent limit: a single point of multiplicity m
                    return points_configuration({{TowerScalar(), gm}});
                }
                if (gen_name == "projectivise") {
                    if (in_path.empty())
                        throw InputError("projectivise needs --in");
                    return isotropic_projectivisation(load_config(in_path));
                }
                throw InputError("unknown generator: " + gen_name);
            }();
            emit(config_to_json(c), out_path);
            return 0;
        }
        if (*psi) {
            Configuration c = load_config(in_path);
            json j;
            try {
                BAFunction f = berest_psi(c);
                j = ba_to_json(f);
                RationalFn u = potential_from_config(c, f.sp);
                bool ok = true;
                j["checks"] = json::object();
                std::stringstream ss(checks);
                std::string name;
                while (std::getline(ss, name, ',')) {
                    bool r;
                    if (name == "eigen") r = verify_eigen(f, u);
                    else if (name == "axioms") r = verify_ba_axioms(f, mode, seed);
                    else if (name == "symmetry") r = verify_symmetry(f);
                    else if (name == "bispectral") r = verify_bispectral(f);
                    else throw InputError("unknown check: " + name);
                    j["checks"][name] = r;
                    ok = ok && r;
                }
                emit(j, out_path);
                return ok ? 0 : 1;
            } catch (const NonTerminating& e) {
                j["error"] = "iteration does not terminate: not a locus configuration";
                j["excess"] = e.excess.str();
                emit(j, out_path);
                return 1;
            }
        }
        if (*integrals) {
            Configuration c = load_config(in_path);
            BAFunction f = berest_psi(c);
            RationalFn u = potential_from_config(c, f.sp);
            MultiPoly fk(f.sp.total());
            for (int i = 0; i < f.sp.nk; ++i) {
                MultiPoly k = MultiPoly::variable(f.sp.total(), f.sp.nx + i),
                          pw = k;
                for (int t = 1; t < ipow; ++t) pw = pw * k;
                fk = fk + pw;
            }
            json j;
            j["f"] = "sum k_i^" + std::to_string(ipow);
            j["quasi_invariant"] = is_quasi_invariant(fk, c);
            DiffOperator Lf = operator_from_ad_formula(u, fk);
            j["operator_order"] = Lf.order();
            RationalFn eig = Lf.apply_to_quasi(f.prefactor) -
                             RationalFn::from_poly(f.sp, fk) * f.prefactor;
            j["eigen"] = eig.is_zero();
            DiffOperator L = schrodinger_operator(u, Block::X);
            j["commutes"] = L.commutator(Lf).is_zero();
            emit(j, out_path);
            return j["quasi_invariant"].get<bool>() && j["eigen"].get<bool>() &&
                           j["commutes"].get<bool>()
                       ? 0
                       : 1;
        }
        if (*hadamard) {
            Configuration c = load_config(in_path);
            HuygensCertificate cert = huygens_certificate(c);
            emit(certificate_to_json(cert), out_path);
            return cert.chain_verified ? 0 : 1;
        }
        if (*onedim) {
            if (*am) {
                AdlerMoserData d = adler_moser(am_m, parse_scalar_list(am_constants));
                json j;
                j["m"] = d.m;
                j["chain"] = json::array();
                for (auto& chi : d.chain) j["chain"].push_back(chi.str());
                j["wronskian"] = d.W.str();
                j["u"] = d.u.str();
                emit(j, out_path);
                return 0;
            }
            if (*xi) {
                XiData d = ba_from_xi(xi_m, parse_scalar_list(xi_list));
                json j;
                j["m"] = d.m;
                j["a"] = json::array();
                for (auto& a : d.a) j["a"].push_back(a.str());
                j["u"] = d.u.str();
                j["schrodinger_verified"] = d.schrodinger_verified;
                emit(j, out_path);
                return 0;
            }
            TrigWronskianData d =
                berest_lutsenko(parse_int_list(bl_k), parse_cf_list(bl_theta), precision);
            json j = trig_to_json(d);
            if (!d.triangular)
                j["note"] = "root clustering is not triangular at this precision; "
                            "try a higher --precision";
            emit(j, out_path);
            return d.triangular ? 0 : 1;
        }
        if (*report) {
            std::cout << render_report(load_json(in_path));
            return 0;
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NonTerminating& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

int main(int argc, char** argv) { return run(argc, argv); }
