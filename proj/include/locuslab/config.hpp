#pragma once

// Hyperplane configurations: the data model, generators for the named
// families (Coxeter, deformed A_n(m), deformed C_{n+1}(m,l), dihedral),
// orthogonal unions, the isotropic projectivisation / reduction geometry,
// and JSON serialization.

#include <json.hpp>

#include <map>
#include <optional>
#include <random>
#include <string>

#include "locuslab/linalg.hpp"

namespace locuslab {

struct Hyperplane {
    Vec normal;
    TowerScalar offset;
    int multiplicity = 1;
};

struct Configuration {
    int dimension = 0;
    FieldTower tower;
    std::vector<Hyperplane> hyperplanes;

    bool is_linear() const {
        for (auto& h : hyperplanes)
            if (!h.offset.is_zero()) return false;
        return true;
    }
    int total_multiplicity() const {
        int M = 0;
        for (auto& h : hyperplanes) M += h.multiplicity;
        return M;
    }
};

inline std::string printed_normal(const Hyperplane& h) {
    std::string s;
    for (auto& c : h.normal) {
        if (!s.empty()) s += ",";
        s += c.str();
    }
    return s;
}

// validation + canonicalization: negative multiplicities are normalized via
// m -> -1-m, zero multiplicities dropped, duplicate hyperplanes merged when
// their multiplicities agree, hyperplane order fixed by printed normals
inline Configuration make_configuration(int dimension, std::vector<Hyperplane> hps,
                                        FieldTower tower = {}) {
    Configuration c;
    c.dimension = dimension;
    c.tower = std::move(tower);
    for (auto& h : hps) {
        if ((int)h.normal.size() != dimension)
            throw std::invalid_argument("hyperplane normal has wrong dimension");
        if (h.multiplicity < 0) h.multiplicity = -1 - h.multiplicity;
        if (h.multiplicity == 0) continue;
        bool zero = true;
        for (auto& x : h.normal) zero = zero && x.is_zero();
        if (zero) throw std::invalid_argument("zero normal");
        if (dot_vec(h.normal, h.normal).is_zero())
            throw std::invalid_argument("isotropic normal: (alpha,alpha) = 0");
        // same geometric hyperplane iff (normal, offset) pairs are proportional
        Vec ext = h.normal;
        ext.push_back(h.offset);
        bool merged = false;
        for (auto& g : c.hyperplanes) {
            Vec gext = g.normal;
            gext.push_back(g.offset);
            if (proportional(ext, gext)) {
                if (g.multiplicity != h.multiplicity)
                    throw std::invalid_argument(
                        "coinciding hyperplanes with different multiplicities");
                merged = true;
                break;
            }
        }
        if (merged) continue;
        for (auto& x : h.normal) c.tower.absorb(x);
        c.tower.absorb(h.offset);
        c.hyperplanes.push_back(std::move(h));
    }
    std::sort(c.hyperplanes.begin(), c.hyperplanes.end(),
              [](const Hyperplane& a, const Hyperplane& b) {
                  std::string pa = printed_normal(a), pb = printed_normal(b);
                  if (pa != pb) return pa < pb;
                  return a.offset.str() < b.offset.str();
              });
    return c;
}

// ---- generators --------------------------------------------------------

namespace detail {
inline Vec unit(int n, int i, TowerScalar c = TowerScalar(1L)) {
    Vec v(n);
    v[i] = std::move(c);
    return v;
}
}  // namespace detail

// p mirror lines through the origin at angles pi*j/p, j = 0..p-1; for even p
// the two mirror orbits may carry different multiplicities
inline Configuration make_dihedral(int p, std::vector<int> mults) {
    if (mults.empty()) throw std::invalid_argument("dihedral: need a multiplicity");
    auto mult_of = [&](int j) {
        if (p % 2 != 0 || mults.size() == 1) return mults[0];
        return mults[j % 2];
    };
    // exact tan(pi j/p) values; the line at angle t has normal (-tan t, 1),
    // or (1, 0) for the vertical line
    std::vector<std::optional<TowerScalar>> tans;  // nullopt = vertical
    TowerScalar r3 = TowerScalar::sqrt_int(3), r5 = TowerScalar::sqrt_int(5);
    switch (p) {
        case 2: tans = {TowerScalar(), std::nullopt}; break;
        case 3: tans = {TowerScalar(), r3, -r3}; break;
        case 4: tans = {TowerScalar(), TowerScalar(1L), std::nullopt, TowerScalar(-1L)}; break;
        case 5: {
            TowerScalar x = TowerScalar::sqrt_scalar(TowerScalar(5L) - TowerScalar(2L) * r5);
            TowerScalar y = x * (r5 + TowerScalar(2L));  // tan(2 pi/5)
            tans = {TowerScalar(), x, y, -y, -x};
            break;
        }
        case 6: {
            TowerScalar t = r3 * TowerScalar(Rational(1, 3));  // tan(pi/6)
            tans = {TowerScalar(), t, r3, std::nullopt, -r3, -t};
            break;
        }
        default:
            throw std::invalid_argument("dihedral: only p in {2,3,4,5,6} generated");
    }
    std::vector<Hyperplane> hps;
    for (int j = 0; j < p; ++j) {
        Vec nrm = tans[j] ? Vec{-(*tans[j]), TowerScalar(1L)} : Vec{TowerScalar(1L), TowerScalar()};
        hps.push_back({std::move(nrm), TowerScalar(), mult_of(j)});
    }
    return make_configuration(2, std::move(hps));
}

// standard root-hyperplane configurations; mults holds one multiplicity per
// mirror orbit (A/D: one, B/C: two)
inline Configuration make_coxeter(const std::string& family, int rank,
                                  std::vector<int> mults) {
    if (mults.empty()) throw std::invalid_argument("make_coxeter: need multiplicities");
    int n = rank;
    std::vector<Hyperplane> hps;
    auto e = [&](int dim, int i) { return detail::unit(dim, i); };
    if (family == "A") {
        // sum-zero presentation in C^{n+1}
        int d = n + 1;
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) {
                Vec v = e(d, i);
                v[j] = TowerScalar(-1L);
                hps.push_back({std::move(v), TowerScalar(), mults[0]});
            }
        return make_configuration(d, std::move(hps));
    }
    if (family == "B" || family == "C" || family == "D") {
        bool has_short = family != "D";
        if (has_short && mults.size() < 2)
            throw std::invalid_argument("make_coxeter: B/C need two multiplicities");
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                for (int s = 0; s < 2; ++s) {
                    Vec v = e(n, i);
                    v[j] = s ? TowerScalar(-1L) : TowerScalar(1L);
                    hps.push_back({std::move(v), TowerScalar(),
                                   family == "B" ? mults[1] : mults[0]});
                }
        if (family == "B")
            for (int i = 0; i < n; ++i) hps.push_back({e(n, i), TowerScalar(), mults[0]});
        if (family == "C")
            for (int i = 0; i < n; ++i)
                hps.push_back({detail::unit(n, i, TowerScalar(2L)), TowerScalar(), mults[1]});
        return make_configuration(n, std::move(hps));
    }
    throw std::invalid_argument("make_coxeter: unknown family " + family);
}

// A_n(m): e_i - e_j with multiplicity m (normalized if negative) and the n
// legs e_i - sqrt(m) e_{n+1} with multiplicity 1, in C^{n+1}
inline Configuration make_deformed_An(int n, int m) {
    if (m == 0) throw std::invalid_argument("A_n(m): m = 0 degenerates");
    int d = n + 1;
    TowerScalar rm = TowerScalar::sqrt_int(m);
    std::vector<Hyperplane> hps;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            Vec v = detail::unit(d, i);
            v[j] = TowerScalar(-1L);
            hps.push_back({std::move(v), TowerScalar(), m});
        }
    for (int i = 0; i < n; ++i) {
        Vec v = detail::unit(d, i);
        v[n] = -rm;
        hps.push_back({std::move(v), TowerScalar(), 1});
    }
    return make_configuration(d, std::move(hps));
}

// C_{n+1}(m,l): e_i +- e_j (mult k), 2e_i (mult m), 2 sqrt(k) e_{n+1} (mult l),
// e_i +- sqrt(k) e_{n+1} (mult 1), with k = (2m+1)/(2l+1); k must be an
// integer for n >= 2, arbitrary (possibly rational) for n = 1
inline Configuration make_deformed_Cn(int n, int m, int l) {
    Rational k(2 * m + 1, 2 * l + 1);
    if (n >= 2 && boost::multiprecision::denominator(k) != 1)
        throw std::invalid_argument("C_{n+1}(m,l): k = (2m+1)/(2l+1) not an integer");
    TowerScalar rk = TowerScalar::sqrt_rational(k);
    int d = n + 1;
    std::vector<Hyperplane> hps;
    int kmult = 0;
    if (boost::multiprecision::denominator(k) == 1)
        kmult = (int)boost::multiprecision::numerator(k).convert_to<long>();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int s = 0; s < 2; ++s) {
                Vec v = detail::unit(d, i);
                v[j] = s ? TowerScalar(-1L) : TowerScalar(1L);
                hps.push_back({std::move(v), TowerScalar(), kmult});
            }
    for (int i = 0; i < n; ++i)
        hps.push_back({detail::unit(d, i, TowerScalar(2L)), TowerScalar(), m});
    hps.push_back({detail::unit(d, n, TowerScalar(2L) * rk), TowerScalar(), l});
    for (int i = 0; i < n; ++i)
        for (int s = 0; s < 2; ++s) {
            Vec v = detail::unit(d, i);
            v[n] = s ? -rk : rk;
            hps.push_back({std::move(v), TowerScalar(), 1});
        }
    return make_configuration(d, std::move(hps));
}

// concatenation in the direct-sum space (spans are orthogonal by construction)
inline Configuration orthogonal_union(const Configuration& a, const Configuration& b) {
    int d = a.dimension + b.dimension;
    std::vector<Hyperplane> hps;
    for (auto& h : a.hyperplanes) {
        Vec v = h.normal;
        v.resize(d);
        hps.push_back({std::move(v), h.offset, h.multiplicity});
    }
    for (auto& h : b.hyperplanes) {
        Vec v(a.dimension);
        v.insert(v.end(), h.normal.begin(), h.normal.end());
        hps.push_back({std::move(v), h.offset, h.multiplicity});
    }
    FieldTower t = a.tower;
    t.merge(b.tower);
    return make_configuration(d, std::move(hps), std::move(t));
}

// each affine hyperplane (alpha, x) + c = 0 becomes the linear hyperplane in
// C^{n+2} with normal (alpha, c, ic); inner products of normals are preserved
inline Configuration isotropic_projectivisation(const Configuration& c) {
    int d = c.dimension + 2;
    std::vector<Hyperplane> hps;
    for (auto& h : c.hyperplanes) {
        Vec v = h.normal;
        v.push_back(h.offset);
        v.push_back(TowerScalar::imaginary() * h.offset);
        hps.push_back({std::move(v), TowerScalar(), h.multiplicity});
    }
    return make_configuration(d, std::move(hps), c.tower);
}

// ---- isotropic reduction ----------------------------------------------

struct ReductionResult {
    Configuration config;
    Mat frame;          // orthonormal basis of L (rows, ambient coordinates)
    Vec shift;          // the generic point a
    bool fallback_complement = false;  // deterministic basis completion used
};

inline ReductionResult isotropic_reduction(const Configuration& c,
                                           std::optional<Vec> shift_opt = std::nullopt) {
    if (!c.is_linear())
        throw std::invalid_argument("isotropic_reduction: input must be linear");
    int n = c.dimension;
    Mat N;
    for (auto& h : c.hyperplanes) N.push_back(h.normal);

    Mat V = rref(N);
    // kernel of the Gram form restricted to V
    Mat G;
    for (auto& v : V) {
        Vec row;
        for (auto& w : V) row.push_back(dot_vec(v, w));
        G.push_back(std::move(row));
    }
    Mat Kcoef = kernel_basis(G, (int)V.size());
    if (Kcoef.empty())
        throw std::domain_error("isotropic_reduction: Euclidean form on the span is "
                                "non-degenerate");
    Mat K;
    for (auto& co : Kcoef) {
        Vec v(n);
        for (size_t i = 0; i < V.size(); ++i)
            for (int j = 0; j < n; ++j) v[j] = v[j] + co[i] * V[i][j];
        K.push_back(std::move(v));
    }

    Mat W = V;
    for (auto& v : kernel_basis(N, n)) W.push_back(v);
    W = rref(W);

    // complement of K inside W: K is orthogonal to all of W (its vectors are
    // isotropic against both V and V-perp), so the orthogonal-complement
    // choice is always degenerate and we complete a basis deterministically
    Mat L;
    {
        Mat span = K;
        int r = rank(span);
        for (auto& w : W) {
            Mat trial = span;
            trial.push_back(w);
            int r2 = rank(trial);
            if (r2 > r) {
                span = std::move(trial);
                r = r2;
                L.push_back(w);
            }
        }
    }

    // orthonormalize L under the complex-bilinear form (non-degenerate on L)
    Mat frame;
    {
        Mat pending = L;
        int guard = 0;
        while (!pending.empty()) {
            if (++guard > 64)
                throw std::runtime_error("isotropic_reduction: orthonormalization failed");
            bool progressed = false;
            for (size_t i = 0; i < pending.size(); ++i) {
                Vec v = pending[i];
                for (auto& e : frame) {
                    TowerScalar p = dot_vec(v, e);
                    for (int j = 0; j < n; ++j) v[j] = v[j] - p * e[j];
                }
                TowerScalar nn = dot_vec(v, v);
                if (nn.is_zero()) continue;
                TowerScalar inv = TowerScalar::sqrt_scalar(nn).inverse();
                for (auto& x : v) x = x * inv;
                frame.push_back(std::move(v));
                pending.erase(pending.begin() + i);
                progressed = true;
                break;
            }
            if (!progressed) {
                // all residuals isotropic: mix the first two candidates
                if (pending.size() < 2)
                    throw std::runtime_error("isotropic_reduction: isotropic residual");
                for (int j = 0; j < n; ++j)
                    pending[0][j] = pending[0][j] + pending[1][j];
            }
        }
    }
    int dimL = (int)frame.size();

    // normalize the shift against K: requiring (kappa_i, a) = 1 for the rref
    // basis of K pins the scale the offsets inherit, making the reduction
    // inverse to the projectivisation up to a genuine Euclidean motion
    Mat Kr = rref(K);
    Vec ones(Kr.size(), TowerScalar(1L));
    auto a_part = solve(Kr, ones);
    if (!a_part) throw std::runtime_error("isotropic_reduction: shift normalization failed");
    Mat free_dirs = kernel_basis(Kr, n);

    std::mt19937 rng(20260823u);
    std::uniform_int_distribution<int> num(-9, 9), den(1, 4);
    for (int attempt = 0; attempt < 32; ++attempt) {
        Vec a;
        if (shift_opt && attempt == 0) a = *shift_opt;
        else {
            a = *a_part;
            for (auto& dir : free_dirs) {
                TowerScalar r(Rational(num(rng), den(rng)));
                for (int j = 0; j < n; ++j) a[j] = a[j] + r * dir[j];
            }
        }
        std::vector<Hyperplane> hps;
        bool ok = true;
        for (auto& h : c.hyperplanes) {
            Vec nrm;
            for (auto& e : frame) nrm.push_back(dot_vec(h.normal, e));
            bool zero = true;
            for (auto& x : nrm) zero = zero && x.is_zero();
            if (zero)
                throw std::domain_error("isotropic_reduction: a hyperplane is parallel to L");
            hps.push_back({std::move(nrm), dot_vec(h.normal, a), h.multiplicity});
        }
        // genericity: distinct hyperplanes must stay distinct in the chart
        for (size_t i = 0; ok && i < hps.size(); ++i)
            for (size_t j = i + 1; ok && j < hps.size(); ++j) {
                Vec ei = hps[i].normal, ej = hps[j].normal;
                ei.push_back(hps[i].offset);
                ej.push_back(hps[j].offset);
                if (proportional(ei, ej)) ok = false;
            }
        if (!ok) continue;
        ReductionResult out;
        out.config = make_configuration(dimL, std::move(hps), c.tower);
        out.frame = frame;
        out.shift = a;
        out.fallback_complement = true;
        return out;
    }
    throw std::runtime_error("isotropic_reduction: no generic shift found");
}

// ---- 2D decomposition --------------------------------------------------

struct PlaneDecomposition {
    struct Plane {
        Mat basis;                 // rref basis of the 2D (or 1D) span
        std::vector<int> members;  // hyperplane indices lying in it
    };
    std::vector<Plane> planes;
};

inline PlaneDecomposition two_dim_decomposition(const Configuration& c) {
    if (!c.is_linear())
        throw std::invalid_argument("two_dim_decomposition: linear configuration required");
    int K = (int)c.hyperplanes.size();
    PlaneDecomposition out;
    auto mat_less = [](const Mat& a, const Mat& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        for (size_t i = 0; i < a.size(); ++i)
            for (size_t j = 0; j < a[i].size(); ++j) {
                if (a[i][j] < b[i][j]) return true;
                if (b[i][j] < a[i][j]) return false;
            }
        return false;
    };
    std::map<Mat, std::vector<int>, decltype(mat_less)> classes(mat_less);
    for (int i = 0; i < K; ++i)
        for (int j = i + 1; j < K; ++j) {
            Mat span = rref({c.hyperplanes[i].normal, c.hyperplanes[j].normal});
            if (span.size() != 2) continue;  // proportional normals cannot occur
            if (classes.count(span)) continue;
            std::vector<int> members;
            for (int t = 0; t < K; ++t) {
                Mat trial = span;
                trial.push_back(c.hyperplanes[t].normal);
                if (rank(trial) == 2) members.push_back(t);
            }
            classes.emplace(std::move(span), std::move(members));
        }
    for (auto& [basis, members] : classes) out.planes.push_back({basis, members});
    if (out.planes.empty() && K == 1)
        out.planes.push_back({rref({c.hyperplanes[0].normal}), {0}});
    return out;
}

// ---- JSON --------------------------------------------------------------

inline nlohmann::json config_to_json(const Configuration& c) {
    nlohmann::json j;
    j["dimension"] = c.dimension;
    j["tower"] = nlohmann::json::array();
    for (auto& d : c.tower.radicands) j["tower"].push_back(d.convert_to<long long>());
    j["hyperplanes"] = nlohmann::json::array();
    for (auto& h : c.hyperplanes) {
        nlohmann::json hj;
        hj["normal"] = nlohmann::json::array();
        for (auto& x : h.normal) hj["normal"].push_back(x.str());
        hj["offset"] = h.offset.str();
        hj["multiplicity"] = h.multiplicity;
        j["hyperplanes"].push_back(std::move(hj));
    }
    return j;
}

inline Configuration config_from_json(const nlohmann::json& j) {
    int dim = j.at("dimension").get<int>();
    FieldTower tower;
    if (j.contains("tower"))
        for (auto& d : j.at("tower")) tower.add_reduced(Int(d.get<long long>()));
    std::vector<Hyperplane> hps;
    for (auto& hj : j.at("hyperplanes")) {
        Hyperplane h;
        for (auto& x : hj.at("normal")) h.normal.push_back(parse_scalar(x.get<std::string>()));
        h.offset = parse_scalar(hj.at("offset").get<std::string>());
        h.multiplicity = hj.at("multiplicity").get<int>();
        hps.push_back(std::move(h));
    }
    return make_configuration(dim, std::move(hps), std::move(tower));
}

}  // namespace locuslab
