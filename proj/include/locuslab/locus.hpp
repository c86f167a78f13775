#pragma once

// Decision procedures for the linear and affine locus equations, the 2D
// decomposition cross-check, the large-multiplicity Coxeter check, and the
// affine structure check (intersection points + parallel classes).

#include <set>

#include "locuslab/config.hpp"
#include "locuslab/ratfn.hpp"

namespace locuslab {

struct LocusReport {
    struct Item {
        int hyperplane = 0;
        int j = 0;
        RationalFn residual;
        bool zero = false;
        std::string mode;
    };
    bool pass = true;
    std::vector<Item> items;
};

inline nlohmann::json locus_report_to_json(const LocusReport& r) {
    nlohmann::json j;
    j["pass"] = r.pass;
    j["items"] = nlohmann::json::array();
    for (auto& it : r.items) {
        nlohmann::json ij;
        ij["hyperplane"] = it.hyperplane;
        ij["j"] = it.j;
        ij["residual"] = it.zero ? "0" : it.residual.str();
        ij["mode"] = it.mode;
        j["items"].push_back(std::move(ij));
    }
    return j;
}

namespace detail {

inline LinearForm hyperplane_form(const Hyperplane& h) {
    return LinearForm(Block::X, h.normal, h.offset);
}

// locus equations for the sub-configuration given by `subset`: for each
// alpha in the subset and j = 1..m_alpha, the sum
//   sum_{beta != alpha} m_b(m_b+1)(beta,beta)(alpha,beta)^{2j-1} / ((beta,x)+c_b)^{2j+1}
// restricted to (alpha,x)+c_a = 0 must vanish
inline LocusReport verify_subset(const Configuration& c, const std::vector<int>& subset,
                                 const std::string& mode, std::uint64_t seed,
                                 const std::vector<int>* targets = nullptr) {
    VarSpace sp{c.dimension, 0};
    LocusReport rep;
    for (int a : targets ? *targets : subset) {
        const Hyperplane& ha = c.hyperplanes[a];
        LinearForm fa = hyperplane_form(ha);
        for (int j = 1; j <= ha.multiplicity; ++j) {
            RationalFn sum(sp);
            for (int b : subset) {
                if (b == a) continue;
                const Hyperplane& hb = c.hyperplanes[b];
                TowerScalar ab = dot_vec(ha.normal, hb.normal);
                if (ab.is_zero()) continue;
                TowerScalar coeff =
                    TowerScalar(long(hb.multiplicity) * (hb.multiplicity + 1)) *
                    dot_vec(hb.normal, hb.normal);
                for (int t = 0; t < 2 * j - 1; ++t) coeff = coeff * ab;
                sum = sum + RationalFn::constant(sp, coeff)
                                .divide_by_form(hyperplane_form(hb), 2 * j + 1);
            }
            LocusReport::Item item;
            item.hyperplane = a;
            item.j = j;
            item.residual = restrict_to_hyperplane(sum, fa);
            auto z = is_zero(item.residual, mode, seed + 1000003u * a + j);
            item.zero = z.zero;
            item.mode = z.mode;
            rep.pass = rep.pass && item.zero;
            rep.items.push_back(std::move(item));
        }
    }
    return rep;
}

inline std::vector<int> all_indices(const Configuration& c) {
    std::vector<int> v(c.hyperplanes.size());
    for (size_t i = 0; i < v.size(); ++i) v[i] = (int)i;
    return v;
}

}  // namespace detail

inline LocusReport verify_affine_locus(const Configuration& c,
                                       const std::string& mode = "exact",
                                       std::uint64_t seed = 0) {
    return detail::verify_subset(c, detail::all_indices(c), mode, seed);
}

inline LocusReport verify_linear_locus(const Configuration& c,
                                       const std::string& mode = "exact",
                                       std::uint64_t seed = 0) {
    if (!c.is_linear())
        throw std::invalid_argument("verify_linear_locus: configuration has offsets");
    return verify_affine_locus(c, mode, seed);
}

// Theorem-4.1 route: run the locus equations inside every 2D subsystem
inline LocusReport verify_via_2d_decomposition(const Configuration& c,
                                               const std::string& mode = "exact",
                                               std::uint64_t seed = 0) {
    if (!c.is_linear())
        throw std::invalid_argument("verify_via_2d_decomposition: linear input required");
    auto dec = two_dim_decomposition(c);
    LocusReport rep;
    for (auto& plane : dec.planes) {
        if (plane.members.size() < 2) continue;
        LocusReport sub = detail::verify_subset(c, plane.members, mode, seed);
        rep.pass = rep.pass && sub.pass;
        for (auto& it : sub.items) rep.items.push_back(std::move(it));
    }
    return rep;
}

// ---- Theorem 4.2: large multiplicities form a Coxeter subsystem --------

struct CoxeterCheckReport {
    bool pass = true;
    std::vector<int> large;          // indices with large multiplicity
    std::string counterexample;      // set if some reflection fails
};

// beta has large multiplicity when every 2D plane through it contains at
// most m_beta + 1 distinct normals; `count_beta_itself` toggles whether beta
// is included in that count (both readings of the definition)
inline CoxeterCheckReport large_multiplicity_coxeter_check(const Configuration& c,
                                                           bool count_beta_itself = true) {
    if (!c.is_linear())
        throw std::invalid_argument("large_multiplicity_coxeter_check: linear input required");
    auto dec = two_dim_decomposition(c);
    CoxeterCheckReport rep;
    int K = (int)c.hyperplanes.size();
    for (int b = 0; b < K; ++b) {
        bool large = true;
        for (auto& plane : dec.planes) {
            bool contains = false;
            for (int m : plane.members) contains = contains || m == b;
            if (!contains) continue;
            int count = (int)plane.members.size() - (count_beta_itself ? 0 : 1);
            if (count > c.hyperplanes[b].multiplicity + 1) large = false;
        }
        if (large) rep.large.push_back(b);
    }
    // each reflection s_beta must permute the configuration with multiplicities
    for (int b : rep.large) {
        const Vec& beta = c.hyperplanes[b].normal;
        TowerScalar bb_inv = dot_vec(beta, beta).inverse();
        for (int g = 0; g < K; ++g) {
            const Hyperplane& hg = c.hyperplanes[g];
            TowerScalar f = TowerScalar(2L) * dot_vec(beta, hg.normal) * bb_inv;
            Vec img = hg.normal;
            for (int t = 0; t < c.dimension; ++t) img[t] = img[t] - f * beta[t];
            bool found = false;
            for (auto& h : c.hyperplanes)
                if (h.multiplicity == hg.multiplicity && proportional(img, h.normal))
                    found = true;
            if (!found) {
                rep.pass = false;
                rep.counterexample = "reflection in hyperplane " + std::to_string(b) +
                                     " does not preserve hyperplane " + std::to_string(g);
            }
        }
    }
    return rep;
}

// ---- Theorem 5.6: affine structure check -------------------------------

struct StructureReport {
    bool pass = true;
    int flats_checked = 0;
    int parallel_classes_checked = 0;
    std::vector<std::string> notes;
};

inline StructureReport structure_check_affine(const Configuration& c,
                                              const std::string& mode = "exact",
                                              std::uint64_t seed = 0) {
    int n = c.dimension;
    int K = (int)c.hyperplanes.size();
    StructureReport rep;

    // (1) intersection flats of pairs: the hyperplanes containing such a flat
    // pass through a common (generic) point and must form a linear locus
    // configuration there
    std::set<std::vector<int>> seen;
    for (int i = 0; i < K; ++i)
        for (int j = i + 1; j < K; ++j) {
            Mat A = {c.hyperplanes[i].normal, c.hyperplanes[j].normal};
            Vec rhs = {-c.hyperplanes[i].offset, -c.hyperplanes[j].offset};
            auto p0 = solve(A, rhs);
            if (!p0) continue;  // parallel, no intersection
            Mat dirs = kernel_basis(A, n);
            std::vector<int> through;
            for (int t = 0; t < K; ++t) {
                const Hyperplane& h = c.hyperplanes[t];
                if (!(dot_vec(h.normal, *p0) + h.offset).is_zero()) continue;
                bool tangent = true;
                for (auto& d : dirs) tangent = tangent && dot_vec(h.normal, d).is_zero();
                if (tangent) through.push_back(t);
            }
            if (through.size() < 2 || seen.count(through)) continue;
            seen.insert(through);
            // translate to the flat: the linear sub-configuration of normals
            std::vector<Hyperplane> sub;
            for (int t : through)
                sub.push_back({c.hyperplanes[t].normal, TowerScalar(),
                               c.hyperplanes[t].multiplicity});
            Configuration lin = make_configuration(n, std::move(sub), c.tower);
            LocusReport lr = verify_linear_locus(lin, mode, seed + 7919u * i + j);
            ++rep.flats_checked;
            if (!lr.pass) {
                rep.pass = false;
                rep.notes.push_back("linear locus fails at an intersection flat of hyperplanes " +
                                    std::to_string(i) + "," + std::to_string(j));
            }
        }

    // (2) parallel classes induce 1D affine configurations along the normal
    std::vector<bool> used(K, false);
    for (int i = 0; i < K; ++i) {
        if (used[i]) continue;
        std::vector<int> cls = {i};
        used[i] = true;
        for (int j = i + 1; j < K; ++j)
            if (!used[j] && proportional(c.hyperplanes[i].normal, c.hyperplanes[j].normal)) {
                cls.push_back(j);
                used[j] = true;
            }
        if (cls.size() < 2) continue;
        // positions along the unit normal direction: (alpha0, x) + c'_k = 0
        // becomes the 1D hyperplane sqrt((a0,a0)) * t + c'_k = 0
        const Vec& a0 = c.hyperplanes[i].normal;
        TowerScalar len = TowerScalar::sqrt_scalar(dot_vec(a0, a0));
        int p = 0;
        while (a0[p].is_zero()) ++p;
        std::vector<Hyperplane> pts;
        for (int t : cls) {
            const Hyperplane& h = c.hyperplanes[t];
            TowerScalar lam = h.normal[p] * a0[p].inverse();
            pts.push_back({{len}, h.offset * lam.inverse(), h.multiplicity});
        }
        Configuration one = make_configuration(1, std::move(pts), c.tower);
        LocusReport lr = verify_affine_locus(one, mode, seed + 31u * i);
        ++rep.parallel_classes_checked;
        if (!lr.pass) {
            rep.pass = false;
            rep.notes.push_back("1D affine locus fails for the parallel class of hyperplane " +
                                std::to_string(i));
        }
    }
    return rep;
}

}  // namespace locuslab
