#pragma once

#include <map>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

#include "hompoly.hpp"
#include "sparse.hpp"
#include "util.hpp"

namespace qpnkit {

struct DegreeWindow {
    int lo = 0;
    int hi = 0;
};

/* Finite direct sum of twists S(a_1) + ... + S(a_r); the summand S(a) has its
 * generator in degree -a and S(a)_k = S_{a+k}. */
struct GradedFree {
    std::vector<int> twists;

    std::size_t rank() const { return twists.size(); }

    bool operator==(const GradedFree&) const = default;
};

inline std::size_t free_component_dim(std::size_t nvars, const GradedFree& free, int k)
{
    std::size_t d = 0;
    for (int a : free.twists)
        d += monomial_count(nvars, k + a);
    return d;
}

/* Basis of a free component at one degree: summand-major, monomials of each
 * summand in enumeration order. */
inline std::vector<std::size_t> free_component_offsets(std::size_t nvars, const GradedFree& free, int k)
{
    std::vector<std::size_t> off(free.rank() + 1, 0);
    for (std::size_t i = 0; i < free.rank(); ++i)
        off[i + 1] = off[i] + monomial_count(nvars, k + free.twists[i]);
    return off;
}

/* Matrix of a degree-zero map between graded frees.  Entry (i, j) maps the
 * j-th source summand into the i-th target summand, so it is homogeneous of
 * degree target_twist_i - source_twist_j (and zero when that is negative). */
template <Field F>
struct GradedMatrix {
    std::size_t nvars = 0;
    GradedFree source;
    GradedFree target;
    std::vector<HomPoly<F>> e;  // row-major, target.rank() x source.rank()

    HomPoly<F>& at(std::size_t i, std::size_t j) { return e[i * source.rank() + j]; }
    const HomPoly<F>& at(std::size_t i, std::size_t j) const { return e[i * source.rank() + j]; }
};

template <Field F>
GradedMatrix<F> gm_zero(std::size_t nvars, GradedFree src, GradedFree dst)
{
    GradedMatrix<F> m;
    m.nvars = nvars;
    m.source = std::move(src);
    m.target = std::move(dst);
    m.e.reserve(m.source.rank() * m.target.rank());
    for (std::size_t i = 0; i < m.target.rank(); ++i)
        for (std::size_t j = 0; j < m.source.rank(); ++j)
            m.e.push_back(hp_zero<F>(nvars, m.target.twists[i] - m.source.twists[j]));
    return m;
}

/* Checked constructor: every entry must be homogeneous of the degree the
 * twists dictate. */
template <Field F>
GradedMatrix<F> make_graded_matrix(const F&, std::size_t nvars, GradedFree src, GradedFree dst,
                                   std::vector<HomPoly<F>> entries)
{
    GradedMatrix<F> m;
    m.nvars = nvars;
    m.source = std::move(src);
    m.target = std::move(dst);
    if (entries.size() != m.source.rank() * m.target.rank())
        throw Error(ErrorKind::usage_error, "matrix entry count does not match twist lists");
    m.e = std::move(entries);
    for (std::size_t i = 0; i < m.target.rank(); ++i)
        for (std::size_t j = 0; j < m.source.rank(); ++j) {
            const HomPoly<F>& p = m.at(i, j);
            const int want = m.target.twists[i] - m.source.twists[j];
            if (p.nvars != nvars)
                throw Error(ErrorKind::usage_error, "matrix entry over wrong variable count");
            if (!p.is_zero() && p.deg != want)
                throw Error(ErrorKind::ill_defined_map,
                            "entry (" + std::to_string(i) + "," + std::to_string(j) +
                                ") has degree " + std::to_string(p.deg) + ", twists demand " +
                                std::to_string(want));
        }
    return m;
}

template <Field F>
bool gm_equal(const F& f, const GradedMatrix<F>& a, const GradedMatrix<F>& b)
{
    if (a.nvars != b.nvars || !(a.source == b.source) || !(a.target == b.target))
        return false;
    for (std::size_t k = 0; k < a.e.size(); ++k)
        if (!hp_eq(f, a.e[k], b.e[k]))
            return false;
    return true;
}

template <Field F>
GradedMatrix<F> gm_mul(const F& f, const GradedMatrix<F>& g, const GradedMatrix<F>& h)
{
    if (!(h.target == g.source))
        throw Error(ErrorKind::usage_error, "matrix shapes do not compose");
    GradedMatrix<F> r = gm_zero<F>(g.nvars, h.source, g.target);
    for (std::size_t i = 0; i < g.target.rank(); ++i)
        for (std::size_t k = 0; k < g.source.rank(); ++k) {
            if (g.at(i, k).is_zero())
                continue;
            for (std::size_t j = 0; j < h.source.rank(); ++j)
                if (!h.at(k, j).is_zero())
                    r.at(i, j) = hp_add(f, r.at(i, j), hp_mul(f, g.at(i, k), h.at(k, j)));
        }
    return r;
}

/* Field matrix of the degree-k component of the map. */
template <Field F>
SparseMat<F> realize(const F& f, const GradedMatrix<F>& m, int k)
{
    const std::size_t nv = m.nvars;
    const auto src_off = free_component_offsets(nv, m.source, k);
    const auto dst_off = free_component_offsets(nv, m.target, k);
    SparseMat<F> out(dst_off.back(), src_off.back());

    std::map<int, std::vector<Monomial>> basis_cache;
    auto basis_of = [&](int deg) -> const std::vector<Monomial>& {
        auto it = basis_cache.find(deg);
        if (it == basis_cache.end())
            it = basis_cache.emplace(deg, enumerate_monomials(nv, deg)).first;
        return it->second;
    };

    for (std::size_t j = 0; j < m.source.rank(); ++j) {
        const auto& mons = basis_of(k + m.source.twists[j]);
        for (std::size_t u = 0; u < mons.size(); ++u) {
            const std::size_t colidx = src_off[j] + u;
            for (std::size_t i = 0; i < m.target.rank(); ++i) {
                const HomPoly<F>& entry = m.at(i, j);
                for (const auto& [mon, coef] : entry.terms)
                    out.add_entry(dst_off[i] + monomial_index(mono_mul(mon, mons[u])), colidx, coef);
            }
        }
    }
    return out;
}

/* Degree-k coordinates of a homogeneous element of a graded free module given
 * by one polynomial per summand. */
template <Field F>
std::vector<typename F::Elt> realize_element(const F& f, std::size_t nvars, const GradedFree& free,
                                             const std::vector<HomPoly<F>>& comps, int k)
{
    const auto off = free_component_offsets(nvars, free, k);
    std::vector<typename F::Elt> v(off.back(), f.zero());
    for (std::size_t i = 0; i < free.rank(); ++i)
        for (const auto& [mon, coef] : comps[i].terms) {
            if (mon.degree() != k + free.twists[i])
                throw Error(ErrorKind::usage_error, "element component off its degree");
            v[off[i] + monomial_index(mon)] = coef;
        }
    return v;
}

/* Coordinates at degree k mapped to degree k+1 by multiplication with x_i. */
template <Field F>
std::vector<typename F::Elt> apply_mult_var(const F& f, std::size_t nvars, const GradedFree& free,
                                            std::size_t var, int k,
                                            const std::vector<typename F::Elt>& coords)
{
    const auto off_lo = free_component_offsets(nvars, free, k);
    const auto off_hi = free_component_offsets(nvars, free, k + 1);
    std::vector<typename F::Elt> out(off_hi.back(), f.zero());
    for (std::size_t s = 0; s < free.rank(); ++s) {
        const auto mons = enumerate_monomials(nvars, k + free.twists[s]);
        for (std::size_t u = 0; u < mons.size(); ++u) {
            const auto& c = coords[off_lo[s] + u];
            if (f.is_zero(c))
                continue;
            const std::size_t row = off_hi[s] + monomial_index(mono_mul_var(mons[u], var));
            out[row] = f.add(out[row], c);
        }
    }
    return out;
}

/* Finitely presented graded module: cokernel of its relation matrix. */
template <Field F>
struct FPGradedModule {
    std::size_t nvars = 0;
    GradedFree gens;
    GradedMatrix<F> rels;  // rels.target == gens
};

template <Field F>
FPGradedModule<F> free_module(std::size_t nvars, GradedFree gens)
{
    FPGradedModule<F> m;
    m.nvars = nvars;
    m.gens = gens;
    m.rels = gm_zero<F>(nvars, GradedFree{}, std::move(gens));
    return m;
}

template <Field F>
bool module_equal(const F& f, const FPGradedModule<F>& a, const FPGradedModule<F>& b)
{
    return a.nvars == b.nvars && a.gens == b.gens && gm_equal(f, a.rels, b.rels);
}

template <Field F>
std::size_t component_dim(const F& f, const FPGradedModule<F>& m, int k)
{
    const std::size_t full = free_component_dim(m.nvars, m.gens, k);
    if (m.rels.source.rank() == 0)
        return full;
    return full - sp_rank(f, realize(f, m.rels, k));
}

template <Field F>
FPGradedModule<F> twist(FPGradedModule<F> m, int e)
{
    for (auto& a : m.gens.twists)
        a += e;
    for (auto& a : m.rels.target.twists)
        a += e;
    for (auto& a : m.rels.source.twists)
        a += e;
    // entry degrees are differences of twists, so the matrix data is unchanged
    return m;
}

template <Field F>
FPGradedModule<F> direct_sum(const F& f, const FPGradedModule<F>& a, const FPGradedModule<F>& b)
{
    if (a.nvars != b.nvars)
        throw Error(ErrorKind::usage_error, "direct sum over different rings");
    GradedFree gens;
    gens.twists = a.gens.twists;
    gens.twists.insert(gens.twists.end(), b.gens.twists.begin(), b.gens.twists.end());
    GradedFree rsrc;
    rsrc.twists = a.rels.source.twists;
    rsrc.twists.insert(rsrc.twists.end(), b.rels.source.twists.begin(), b.rels.source.twists.end());

    GradedMatrix<F> rels = gm_zero<F>(a.nvars, rsrc, gens);
    const std::size_t ra = a.gens.rank(), ca = a.rels.source.rank();
    for (std::size_t i = 0; i < ra; ++i)
        for (std::size_t j = 0; j < ca; ++j)
            rels.at(i, j) = a.rels.at(i, j);
    for (std::size_t i = 0; i < b.gens.rank(); ++i)
        for (std::size_t j = 0; j < b.rels.source.rank(); ++j)
            rels.at(ra + i, ca + j) = b.rels.at(i, j);
    (void)f;
    FPGradedModule<F> r;
    r.nvars = a.nvars;
    r.gens = rels.target;
    r.rels = std::move(rels);
    return r;
}

/* Tensor product of presentations: generators are pairs (left-major), and the
 * relations are rels_a (x) gens_b followed by gens_a (x) rels_b. */
template <Field F>
FPGradedModule<F> tensor(const F& f, const FPGradedModule<F>& a, const FPGradedModule<F>& b)
{
    if (a.nvars != b.nvars)
        throw Error(ErrorKind::usage_error, "tensor over different rings");
    const std::size_t ra = a.gens.rank(), rb = b.gens.rank();
    GradedFree gens;
    gens.twists.reserve(ra * rb);
    for (std::size_t i = 0; i < ra; ++i)
        for (std::size_t j = 0; j < rb; ++j)
            gens.twists.push_back(a.gens.twists[i] + b.gens.twists[j]);

    const std::size_t ca = a.rels.source.rank(), cb = b.rels.source.rank();
    GradedFree rsrc;
    rsrc.twists.reserve(ca * rb + ra * cb);
    for (std::size_t c = 0; c < ca; ++c)
        for (std::size_t j = 0; j < rb; ++j)
            rsrc.twists.push_back(a.rels.source.twists[c] + b.gens.twists[j]);
    for (std::size_t i = 0; i < ra; ++i)
        for (std::size_t c = 0; c < cb; ++c)
            rsrc.twists.push_back(a.gens.twists[i] + b.rels.source.twists[c]);

    GradedMatrix<F> rels = gm_zero<F>(a.nvars, rsrc, gens);
    for (std::size_t c = 0; c < ca; ++c)
        for (std::size_t j = 0; j < rb; ++j) {
            const std::size_t col = c * rb + j;
            for (std::size_t i = 0; i < ra; ++i)
                rels.at(i * rb + j, col) = a.rels.at(i, c);
        }
    for (std::size_t i = 0; i < ra; ++i)
        for (std::size_t c = 0; c < cb; ++c) {
            const std::size_t col = ca * rb + i * cb + c;
            for (std::size_t j = 0; j < rb; ++j)
                rels.at(i * rb + j, col) = b.rels.at(j, c);
        }
    (void)f;
    FPGradedModule<F> r;
    r.nvars = a.nvars;
    r.gens = rels.target;
    r.rels = std::move(rels);
    return r;
}

/* Map of finitely presented modules, given on generators.  Construction
 * verifies that every source relation lands in the span of the target
 * relations, degree by degree at the relevant degree. */
template <Field F>
struct GradedModuleMap {
    FPGradedModule<F> src;
    FPGradedModule<F> dst;
    GradedMatrix<F> matrix;  // src.gens -> dst.gens
};

template <Field F>
GradedModuleMap<F> make_map(const F& f, FPGradedModule<F> src, FPGradedModule<F> dst,
                            GradedMatrix<F> matrix)
{
    if (!(matrix.source == src.gens) || !(matrix.target == dst.gens))
        throw Error(ErrorKind::usage_error, "matrix shape does not match the given modules");
    const GradedMatrix<F> carried = gm_mul(f, matrix, src.rels);
    for (std::size_t j = 0; j < carried.source.rank(); ++j) {
        const int k = -carried.source.twists[j];
        std::vector<HomPoly<F>> comps;
        comps.reserve(carried.target.rank());
        for (std::size_t i = 0; i < carried.target.rank(); ++i)
            comps.push_back(carried.at(i, j));
        const auto v = realize_element(f, matrix.nvars, dst.gens, comps, k);
        bool nonzero = false;
        for (const auto& c : v)
            if (!f.is_zero(c)) {
                nonzero = true;
                break;
            }
        if (!nonzero)
            continue;
        SparseMat<F> rels_k = realize(f, dst.rels, k);
        SparseMat<F> joined(rels_k.rows, rels_k.cols + 1);
        joined.col = rels_k.col;
        joined.col.emplace_back();
        for (std::size_t i = 0; i < v.size(); ++i)
            if (!f.is_zero(v[i]))
                joined.col.back().emplace_back(static_cast<std::uint32_t>(i), v[i]);
        if (sp_rank(f, joined) != sp_rank(f, rels_k))
            throw Error(ErrorKind::ill_defined_map,
                        "image of relation " + std::to_string(j) +
                            " is not a relation of the target (degree " + std::to_string(k) + ")");
    }
    GradedModuleMap<F> r;
    r.src = std::move(src);
    r.dst = std::move(dst);
    r.matrix = std::move(matrix);
    return r;
}

template <Field F>
FPGradedModule<F> cokernel(const F& f, const GradedModuleMap<F>& map)
{
    GradedFree rsrc;
    rsrc.twists = map.dst.rels.source.twists;
    rsrc.twists.insert(rsrc.twists.end(), map.matrix.source.twists.begin(),
                       map.matrix.source.twists.end());
    GradedMatrix<F> rels = gm_zero<F>(map.dst.nvars, rsrc, map.dst.gens);
    const std::size_t c0 = map.dst.rels.source.rank();
    for (std::size_t i = 0; i < map.dst.gens.rank(); ++i) {
        for (std::size_t j = 0; j < c0; ++j)
            rels.at(i, j) = map.dst.rels.at(i, j);
        for (std::size_t j = 0; j < map.matrix.source.rank(); ++j)
            rels.at(i, c0 + j) = map.matrix.at(i, j);
    }
    (void)f;
    FPGradedModule<F> r;
    r.nvars = map.dst.nvars;
    r.gens = rels.target;
    r.rels = std::move(rels);
    return r;
}

template <Field F>
std::vector<std::pair<int, std::size_t>> hilbert_table(const F& f, const FPGradedModule<F>& m,
                                                       DegreeWindow w)
{
    std::vector<std::pair<int, std::size_t>> out;
    for (int k = w.lo; k <= w.hi; ++k)
        out.emplace_back(k, component_dim(f, m, k));
    return out;
}

/* Window that covers the generator degrees with one step of slack below and
 * a few above; the session layer uses this when no window is requested. */
inline DegreeWindow default_window(const GradedFree& gens)
{
    if (gens.twists.empty())
        return {0, 6};
    int lo = gens.twists[0], hi = gens.twists[0];
    for (int a : gens.twists) {
        lo = std::min(lo, a);
        hi = std::max(hi, a);
    }
    // generator of S(a) sits in degree -a
    return {-hi - 1, -lo + 6};
}

struct DegreeVerdict {
    int degree = 0;
    std::size_t dim_middle = 0;
    std::size_t dim_image = 0;
    std::size_t dim_kernel = 0;
    bool composite_zero = true;
    bool exact = true;
};

struct PositionReport {
    int position = 0;  // index of the middle object in the chain, 1-based
    std::vector<DegreeVerdict> rows;
};

struct ExactnessReport {
    DegreeWindow window;
    std::vector<PositionReport> positions;
    bool pass = true;
    std::optional<std::pair<int, int>> first_failure;  // (position, degree)
};

namespace detail {

template <Field F>
std::size_t quotient_map_rank(const F& f, const SparseMat<F>& mat, const SparseMat<F>& target_rels,
                              std::size_t target_rels_rank)
{
    if (target_rels.cols == 0)
        return sp_rank(f, mat);
    return sp_rank(f, sp_hstack(mat, target_rels)) - target_rels_rank;
}

}  // namespace detail

/* Homology check of a chain of maps over a degree window.  Every consecutive
 * pair is inspected at its middle object: the composite must vanish into the
 * target's relations and image dimension must match kernel dimension.  The
 * chain must be composable; mismatched middle presentations are misuse and
 * throw, while a nonzero composite or an image/kernel gap is an inexactness
 * verdict with the offending degree. */
template <Field F>
ExactnessReport exactness_report(const F& f, const std::vector<GradedModuleMap<F>>& maps,
                                 DegreeWindow w)
{
    if (maps.size() < 2)
        throw Error(ErrorKind::usage_error, "exactness needs at least two maps");
    for (std::size_t i = 0; i + 1 < maps.size(); ++i)
        if (!module_equal(f, maps[i].dst, maps[i + 1].src))
            throw NotComplexError(static_cast<int>(i + 1),
                                  "maps " + std::to_string(i) + " and " + std::to_string(i + 1) +
                                      " do not compose: middle presentations differ");

    ExactnessReport report;
    report.window = w;

    const int span = w.hi - w.lo + 1;
    if (span <= 0)
        return report;

    for (std::size_t p = 1; p < maps.size(); ++p) {
        const GradedModuleMap<F>& in = maps[p - 1];
        const GradedModuleMap<F>& out = maps[p];
        const GradedMatrix<F> composite = gm_mul(f, out.matrix, in.matrix);

        PositionReport pos;
        pos.position = static_cast<int>(p);
        pos.rows.resize(span);

        auto run_degree = [&](int idx) {
            const int k = w.lo + idx;
            DegreeVerdict v;
            v.degree = k;

            const SparseMat<F> mid_rels = realize(f, in.dst.rels, k);
            const std::size_t mid_rels_rank = mid_rels.cols == 0 ? 0 : sp_rank(f, mid_rels);
            v.dim_middle = free_component_dim(in.dst.nvars, in.dst.gens, k) - mid_rels_rank;

            const SparseMat<F> in_k = realize(f, in.matrix, k);
            v.dim_image = detail::quotient_map_rank(f, in_k, mid_rels, mid_rels_rank);

            const SparseMat<F> out_rels = realize(f, out.dst.rels, k);
            const std::size_t out_rels_rank = out_rels.cols == 0 ? 0 : sp_rank(f, out_rels);
            const SparseMat<F> out_k = realize(f, out.matrix, k);
            const std::size_t out_rank = detail::quotient_map_rank(f, out_k, out_rels, out_rels_rank);
            v.dim_kernel = v.dim_middle - out_rank;

            const SparseMat<F> comp_k = realize(f, composite, k);
            bool comp_nonzero = false;
            for (const auto& c : comp_k.col)
                if (!c.empty()) {
                    comp_nonzero = true;
                    break;
                }
            if (!comp_nonzero)
                v.composite_zero = true;
            else if (out_rels.cols == 0)
                v.composite_zero = false;
            else
                v.composite_zero =
                    sp_rank(f, sp_hstack(out_rels, comp_k)) == out_rels_rank;

            v.exact = v.composite_zero && v.dim_image == v.dim_kernel;
            pos.rows[idx] = v;
        };

        const unsigned workers = std::min<unsigned>(thread_budget(), static_cast<unsigned>(span));
        if (workers <= 1) {
            for (int idx = 0; idx < span; ++idx)
                run_degree(idx);
        } else {
            std::vector<std::thread> pool;
            pool.reserve(workers);
            for (unsigned t = 0; t < workers; ++t)
                pool.emplace_back([&, t] {
                    for (int idx = static_cast<int>(t); idx < span; idx += static_cast<int>(workers))
                        run_degree(idx);
                });
            for (auto& th : pool)
                th.join();
        }

        for (const auto& v : pos.rows)
            if (!v.exact && report.pass) {
                report.pass = false;
                report.first_failure = {pos.position, v.degree};
            }
        report.positions.push_back(std::move(pos));
    }
    return report;
}

template <Field F>
bool is_exact_window(const F& f, const std::vector<GradedModuleMap<F>>& maps, DegreeWindow w)
{
    return exactness_report(f, maps, w).pass;
}

struct IsoReport {
    bool iso = true;
    std::optional<int> witness_degree;
};

template <Field F>
IsoReport is_iso_window(const F& f, const GradedModuleMap<F>& map, DegreeWindow w)
{
    IsoReport report;
    for (int k = w.lo; k <= w.hi; ++k) {
        const SparseMat<F> src_rels = realize(f, map.src.rels, k);
        const std::size_t src_rels_rank = src_rels.cols == 0 ? 0 : sp_rank(f, src_rels);
        const std::size_t dim_src = free_component_dim(map.src.nvars, map.src.gens, k) - src_rels_rank;

        const SparseMat<F> dst_rels = realize(f, map.dst.rels, k);
        const std::size_t dst_rels_rank = dst_rels.cols == 0 ? 0 : sp_rank(f, dst_rels);
        const std::size_t dim_dst = free_component_dim(map.dst.nvars, map.dst.gens, k) - dst_rels_rank;

        const SparseMat<F> m_k = realize(f, map.matrix, k);
        const std::size_t rank = detail::quotient_map_rank(f, m_k, dst_rels, dst_rels_rank);
        if (rank != dim_src || rank != dim_dst) {
            report.iso = false;
            report.witness_degree = k;
            return report;
        }
    }
    return report;
}

}  // namespace qpnkit
