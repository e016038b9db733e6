#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "qpnkit/koszul.hpp"

using namespace qpnkit;

namespace {

Rationals Q;

template <Field F>
std::vector<GradedModuleMap<F>> truncation_chain(const F& f, const TruncationPresentation<F>& t)
{
    // split the presentation into two maps of free modules for homology checks
    auto rel_src = free_module<F>(t.nvars, t.module.rels.source);
    auto gens = free_module<F>(t.nvars, t.module.gens);
    std::vector<GradedModuleMap<F>> chain;
    chain.push_back(make_map(f, rel_src, gens, t.module.rels));
    chain.push_back(make_map(f, gens, t.ambient, t.inclusion.matrix));
    return chain;
}

/* indicator coordinates of the monomial p inside the degree-a piece of S(d) */
std::vector<Rationals::Elt> unit_value(const FPGradedModule<Rationals>& target, int a,
                                       const Monomial& p)
{
    std::vector<Rationals::Elt> v(free_component_dim(target.nvars, target.gens, a), Q.zero());
    v[monomial_index(p)] = Q.one();
    return v;
}

}  // namespace

TEST_CASE("truncation presentation labels and entries")
{
    auto t = truncation_presentation(Q, 1, 0, 1);
    CHECK(t.module.gens.twists == (std::vector<int>{0, 0}));
    REQUIRE(t.gen_labels.size() == 2);
    CHECK(render_monomial(t.gen_labels[0]) == "x0");
    CHECK(render_monomial(t.gen_labels[1]) == "x1");

    REQUIRE(t.rel_labels.size() == 1);
    CHECK(t.rel_labels[0].i == 0);
    CHECK(t.rel_labels[0].j == 1);
    CHECK(t.rel_labels[0].q.degree() == 0);
    CHECK(t.module.rels.source.twists == (std::vector<int>{-1}));
    // column carries -x1 at the x0-row and +x0 at the x1-row
    CHECK(hp_to_string(Q, t.module.rels.at(0, 0)) == "-x1");
    CHECK(hp_to_string(Q, t.module.rels.at(1, 0)) == "x0");

    CHECK(hp_to_string(Q, t.inclusion.matrix.at(0, 0)) == "x0");
    CHECK(hp_to_string(Q, t.inclusion.matrix.at(0, 1)) == "x1");
}

TEST_CASE("truncation at the edge and below")
{
    // a+d = 0: single generator, no relations
    auto t0 = truncation_presentation(Q, 2, -1, 1);
    CHECK(t0.module.gens.twists == (std::vector<int>{1}));
    CHECK(t0.module.rels.source.rank() == 0);
    CHECK(t0.gen_labels.size() == 1);
    CHECK(hp_to_string(Q, t0.inclusion.matrix.at(0, 0)) == "1");

    // a+d < 0: the truncation is the whole twist
    auto tw = truncation_presentation(Q, 1, 0, -1);
    CHECK(tw.whole_twist());
    CHECK(module_equal(Q, tw.module, tw.ambient));
    CHECK(tw.gen_labels.empty());
    auto iso = is_iso_window(Q, tw.inclusion, {-4, 4});
    CHECK(iso.iso);
}

TEST_CASE("truncation chains are exact on their window")
{
    PrimeField f7(7);
    for (std::size_t n = 1; n <= 2; ++n)
        for (int a = 0; a <= 2; ++a)
            for (int d = -1; d <= 2; ++d) {
                if (a + d < 0)
                    continue;
                auto tq = truncation_presentation(Q, n, a, d);
                CHECK(is_exact_window(Q, truncation_chain(Q, tq), {a - 1, a + 4}));
                auto tp = truncation_presentation(f7, n, a, d);
                CHECK(is_exact_window(f7, truncation_chain(f7, tp), {a - 1, a + 4}));
            }
}

TEST_CASE("truncation components match the ambient twist above the cut")
{
    auto t = truncation_presentation(Q, 2, 1, 1);
    for (int k = -2; k <= 5; ++k) {
        const std::size_t expect = k >= 1 ? monomial_count(3, k + 1) : 0;
        CHECK(component_dim(Q, t.module, k) == expect);
    }
    // the inclusion is an isomorphism at and above the cut, not below
    CHECK(is_iso_window(Q, t.inclusion, {1, 6}).iso);
    auto below = is_iso_window(Q, t.inclusion, {-1, 6});
    CHECK(!below.iso);
    CHECK(below.witness_degree == -1);
}

TEST_CASE("extending the tautological tuple gives the inclusion")
{
    auto t = truncation_presentation(Q, 1, 0, 1);
    SectionTuple<Rationals> tuple;
    tuple.a = 0;
    tuple.d = 1;
    for (const auto& p : t.gen_labels)
        tuple.values.push_back(unit_value(t.ambient, 0, p));
    auto map = phi_extend(Q, t, t.ambient, tuple);
    CHECK(gm_equal(Q, map.matrix, t.inclusion.matrix));
}

TEST_CASE("extending p -> p*x0 factors as inclusion then multiplication")
{
    auto t = truncation_presentation(Q, 1, 1, 1);
    auto target = free_module<Rationals>(2, GradedFree{{2}});
    SectionTuple<Rationals> tuple;
    tuple.a = 1;
    tuple.d = 1;
    for (const auto& p : t.gen_labels) {
        std::vector<Rationals::Elt> v(free_component_dim(2, target.gens, 1), Q.zero());
        v[monomial_index(mono_mul_var(p, 0))] = Q.one();
        tuple.values.push_back(v);
    }
    auto map = phi_extend(Q, t, target, tuple);
    for (std::size_t p = 0; p < t.gen_labels.size(); ++p) {
        auto expect = hp_monomial(Q, mono_mul_var(t.gen_labels[p], 0), Q.one());
        CHECK(hp_eq(Q, map.matrix.at(0, p), expect));
    }
}

TEST_CASE("incompatible tuples are rejected with a witness")
{
    auto t = truncation_presentation(Q, 1, 0, 1);
    SectionTuple<Rationals> tuple;
    tuple.a = 0;
    tuple.d = 1;
    // swap: send x0 to x1 and x1 to x0; then x0*m_{x1} = x0^2 != x1^2 = x1*m_{x0}
    tuple.values.push_back(unit_value(t.ambient, 0, t.gen_labels[1]));
    tuple.values.push_back(unit_value(t.ambient, 0, t.gen_labels[0]));
    try {
        phi_extend(Q, t, t.ambient, tuple);
        FAIL("expected a rejection");
    } catch (const IncompatibleTupleError& e) {
        CHECK(e.q_exponents == std::vector<std::uint32_t>{0, 0});
        CHECK(e.i == 0);
        CHECK(e.j == 1);
    }
}

TEST_CASE("recursive evaluation matches the base tuple and the matrix")
{
    auto t = truncation_presentation(Q, 1, 0, 1);
    SectionTuple<Rationals> tuple;
    tuple.a = 0;
    tuple.d = 1;
    for (const auto& p : t.gen_labels)
        tuple.values.push_back(unit_value(t.ambient, 0, p));

    // base case: the tuple itself
    for (std::size_t p = 0; p < t.gen_labels.size(); ++p) {
        auto v = evaluate_phi_recursive(Q, t, tuple, t.ambient, t.gen_labels[p]);
        CHECK(v == tuple.values[p]);
    }

    // x0^2*x1 realizes to its own coordinates in S(1), degree 2
    Monomial m{{2, 1}};
    auto v = evaluate_phi_recursive(Q, t, tuple, t.ambient, m);
    std::vector<Rationals::Elt> expect(free_component_dim(2, t.ambient.gens, 2), Q.zero());
    expect[monomial_index(m)] = Q.one();
    CHECK(v == expect);
}

TEST_CASE("recursive evaluation agrees with the extended matrix on random tuples")
{
    std::mt19937 rng(404);
    std::uniform_int_distribution<int> coef(-3, 3);
    PrimeField f7(7);

    auto run = [&](auto f, std::size_t n, int a, int d) {
        using FF = decltype(f);
        auto t = truncation_presentation(f, n, a, d);
        // target S(d+delta)^2; values m_p = coordinates of p*c_r per summand
        const int delta0 = 0, delta1 = 1;
        auto target =
            free_module<FF>(n + 1, GradedFree{{d + delta0, d + delta1}});
        std::vector<HomPoly<FF>> c;
        for (int delta : {delta0, delta1}) {
            auto poly = hp_zero<FF>(n + 1, delta);
            for (const auto& mono : enumerate_monomials(n + 1, delta))
                hp_add_term(f, poly, mono, f.from_int(coef(rng)));
            c.push_back(poly);
        }
        SectionTuple<FF> tuple;
        tuple.a = a;
        tuple.d = d;
        for (const auto& p : t.gen_labels) {
            std::vector<HomPoly<FF>> comps;
            for (const auto& cr : c)
                comps.push_back(hp_mul(f, hp_monomial(f, p, f.one()), cr));
            tuple.values.push_back(realize_element(f, n + 1, target.gens, comps, a));
        }
        auto map = phi_extend(f, t, target, tuple);

        for (int extra = 0; extra <= 3; ++extra) {
            const int k = a + extra;
            auto mons = enumerate_monomials(n + 1, k + d);
            auto realized = sp_to_dense(f, realize(f, map.matrix, k));
            const auto src_off = free_component_offsets(n + 1, t.module.gens, k);
            for (const auto& mono : mons) {
                // factor mono = u * p with u the recursion's peeled prefix
                Monomial rest = mono;
                Monomial u = mono_one(n + 1);
                for (int step = 0; step < extra; ++step) {
                    std::size_t s = 0;
                    while (rest.e[s] == 0)
                        ++s;
                    u = mono_mul_var(u, s);
                    rest = mono_div_var(rest, s);
                }
                const std::size_t col =
                    src_off[monomial_index(rest)] + monomial_index(u);
                auto rec = evaluate_phi_recursive(f, t, tuple, target, mono);
                REQUIRE(rec.size() == realized.rows);
                for (std::size_t r = 0; r < rec.size(); ++r)
                    CHECK(f.eq(rec[r], realized.at(r, col)));
            }
        }
    };

    run(Rationals{}, 1, 0, 1);
    run(Rationals{}, 2, 1, 0);
    run(f7, 2, 0, 2);
    run(f7, 1, 2, -1);
}

TEST_CASE("symmetric powers of free modules")
{
    for (std::size_t n = 0; n <= 3; ++n)
        for (int m = 0; m <= 4; ++m) {
            GradedFree f;
            f.twists.assign(n + 1, 0);
            auto s = sym_free(f, m);
            CHECK(s.free.rank() == monomial_count(n + 1, m));
            for (int tw : s.free.twists)
                CHECK(tw == 0);
        }

    GradedFree g{{2, -1, 0}};
    auto s0 = sym_free(g, 0);
    CHECK(s0.free.twists == std::vector<int>{0});
    auto s1 = sym_free(g, 1);
    CHECK(s1.free.twists == g.twists);

    // twist of a multiset is the sum of its members
    auto s2 = sym_free(GradedFree{{1, 3}}, 2);
    CHECK(s2.free.twists == (std::vector<int>{2, 4, 6}));
}

TEST_CASE("free-summand rank identity for symmetric powers")
{
    std::vector<int> fa{0, 2}, fb{1, -1, 0};
    for (int m = 0; m <= 4; ++m) {
        GradedFree joined;
        joined.twists = fa;
        joined.twists.insert(joined.twists.end(), fb.begin(), fb.end());
        auto whole = sym_free(joined, m);

        std::size_t total = 0;
        std::multiset<int> expected_twists;
        for (int p = 0; p <= m; ++p) {
            auto left = sym_free(GradedFree{fa}, p);
            auto right = sym_free(GradedFree{fb}, m - p);
            total += left.free.rank() * right.free.rank();
            for (int ta : left.free.twists)
                for (int tb : right.free.twists)
                    expected_twists.insert(ta + tb);
        }
        CHECK(whole.free.rank() == total);
        CHECK(std::multiset<int>(whole.free.twists.begin(), whole.free.twists.end()) ==
              expected_twists);
    }
}

TEST_CASE("symmetric powers of presented modules")
{
    // free input: matches the free construction
    auto fr = free_module<Rationals>(2, GradedFree{{0, -1}});
    auto s2 = sym_module(Q, fr, 2);
    CHECK(s2.rels.source.rank() == 0);
    CHECK(s2.gens.twists == sym_free(fr.gens, 2).free.twists);

    // Sym^1 is the identity
    GradedMatrix<Rationals> rel = gm_zero<Rationals>(2, GradedFree{{-1}}, GradedFree{{0}});
    rel.at(0, 0) = hp_var(Q, 0, 2);
    FPGradedModule<Rationals> mx;
    mx.nvars = 2;
    mx.gens = rel.target;
    mx.rels = rel;
    CHECK(module_equal(Q, sym_module(Q, mx, 1), mx));

    // Sym^2 of S/(x0) has the component dims of S/(x0)
    auto sq = sym_module(Q, mx, 2);
    for (int k = 0; k <= 6; ++k)
        CHECK(component_dim(Q, sq, k) == component_dim(Q, mx, k));

    // Sym^0 is the unit
    CHECK(module_equal(Q, sym_module(Q, mx, 0), free_module<Rationals>(2, GradedFree{{0}})));
}
