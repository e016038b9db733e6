#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qpnkit/functor.hpp"

using namespace qpnkit;

namespace {

Rationals Q;

TElt<Rationals> tp(std::initializer_list<int> ascending)
{
    TElt<Rationals> e;
    for (int v : ascending)
        e.c.push_back(Q.from_int(v));
    while (!e.c.empty() && e.c.back() == 0)
        e.c.pop_back();
    return e;
}

TElt<Rationals> tv(std::initializer_list<int> coords)
{
    TElt<Rationals> e;
    for (int v : coords)
        e.c.push_back(Q.from_int(v));
    return e;
}

std::vector<Rationals::Elt> qvec(std::initializer_list<int> vals)
{
    std::vector<Rationals::Elt> v;
    for (int x : vals)
        v.push_back(Q.from_int(x));
    return v;
}

/* (Q[t], (1, t)), the running good example. */
SectionData<Rationals> sd_one_t()
{
    return make_sections(make_univariate_target(Q), {tp({1}), tp({0, 1})});
}

SectionData<Rationals> sd_field(std::initializer_list<int> vals)
{
    std::vector<TElt<Rationals>> s;
    for (int v : vals)
        s.push_back(tv({v}));
    return make_sections(make_field_target(Q), std::move(s));
}

/* coker(x_i : S(-1) -> S(0)) over nv variables. */
template <Field F>
FPGradedModule<F> mod_xi(const F& f, std::size_t nv, std::size_t i)
{
    GradedMatrix<F> rel = gm_zero<F>(nv, GradedFree{{-1}}, GradedFree{{0}});
    rel.at(0, 0) = hp_var(f, i, nv);
    FPGradedModule<F> m;
    m.nvars = nv;
    m.gens = rel.target;
    m.rels = std::move(rel);
    return m;
}

template <Field F>
TElt<F> random_telt(const F& f, std::mt19937& rng, int maxdeg)
{
    std::uniform_int_distribution<int> deg(0, maxdeg);
    std::uniform_int_distribution<int> coef(0, 6);
    TElt<F> e;
    int d = deg(rng);
    for (int i = 0; i <= d; ++i)
        e.c.push_back(f.from_int(coef(rng)));
    while (!e.c.empty() && f.is_zero(e.c.back()))
        e.c.pop_back();
    return e;
}

/* Random homogeneous matrix between free modules; entries of negative
 * required degree stay zero. */
template <Field F>
GradedModuleMap<F> random_free_map(const F& f, std::mt19937& rng, std::size_t nv,
                                   GradedFree src, GradedFree dst)
{
    std::uniform_int_distribution<int> coef(0, 6);
    GradedMatrix<F> m = gm_zero<F>(nv, src, dst);
    for (std::size_t i = 0; i < dst.rank(); ++i)
        for (std::size_t j = 0; j < src.rank(); ++j) {
            int deg = dst.twists[i] - src.twists[j];
            if (deg < 0)
                continue;
            HomPoly<F> p = hp_zero<F>(nv, deg);
            for (const Monomial& mono : enumerate_monomials(nv, deg))
                hp_add_term(f, p, mono, f.from_int(coef(rng)));
            m.at(i, j) = std::move(p);
        }
    return make_map(f, free_module<F>(nv, src), free_module<F>(nv, dst), std::move(m));
}

}  // namespace

TEST_CASE("good-epi verdicts with certificates")
{
    SECTION("unit section")
    {
        auto v = check_good_epi(sd_one_t());
        CHECK(v.epi);
        CHECK(v.middle_exact);
        CHECK(v.good());
        REQUIRE(v.bezout.size() == 2);
        CHECK(t_eq(sd_one_t().ring, v.bezout[0], tp({1})));
        CHECK(t_eq(sd_one_t().ring, v.bezout[1], tp({})));
    }

    SECTION("common factor t")
    {
        auto sd = make_sections(make_univariate_target(Q), {tp({0, 1}), tp({0, 0, 1})});
        auto v = check_good_epi(sd);
        CHECK_FALSE(v.epi);
        REQUIRE(v.gcd_witness.has_value());
        CHECK(up_to_string(Q, *v.gcd_witness) == "t");
        CHECK_FALSE(v.good());
    }

    SECTION("zero sections over a field")
    {
        auto v = check_good_epi(sd_field({0, 0}));
        CHECK_FALSE(v.epi);
        CHECK_FALSE(v.note.empty());
    }

    SECTION("field point")
    {
        auto sd = sd_field({3, 4, 5});
        auto v = check_good_epi(sd);
        CHECK(v.epi);
        CHECK(v.middle_exact);
        TElt<Rationals> sum = t_zero(sd.ring);
        for (std::size_t i = 0; i < 3; ++i)
            sum = t_add(sd.ring, sum, t_mul(sd.ring, v.bezout[i], sd.sections[i]));
        CHECK(t_eq(sd.ring, sum, t_one(sd.ring)));
    }

    SECTION("structure-constant target")
    {
        auto alg = make_findim_target(Q, 2, qvec({1, 0, 0, 1, 0, 1, 1, 0}), qvec({1, 0}));
        auto sd = make_sections(alg, {tv({1, 1}), tv({1, -1})});
        auto v = check_good_epi(sd);
        CHECK(v.epi);
        CHECK(v.middle_exact);
        TElt<Rationals> sum = t_zero(alg);
        for (std::size_t i = 0; i < 2; ++i)
            sum = t_add(alg, sum, t_mul(alg, v.bezout[i], sd.sections[i]));
        CHECK(t_eq(alg, sum, t_one(alg)));

        // both sections vanish at u = 1 jointly scaled: (1+u)*(u-1) spans a proper ideal
        auto bad = make_sections(alg, {tv({1, 1}), tv({2, 2})});
        CHECK_FALSE(check_good_epi(bad).epi);
    }

    SECTION("epi implies middle-exact on random unit-gcd tuples")
    {
        PrimeField f7(7);
        auto kt = make_univariate_target(f7);
        std::mt19937 rng(101);
        std::uniform_int_distribution<int> count(2, 4);
        int accepted = 0;
        for (int trial = 0; trial < 60; ++trial) {
            std::vector<TElt<PrimeField>> s;
            int m = count(rng);
            for (int i = 0; i < m; ++i)
                s.push_back(random_telt(f7, rng, 2));
            auto sd = make_sections(kt, std::move(s));
            auto v = check_good_epi(sd);
            if (!v.epi) {
                CHECK(v.bezout.empty());
                continue;
            }
            ++accepted;
            CHECK(v.middle_exact);
            TElt<PrimeField> sum = t_zero(kt);
            for (std::size_t i = 0; i < sd.sections.size(); ++i)
                sum = t_add(kt, sum, t_mul(kt, v.bezout[i], sd.sections[i]));
            CHECK(t_eq(kt, sum, t_one(kt)));
        }
        CHECK(accepted >= 20);
    }
}

TEST_CASE("evaluation on objects")
{
    auto sd = sd_one_t();

    auto free1 = evaluate_object(sd, free_module<Rationals>(2, GradedFree{{-3}}));
    CHECK(free1.rank == 1);
    CHECK(free1.rels.cols == 0);

    // S/(x0) dies: the relation becomes the unit
    auto killed = evaluate_object(sd, mod_xi(Q, 2, 0));
    auto kcls = univariate_class(sd.ring, killed);
    CHECK(kcls.free_rank == 0);
    CHECK(kcls.torsion.empty());

    // S/(x1) becomes Q[t]/(t)
    auto cyc = evaluate_object(sd, mod_xi(Q, 2, 1));
    auto ccls = univariate_class(sd.ring, cyc);
    CHECK(ccls.free_rank == 0);
    REQUIRE(ccls.torsion.size() == 1);
    CHECK(up_to_string(Q, ccls.torsion[0]) == "t");
}

TEST_CASE("evaluation on maps")
{
    auto sd = sd_one_t();

    SECTION("identity and zero")
    {
        auto m = mod_xi(Q, 2, 1);
        auto idmat = gm_zero<Rationals>(2, m.gens, m.gens);
        idmat.at(0, 0) = hp_const(Q, 2, Q.one());
        auto id = make_map(Q, m, m, idmat);
        auto ev = evaluate_map(sd, id);
        CHECK(tm_equal(sd.ring, ev.matrix, tm_identity(sd.ring, 1)));
        CHECK(tmap_bijective(sd.ring, ev));

        auto zero = make_map(Q, m, m, gm_zero<Rationals>(2, m.gens, m.gens));
        CHECK(t_is_zero(sd.ring, evaluate_map(sd, zero).matrix.at(0, 0)));
    }

    SECTION("truncation inclusion in degree zero")
    {
        auto pres = truncation_presentation(Q, 1, 0, 1);
        auto ev = evaluate_map(sd, pres.inclusion);
        CHECK(ev.src.rank == 2);
        CHECK(ev.dst.rank == 1);
        // generators x0, x1 of the truncation map to their section values
        CHECK(t_eq(sd.ring, ev.matrix.at(0, 0), tp({1})));
        CHECK(t_eq(sd.ring, ev.matrix.at(0, 1), tp({0, 1})));
        // the single Koszul relation becomes (-t, 1)
        CHECK(t_eq(sd.ring, ev.src.rels.at(0, 0), tp({0, -1})));
        CHECK(t_eq(sd.ring, ev.src.rels.at(1, 0), tp({1})));
        CHECK(tmap_bijective(sd.ring, ev));
    }
}

TEST_CASE("truncation inclusions become isomorphisms exactly for good sections")
{
    CHECK(check_truncation_iso(sd_one_t(), 1, 0));
    CHECK(check_truncation_iso(sd_one_t(), -4, 2));  // a + d < 0, identity inclusion
    CHECK(check_truncation_iso(sd_one_t(), 0, 1));   // the reduction target (d, a) = (0, 1)

    auto bad = make_sections(make_univariate_target(Q), {tp({0, 1}), tp({0, 0, 1})});
    CHECK_THROWS_AS(check_truncation_iso(bad, 1, 0), Error);

    for (int d = -2; d <= 2; ++d)
        for (int a = -2; a <= 2; ++a)
            CHECK(check_truncation_iso(sd_one_t(), d, a));

    // a good random tuple over GF(7)[t] in two variables
    PrimeField f7(7);
    auto kt = make_univariate_target(f7);
    TElt<PrimeField> s0{{1, 2}};  // 2t + 1
    TElt<PrimeField> s1{{0, 0, 1}};
    auto sd7 = make_sections(kt, {s0, s1});
    REQUIRE(check_good_epi(sd7).good());
    for (int d = -1; d <= 1; ++d)
        for (int a = -1; a <= 1; ++a)
            CHECK(check_truncation_iso(sd7, d, a));

    // field target: three sections, projective plane
    for (int d = -1; d <= 1; ++d)
        for (int a = -1; a <= 1; ++a)
            CHECK(check_truncation_iso(sd_field({3, 4, 5}), d, a));
}

TEST_CASE("monoidality of evaluation")
{
    auto sd = sd_one_t();

    auto s1 = free_module<Rationals>(2, GradedFree{{1}});
    CHECK(check_monoidality(sd, s1, s1));
    CHECK(check_monoidality(sd, free_module<Rationals>(2, GradedFree{{-2}}),
                            free_module<Rationals>(2, GradedFree{{2}})));

    auto m = mod_xi(Q, 2, 1);
    CHECK(check_monoidality(sd, m, m));
    CHECK(check_monoidality(sd, m, mod_xi(Q, 2, 0)));
    CHECK(check_monoidality(sd, m, s1));

    PrimeField f7(7);
    auto kt = make_univariate_target(f7);
    auto sd7 = make_sections(kt, {TElt<PrimeField>{{1, 2}}, TElt<PrimeField>{{0, 0, 1}}});
    std::mt19937 rng(55);
    for (int trial = 0; trial < 8; ++trial) {
        auto f1 = random_free_map(f7, rng, 2, GradedFree{{-1, -2}}, GradedFree{{0, -1}});
        auto f2 = random_free_map(f7, rng, 2, GradedFree{{-2}}, GradedFree{{0, 1}});
        CHECK(check_monoidality(sd7, cokernel(f7, f1), cokernel(f7, f2)));
    }
}

TEST_CASE("morphism reconstruction")
{
    SECTION("global unit gives a single chart")
    {
        auto sd = sd_one_t();
        auto cm = reconstruct_morphism(sd);
        REQUIRE(cm.charts.size() == 1);
        CHECK(cm.charts[0].index == 0);
        REQUIRE(cm.charts[0].coords.size() == 2);
        CHECK(t_eq(sd.ring, cm.charts[0].coords[1].first, tp({0, 1})));
        CHECK(t_eq(sd.ring, cm.charts[0].coords[1].second, tp({1})));
        REQUIRE(cm.cover_certificate.size() == 2);
        CHECK(t_eq(sd.ring, cm.cover_certificate[0], tp({1})));
        CHECK(t_eq(sd.ring, cm.cover_certificate[1], tp({})));
    }

    SECTION("field target is a point")
    {
        auto sd = sd_field({3, 4, 5});
        auto cm = reconstruct_morphism(sd);
        REQUIRE(cm.charts.size() == 1);
        CHECK(cm.charts[0].index == 0);
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(t_eq(sd.ring, cm.charts[0].coords[j].first, sd.sections[j]));
            CHECK(t_eq(sd.ring, cm.charts[0].coords[j].second, sd.sections[0]));
        }
    }

    SECTION("two charts with a Bezout cover")
    {
        auto sd = make_sections(make_univariate_target(Q), {tp({0, 1}), tp({1, -1})});
        auto cm = reconstruct_morphism(sd);
        REQUIRE(cm.charts.size() == 2);
        CHECK(cm.charts[0].index == 0);
        CHECK(cm.charts[1].index == 1);
        TElt<Rationals> sum = t_zero(sd.ring);
        for (std::size_t i = 0; i < 2; ++i)
            sum = t_add(sd.ring, sum, t_mul(sd.ring, cm.cover_certificate[i], sd.sections[i]));
        CHECK(t_eq(sd.ring, sum, t_one(sd.ring)));
    }

    SECTION("bad sections are rejected")
    {
        auto bad = make_sections(make_univariate_target(Q), {tp({0, 1}), tp({0, 0, 1})});
        CHECK_THROWS_AS(reconstruct_morphism(bad), Error);
    }
}

TEST_CASE("base change of presented modules")
{
    auto kt = make_univariate_target(Q);
    auto kq = make_field_target(Q);

    TModule<Rationals> tsq;
    tsq.rank = 1;
    tsq.rels = tm_zero(kt, 1, 1);
    tsq.rels.at(0, 0) = tp({0, 0, 1});

    SECTION("identity map changes nothing")
    {
        auto id = make_ring_map(kt, kt, {tp({0, 1})});
        CHECK(tm_equal(kt, base_change(id, tsq).rels, tsq.rels));
    }

    SECTION("collapse t to zero")
    {
        auto ev0 = make_ring_map(kt, kq, {tv({0})});
        auto bc = base_change(ev0, tsq);
        CHECK(bc.rank == 1);
        CHECK(k_dimension(kq, bc) == 1);  // the relation t^2 maps to 0, leaving the field

        CHECK(base_change(ev0, tmod_free(kt, 3)).rank == 3);
    }

    SECTION("functoriality on presentations")
    {
        auto sq = make_ring_map(kt, kt, {tp({0, 0, 1})});  // t -> t^2
        auto ev3 = make_ring_map(kt, kq, {tv({3})});       // t -> 3
        auto both = ring_map_compose(ev3, sq);
        CHECK(t_eq(kq, both.images[0], tv({9})));

        TModule<Rationals> m;
        m.rank = 2;
        m.rels = tm_zero(kt, 2, 2);
        m.rels.at(0, 0) = tp({1, 2, 3});
        m.rels.at(1, 1) = tp({0, 1});
        m.rels.at(1, 0) = tp({-1});
        CHECK(tm_equal(kq, base_change(both, m).rels, base_change(ev3, base_change(sq, m)).rels));
    }

    SECTION("algebra maps must respect the table")
    {
        auto alg = make_findim_target(Q, 2, qvec({1, 0, 0, 1, 0, 1, 1, 0}), qvec({1, 0}));
        // u -> 1 satisfies u^2 = 1, u -> t does not
        CHECK_NOTHROW(make_ring_map(alg, kq, {tv({1}), tv({1})}));
        CHECK_THROWS_AS(make_ring_map(alg, kt, {tp({1}), tp({0, 1})}), Error);
        CHECK_THROWS_AS(make_ring_map(alg, kq, {tv({0}), tv({1})}), Error);  // unit lost

        auto down = make_ring_map(alg, kq, {tv({1}), tv({-1})});
        CHECK(t_eq(kq, ring_map_apply(down, tv({2, 5})), tv({-3})));
    }
}

TEST_CASE("algebra objects and their modules are validated")
{
    auto kt = make_univariate_target(Q);

    // the rank-2 algebra with u^2 = 1 over Q[t]
    auto carrier = tmod_free(kt, 2);
    TMatrix<Rationals> mult = tm_zero(kt, 2, 4);
    mult.at(0, 0) = tp({1});
    mult.at(1, 1) = tp({1});
    mult.at(1, 2) = tp({1});
    mult.at(0, 3) = tp({1});
    TMatrix<Rationals> unit = tm_zero(kt, 2, 1);
    unit.at(0, 0) = tp({1});

    CHECK_NOTHROW(make_algebra(kt, carrier, mult, unit));

    SECTION("broken tables are refused")
    {
        auto lop = mult;
        lop.at(1, 2) = tp({});  // e1*e0 = 0 but e0*e1 = e1
        CHECK_THROWS_AS(make_algebra(kt, carrier, lop, unit), Error);

        auto nounit = unit;
        nounit.at(0, 0) = tp({0, 1});
        CHECK_THROWS_AS(make_algebra(kt, carrier, mult, nounit), Error);
    }

    SECTION("quotient algebras work")
    {
        TModule<Rationals> cyc;
        cyc.rank = 1;
        cyc.rels = tm_zero(kt, 1, 1);
        cyc.rels.at(0, 0) = tp({0, 1});
        TMatrix<Rationals> m1 = tm_identity(kt, 1);
        CHECK_NOTHROW(make_algebra(kt, cyc, m1, m1));
    }

    SECTION("module axioms")
    {
        auto alg = make_algebra(kt, carrier, mult, unit);
        CHECK_NOTHROW(make_amodule(kt, alg, carrier, mult));

        TMatrix<Rationals> broken = tm_zero(kt, 2, 4);
        CHECK_THROWS_AS(make_amodule(kt, alg, carrier, broken), Error);
    }
}

TEST_CASE("descent along ring maps")
{
    auto kt = make_univariate_target(Q);
    auto kq = make_field_target(Q);

    SECTION("unit algebra descends to plain base change")
    {
        auto one = tmod_free(kt, 1);
        auto alg = make_algebra(kt, one, tm_identity(kt, 1), tm_identity(kt, 1));

        TModule<Rationals> tsq;
        tsq.rank = 1;
        tsq.rels = tm_zero(kt, 1, 1);
        tsq.rels.at(0, 0) = tp({0, 0, 1});
        auto mod = make_amodule(kt, alg, tsq, tm_identity(kt, 1));

        auto id = make_ring_map(kt, kt, {tp({0, 1})});
        auto down = descend_module(id, alg, tm_identity(kt, 1), mod);
        auto cls = univariate_class(kt, down);
        CHECK(cls.free_rank == 0);
        REQUIRE(cls.torsion.size() == 1);
        CHECK(up_to_string(Q, cls.torsion[0]) == "t^2");
    }

    SECTION("quotient algebra over the collapse of t")
    {
        TModule<Rationals> cyc;
        cyc.rank = 1;
        cyc.rels = tm_zero(kt, 1, 1);
        cyc.rels.at(0, 0) = tp({0, 1});
        auto alg = make_algebra(kt, cyc, tm_identity(kt, 1), tm_identity(kt, 1));
        auto mod = make_amodule(kt, alg, cyc, tm_identity(kt, 1));

        auto ev0 = make_ring_map(kt, kq, {tv({0})});
        auto down = descend_module(ev0, alg, tm_identity(kq, 1), mod);
        CHECK(down.rank == 1);
        CHECK(k_dimension(kq, down) == 1);
    }

    SECTION("splitting off an involution eigenspace")
    {
        auto carrier = tmod_free(kt, 2);
        TMatrix<Rationals> mult = tm_zero(kt, 2, 4);
        mult.at(0, 0) = tp({1});
        mult.at(1, 1) = tp({1});
        mult.at(1, 2) = tp({1});
        mult.at(0, 3) = tp({1});
        TMatrix<Rationals> unit = tm_zero(kt, 2, 1);
        unit.at(0, 0) = tp({1});
        auto alg = make_algebra(kt, carrier, mult, unit);
        auto mod = make_amodule(kt, alg, carrier, mult);

        auto id = make_ring_map(kt, kt, {tp({0, 1})});
        TMatrix<Rationals> sigma = tm_zero(kt, 1, 2);
        sigma.at(0, 0) = tp({1});
        sigma.at(0, 1) = tp({1});  // u -> 1

        auto down = descend_module(id, alg, sigma, mod);
        CHECK(down.rank == 2);
        auto cls = univariate_class(kt, down);
        CHECK(cls.free_rank == 1);
        CHECK(cls.torsion.empty());

        // u -> 0 is not an algebra map
        TMatrix<Rationals> badsigma = tm_zero(kt, 1, 2);
        badsigma.at(0, 0) = tp({1});
        CHECK_THROWS_AS(descend_module(id, alg, badsigma, mod), Error);
    }
}

TEST_CASE("polynomial relations between sections")
{
    HomPoly<Rationals> rel = hp_zero<Rationals>(3, 2);
    Monomial x0sq{{2, 0, 0}};
    Monomial x1sq{{0, 2, 0}};
    Monomial x2sq{{0, 0, 2}};
    hp_add_term(Q, rel, x0sq, Q.one());
    hp_add_term(Q, rel, x1sq, Q.one());
    hp_add_term(Q, rel, x2sq, Q.from_int(-1));

    CHECK(verify_relation(sd_field({3, 4, 5}), rel));
    CHECK(verify_relation(sd_field({3, 4, 5}), hp_zero<Rationals>(3, 2)));

    HomPoly<Rationals> lin = hp_zero<Rationals>(3, 1);
    hp_add_term(Q, lin, mono_var(0, 3), Q.one());
    hp_add_term(Q, lin, mono_var(1, 3), Q.one());
    hp_add_term(Q, lin, mono_var(2, 3), Q.from_int(-1));
    CHECK_FALSE(verify_relation(sd_field({1, 1, 1}), lin));
    CHECK(verify_relation(sd_field({1, 2, 3}), lin));
}

TEST_CASE("evaluation is right exact")
{
    PrimeField f7(7);
    auto kt = make_univariate_target(f7);
    auto sd7 = make_sections(kt, {TElt<PrimeField>{{1, 2}}, TElt<PrimeField>{{0, 0, 1}}});

    std::mt19937 rng(77);
    for (int trial = 0; trial < 10; ++trial) {
        auto f = random_free_map(f7, rng, 2, GradedFree{{-1, -2, 0}}, GradedFree{{0, 1}});
        auto lhs = univariate_class(kt, evaluate_object(sd7, cokernel(f7, f)));
        auto rhs = univariate_class(kt, t_cokernel(evaluate_map(sd7, f)));
        CHECK(lhs.free_rank == rhs.free_rank);
        REQUIRE(lhs.torsion.size() == rhs.torsion.size());
        for (std::size_t i = 0; i < lhs.torsion.size(); ++i)
            CHECK(up_eq(f7, lhs.torsion[i], rhs.torsion[i]));
    }
}

TEST_CASE("substituted truncation sequences stay exact for good sections")
{
    for (std::size_t n = 1; n <= 2; ++n) {
        auto sdn = n == 1 ? sd_one_t()
                          : make_sections(make_univariate_target(Q),
                                          {tp({1}), tp({0, 1}), tp({1, 1})});
        for (int m = 1; m <= 3; ++m) {
            auto pres = truncation_presentation(Q, n, 0, m);
            auto relmap = make_map(Q, free_module<Rationals>(pres.nvars, pres.module.rels.source),
                                   free_module<Rationals>(pres.nvars, pres.module.gens),
                                   pres.module.rels);
            auto evrel = evaluate_map(sdn, relmap);
            auto evinc = evaluate_map(sdn, pres.inclusion);

            // image of the relations is exactly the kernel of the substituted inclusion
            auto ker = pm_right_kernel(Q, tm_to_poly(sdn.ring, evinc.matrix));
            CHECK(pm_column_span_equal(Q, ker, tm_to_poly(sdn.ring, evrel.matrix)));
            CHECK(tmap_surjective(sdn.ring, evinc));
        }
    }
}
