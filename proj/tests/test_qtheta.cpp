#include <doctest.h>

#include <bgx/modular_input.hpp>
#include <bgx/qexp.hpp>
#include <bgx/shortvec.hpp>

using namespace bgx;

namespace {

std::shared_ptr<const DiscriminantForm> disc_of(const Lattice& l) {
    return std::make_shared<DiscriminantForm>(l);
}

// Brute-force coset theta: counts lattice points per exponent.
GradedQSeries theta_oracle(const Lattice& k, const Rat& trunc) {
    DiscriminantForm a(k);
    GradedQSeries out(a.orders(), trunc);
    Lattice pos = k.twist();
    MatQ ginv = inverse(pos.gram());
    for (const auto& delta : a.elements()) {
        VecQ shift = a.lift(delta);
        int n = k.rank();
        std::vector<long> radius(n);
        for (int i = 0; i < n; ++i) {
            Rat sh = shift[i] < 0 ? -shift[i] : shift[i];
            radius[i] = isqrt_floor(Rat(2) * trunc * ginv(i, i)).get_si() + rat_ceil(sh).get_si() + 2;
        }
        std::vector<long> t(n, 0);
        std::function<void(int)> rec = [&](int i) {
            if (i == n) {
                VecQ x(n);
                for (int j = 0; j < n; ++j) x[j] = shift[j] + Rat(Int(t[j]));
                Rat norm = pos.norm(x);
                if (norm / 2 <= trunc) out.add(delta, norm / 2, Rat(1));
                return;
            }
            for (long v = -radius[i]; v <= radius[i]; ++v) {
                t[i] = v;
                rec(i + 1);
            }
        };
        rec(0);
    }
    return out;
}

}  // namespace

TEST_CASE("theta of A1 matches the coset expansion") {
    GradedQSeries th = theta_series(root_a1(), Rat(3));
    DiscriminantForm a(root_a1());
    DiscElement zero = a.zero(), g = a.reduce({Int(1)});
    CHECK(th.coeff(zero, Rat(0)) == 1);
    CHECK(th.coeff(zero, Rat(1)) == 2);
    CHECK(th.coeff(zero, Rat(2)) == 0);
    CHECK(th.coeff(g, make_rat(1, 4)) == 2);
    CHECK(th.coeff(g, make_rat(9, 4)) == 2);
    CHECK(th.coeff(g, make_rat(5, 4)) == 0);
}

TEST_CASE("theta matches brute-force enumeration on rank <= 3") {
    std::vector<Lattice> samples = {root_a1(), direct_sum(root_a1(), root_a1()), rank_one(Int(-4)),
                                    direct_sum(root_a1(), rank_one(Int(-6))),
                                    Lattice::make(MatZ{{Int(-2), Int(-1)}, {Int(-1), Int(-2)}})};
    for (const auto& k : samples) {
        GradedQSeries got = theta_series(k, Rat(10));
        GradedQSeries want = theta_oracle(k, Rat(10));
        CHECK(got.coeffs() == want.coeffs());
    }
    // Definite rank 3 at lower truncation.
    Lattice k3 = direct_sum(direct_sum(root_a1(), root_a1()), rank_one(Int(-4)));
    CHECK(theta_series(k3, Rat(6)).coeffs() == theta_oracle(k3, Rat(6)).coeffs());
}

TEST_CASE("theta component symmetry and parity") {
    Lattice k = direct_sum(root_a1(), rank_one(Int(-6)));
    DiscriminantForm a(k);
    GradedQSeries th = theta_series(k, Rat(5));
    CHECK(th.coeff(a.zero(), Rat(0)) == 1);
    for (const auto& [key, val] : th.coeffs()) {
        DiscElement e{key.first};
        CHECK(val == th.coeff(a.neg(e), key.second));
        if (!(e.is_zero() && key.second == 0)) {
            CHECK(val > 0);
            CHECK(is_integer(val));
            // x and -x pair up within a component exactly when 2e = 0.
            if (a.neg(e) == e) CHECK(val.get_num() % 2 == 0);
        }
    }
    // On 2-elementary groups every non-constant coefficient is even.
    Lattice k2 = direct_sum(root_a1(), root_a1());
    GradedQSeries th2 = theta_series(k2, Rat(6));
    for (const auto& [key, val] : th2.coeffs())
        if (!(DiscElement{key.first}.is_zero() && key.second == 0)) CHECK(val.get_num() % 2 == 0);
}

TEST_CASE("theta parallel evaluation matches serial") {
    Lattice k = direct_sum(root_a1(), root_a1());
    CHECK(theta_series(k, Rat(8), 1).coeffs() == theta_series(k, Rat(8), 4).coeffs());
}

TEST_CASE("combine is linear with min truncation") {
    GradedQSeries a = theta_series(root_a1(), Rat(3));
    GradedQSeries b = theta_series(root_a1(), Rat(5));
    GradedQSeries z = combine(a, a, Rat(1), Rat(-1));
    CHECK(z.coeffs().empty());
    GradedQSeries s = combine(a, b, Rat(3), Rat(0));
    DiscriminantForm d(root_a1());
    CHECK(s.coeff(d.zero(), Rat(1)) == 6);
    CHECK(s.trunc() == Rat(3));
    GradedQSeries mixed = combine(a, b, Rat(1), Rat(1));
    CHECK(mixed.trunc() == Rat(3));
    GradedQSeries other(std::vector<Int>{Int(3)}, Rat(3));
    CHECK_THROWS_AS(combine(a, other, Rat(1), Rat(1)), bgx_error);
}

TEST_CASE("modular input validation") {
    Lattice l1 = two_u_plus(root_a1());
    auto d = disc_of(l1);
    // Valid: c(g, -1/4) = 7, c(0, -1) = -1.
    std::map<ModularInput::Key, Rat> pp;
    pp[{{Int(1)}, make_rat(-1, 4)}] = 7;
    pp[{{Int(0)}, Rat(-1)}] = -1;
    ModularInput f(d, pp, Rat(0));
    CHECK(f.pole_depth() == 1);
    // Congruence violation: c(g, -1/2).
    std::map<ModularInput::Key, Rat> bad;
    bad[{{Int(1)}, make_rat(-1, 2)}] = 1;
    CHECK_THROWS_AS(ModularInput(d, bad, Rat(0)), bgx_error);
    // Trivial discriminant: q^{-1} e_0 on 2U.
    Lattice u2 = two_u_plus(Lattice::make(MatZ(0, 0)));
    auto d2 = disc_of(u2);
    std::map<ModularInput::Key, Rat> pp2;
    pp2[{{}, Rat(-1)}] = 1;
    ModularInput g(d2, pp2, Rat(0));
    CHECK(g.pole_depth() == 1);
}

TEST_CASE("symmetry violations are rejected, not repaired") {
    // A_<(-8)> = Z/8: g and -g distinct.
    Lattice l = two_u_plus(rank_one(Int(-8)));
    auto d = disc_of(l);
    std::map<ModularInput::Key, Rat> pp;
    pp[{{Int(1)}, d->q_value(d->reduce({Int(1)})) / 2 - 1}] = 1;  // entry at g only
    CHECK_THROWS_AS(ModularInput(d, pp, Rat(0)), bgx_error);
    pp[{{Int(7)}, d->q_value(d->reduce({Int(1)})) / 2 - 1}] = 1;  // add the mirror
    ModularInput ok(d, pp, Rat(0));
    CHECK(ok.pp().size() == 2);
}

TEST_CASE("nutilde on 2U with the simplest input") {
    Lattice u2 = two_u_plus(Lattice::make(MatZ(0, 0)));
    auto d = disc_of(u2);
    std::map<ModularInput::Key, Rat> pp;
    pp[{{}, Rat(-1)}] = 1;
    ModularInput f(d, pp, Rat(0));
    // l = e1 - f1 has (l,l) = -2; alpha = 1 reads c(0,-1) = 1.
    VecZ l{Int(1), Int(-1), Int(0), Int(0)};
    CHECK(nutilde(f, l) == 1);
    // (l,l) = -4 vector e1 - 2 f1: reads c(0,-2) = 0.
    VecZ m{Int(1), Int(-2), Int(0), Int(0)};
    CHECK(nutilde(f, m) == 0);
    ModularInput z = ModularInput::zero(d);
    CHECK(nutilde(z, l) == 0);
    CHECK_THROWS_AS(nutilde(f, VecZ{Int(1), Int(1), Int(0), Int(0)}), bgx_error);   // positive norm
    CHECK_THROWS_AS(nutilde(f, VecZ{Int(2), Int(-2), Int(0), Int(0)}), bgx_error);  // imprimitive
}

TEST_CASE("nutilde on 2U + A1 reads both orbits of the divisor") {
    Lattice l1 = two_u_plus(root_a1());
    auto d = disc_of(l1);
    std::map<ModularInput::Key, Rat> pp;
    pp[{{Int(1)}, make_rat(-1, 4)}] = 7;
    pp[{{Int(0)}, Rat(-1)}] = -1;
    ModularInput f(d, pp, Rat(0));
    // div-2 vector: the A1 generator; alpha = 1/2 reads c(g, -1/4), alpha = 1 reads c(0,-1).
    VecZ a1(5, Int(0));
    a1[4] = 1;
    CHECK(nutilde(f, a1) == 6);
    // div-1 (-2)-vector: delta = e1 - f1 reads c(0,-1) only.
    VecZ delta(5, Int(0));
    delta[0] = 1;
    delta[1] = -1;
    CHECK(nutilde(f, delta) == -1);
    // Linearity.
    ModularInput g = f.scaled(Rat(3)).plus(f, Rat(-1));
    CHECK(nutilde(g, a1) == 2 * nutilde(f, a1));
}

TEST_CASE("quasi-pullback 2U+A1 -> 2U reproduces the contraction values") {
    Lattice l1 = two_u_plus(root_a1());
    auto d = disc_of(l1);
    std::map<ModularInput::Key, Rat> pp;
    pp[{{Int(1)}, make_rat(-1, 4)}] = 7;
    pp[{{Int(0)}, Rat(-1)}] = -1;
    ModularInput f(d, pp, Rat(0));
    // L' = 2U: first four basis vectors.
    MatZ sub(5, 4);
    for (int i = 0; i < 4; ++i) sub(i, i) = 1;
    ModularInput out = quasi_pullback(f, sub, Rat(2));
    CHECK(out.disc().order() == 1);
    CHECK(out.coeff(out.disc().zero(), Rat(-1)) == -1);
    CHECK(out.pp().size() == 1);
    CHECK(out.c00() == 12);
    // c00 shift is twice nutilde along the complement generator.
    VecZ a1(5, Int(0));
    a1[4] = 1;
    CHECK(out.c00() - f.c00() == 2 * nutilde(f, a1));
    // Zero input pulls back to zero.
    ModularInput z = quasi_pullback(ModularInput::zero(d), sub, Rat(2));
    CHECK(z.is_zero());
    // Truncation below pole depth is refused.
    CHECK_THROWS_AS(quasi_pullback(f, sub, make_rat(1, 2)), bgx_error);
}

TEST_CASE("lemma: nu = 0 inputs keep c00 under quasi-pullback") {
    Lattice l1 = two_u_plus(root_a1());
    auto d = disc_of(l1);
    // c(g,-1/4) = 1, c(0,-1) = -1 has nutilde = 0 along the A1 generator.
    std::map<ModularInput::Key, Rat> pp;
    pp[{{Int(1)}, make_rat(-1, 4)}] = 1;
    pp[{{Int(0)}, Rat(-1)}] = -1;
    ModularInput f(d, pp, Rat(0));
    VecZ a1(5, Int(0));
    a1[4] = 1;
    REQUIRE(nutilde(f, a1) == 0);
    MatZ sub(5, 4);
    for (int i = 0; i < 4; ++i) sub(i, i) = 1;
    ModularInput out = quasi_pullback(f, sub, Rat(3));
    CHECK(out.c00() == 0);
}

TEST_CASE("up_arrow support counting for an index-2 glue") {
    Lattice l = two_u_plus(root_a1());
    VecZ delta(5, Int(0));
    delta[0] = 1;
    delta[1] = -1;
    Sublattice lp = orth_complement(l, delta);
    MatZ kb(5, 1);
    kb.set_col(0, delta);
    GlueData g = glue(l, lp.basis, kb);
    REQUIRE(g.index == 2);
    auto d = disc_of(l);
    std::map<ModularInput::Key, Rat> pp;
    pp[{{Int(1)}, make_rat(-1, 4)}] = 5;
    pp[{{Int(0)}, Rat(-1)}] = 3;
    ModularInput f(d, pp, Rat(11));
    GradedQSeries lifted = up_arrow(f, g);
    // Supported components carry the pulled-back entries; support size
    // |A_L| * index accounts for all dual cosets of M inside L^dual.
    CHECK(g.supported_count() == g.disc_l.order() * g.index);
    // Each pp entry of f appears once per supported component over its image.
    long hits_g = 0, hits_0 = 0, hits_c00 = 0;
    for (const auto& [key, val] : lifted.coeffs()) {
        if (key.second == make_rat(-1, 4)) {
            CHECK(val == 5);
            ++hits_g;
        } else if (key.second == Rat(-1)) {
            CHECK(val == 3);
            ++hits_0;
        } else if (key.second == Rat(0)) {
            CHECK(val == 11);
            ++hits_c00;
        }
    }
    CHECK(hits_0 == hits_c00);
    CHECK(hits_g + hits_0 == g.supported_count());
    // Index-1 glue: identity relabeling.
    MatZ sub(5, 4);
    for (int i = 0; i < 4; ++i) sub(i, i) = 1;
    MatZ a1col(5, 1);
    a1col(4, 0) = 1;
    GlueData triv = glue(l, sub, a1col);
    REQUIRE(triv.index == 1);
    GradedQSeries lifted1 = up_arrow(f, triv);
    long nonzero = 0;
    for (const auto& [key, val] : lifted1.coeffs()) ++nonzero;
    CHECK(nonzero == 3);  // the two pp entries and the c00 slot
}

TEST_CASE("scalar q-expansion utilities") {
    QExp e2 = eisenstein_e2(Rat(4));
    CHECK(e2.coeff(Rat(0)) == 1);
    CHECK(e2.coeff(Rat(1)) == -24);
    CHECK(e2.coeff(Rat(2)) == -72);
    CHECK(e2.coeff(Rat(3)) == -96);
    CHECK(e2.coeff(Rat(4)) == -168);
    QExp t0 = unary_theta2(0, Rat(4));
    CHECK(t0.coeff(Rat(0)) == 1);
    CHECK(t0.coeff(Rat(1)) == 2);
    CHECK(t0.coeff(Rat(4)) == 2);
    QExp t1 = unary_theta2(1, Rat(4));
    CHECK(t1.coeff(make_rat(1, 4)) == 2);
    CHECK(t1.coeff(make_rat(9, 4)) == 2);
    // Serre derivative of the weight 1/2 theta: the normalized Eisenstein
    // of weight 5/2 shows the classical -10 and -70 coefficients.
    QExp dt0 = serre_derivative(t0, make_rat(1, 2));
    QExp dt1 = serre_derivative(t1, make_rat(1, 2));
    CHECK(dt0.coeff(Rat(0)) == make_rat(-1, 24));
    Rat scale = Rat(-24);
    CHECK(scale * dt1.coeff(make_rat(1, 4)) == -10);
    CHECK(scale * dt0.coeff(Rat(1)) == -70);
    CHECK(scale * dt0.coeff(Rat(2)) == -120);
    CHECK(scale * dt1.coeff(make_rat(5, 4)) == -48);
}
