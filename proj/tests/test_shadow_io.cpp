#include <doctest.h>

#include <bgx/cache.hpp>
#include <bgx/io.hpp>
#include <bgx/obsgen.hpp>
#include <bgx/shadow.hpp>
#include <bgx/solve.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace bgx;

namespace {

Lattice l0_2u2a1() { return two_u_plus(direct_sum(root_a1(), root_a1())); }

OrbitTable example_table() { return classify(l0_2u2a1(), GroupKind::Hat, Rat(1), true); }

ModularInput gn_input(const OrbitTable& t, int carrier, const Rat& a, const Rat& b) {
    // Inputs on the divisor-2 carriers: c(g, -1/4) = a, c(0, -1) = b.
    auto disc = t.corank1[carrier].sub_disc;
    std::map<ModularInput::Key, Rat> pp;
    if (a != 0) pp[{{Int(1)}, make_rat(-1, 4)}] = a;
    if (b != 0) pp[{{Int(0)}, Rat(-1)}] = b;
    return ModularInput(disc, std::move(pp), Rat(0));
}

}  // namespace

TEST_CASE("tame symbol shadow cases") {
    OrbitTable t = example_table();
    int i_l1 = -1;
    for (size_t i = 0; i < t.corank1.size(); ++i)
        if (t.corank1[i].key.norm == -2 && t.corank1[i].key.div == 2 && i_l1 < 0) i_l1 = static_cast<int>(i);
    REQUIRE(i_l1 >= 0);
    auto flags = t.flags_of_carrier(i_l1);
    REQUIRE(flags.size() == 2);
    ModularInput f = gn_input(t, i_l1, Rat(7), Rat(-1));
    ModularInput g = gn_input(t, i_l1, Rat(1), Rat(-1));  // order 0 along the div-2 flag
    // q = 1: the valuation itself.
    for (int fi : flags) {
        TameOutput out = tame_symbol_shadow(t, fi, {f}, Rat(3));
        const FlagClass& fl = t.flags[fi];
        CHECK(out.order == nutilde_key(f, fl.norm, fl.div_in_carrier, fl.lstar_in_carrier) / Rat(fl.ramification));
    }
    // q = 2 with both orders zero: the unit-unit case vanishes.
    int div2_flag = -1;
    for (int fi : flags)
        if (t.flags[fi].div_in_carrier == 2) div2_flag = fi;
    REQUIRE(div2_flag >= 0);
    ModularInput unit1 = gn_input(t, i_l1, Rat(1), Rat(-1));
    ModularInput unit2 = gn_input(t, i_l1, Rat(2), Rat(-2));
    TameOutput both_units = tame_symbol_shadow(t, div2_flag, {unit1, unit2}, Rat(3));
    CHECK(both_units.has_label);
    CHECK(both_units.label.is_zero());
    // q = 2 general shape: label equals (nu(f) g - nu(g) f) pulled back.
    TameOutput mixed = tame_symbol_shadow(t, div2_flag, {f, g}, Rat(3));
    CHECK(mixed.has_label);
    const FlagClass& fl = t.flags[div2_flag];
    Rat nf = nu_value(fl, f), ng = nu_value(fl, g);
    CHECK(nf == 3);  // nutilde 6, ramification 2
    CHECK(ng == 0);
    // nu(g) = 0, so the label is nu(f) * g restricted.
    CHECK_FALSE(mixed.label.is_zero());
    CHECK(mixed.label.c00() == 0);
}

TEST_CASE("divisor linearity and the unit case") {
    OrbitTable t = example_table();
    int i_l1 = -1;
    for (size_t i = 0; i < t.corank1.size(); ++i)
        if (t.corank1[i].key.norm == -2 && t.corank1[i].key.div == 2 && i_l1 < 0) i_l1 = static_cast<int>(i);
    ModularInput f = gn_input(t, i_l1, Rat(7), Rat(-1));
    ModularInput g = gn_input(t, i_l1, Rat(1), Rat(0));
    DivisorOnCycle da = divisor_of(t, FunctionSymbol{i_l1, f});
    DivisorOnCycle db = divisor_of(t, FunctionSymbol{i_l1, g});
    DivisorOnCycle dsum = divisor_of(t, FunctionSymbol{i_l1, f.plus(g)});
    std::map<int, Rat> expect;
    for (auto& [fi, m] : da.multiplicities) expect[fi] += m;
    for (auto& [fi, m] : db.multiplicities) expect[fi] += m;
    std::map<int, Rat> got;
    for (auto& [fi, m] : dsum.multiplicities) got[fi] += m;
    CHECK(expect == got);
}

TEST_CASE("chain map routes agree on the worked example chain") {
    OrbitTable t = example_table();
    int i_l1 = -1, i_l2 = -1, i_l3 = -1;
    for (size_t i = 0; i < t.corank1.size(); ++i) {
        const auto& c = t.corank1[i];
        if (c.key.norm != -2) continue;
        if (c.key.div == 1)
            i_l3 = static_cast<int>(i);
        else
            (i_l1 < 0 ? i_l1 : i_l2) = static_cast<int>(i);
    }
    ModularInput f1 = gn_input(t, i_l1, Rat(7), Rat(-1));
    ModularInput f2 = gn_input(t, i_l2, Rat(-7), Rat(1));
    // Solve the third input via its flags.
    AdmissibleCoords coords3 = admissible_coords(t.corank1[i_l3].sub_disc, Rat(1));
    std::vector<OrderKey> keys3;
    std::vector<SolveTarget> targets3;
    for (int fi : t.flags_of_carrier(i_l3)) {
        const FlagClass& fl = t.flags[fi];
        OrderKey k{fl.norm, fl.div_in_carrier, fl.lstar_in_carrier};
        if (std::find(keys3.begin(), keys3.end(), k) == keys3.end()) keys3.push_back(k);
        Int det = t.corank2[fl.target].p_lattice.det();
        if (det == 4 && fl.norm == -2) {
            // Distinguish the two det-4 intersections by carrier pairing:
            // assign +1 to the one linked with the first carrier.
            bool first = false;
            for (int fj : t.flags_of_carrier(i_l1))
                if (t.flags[fj].target == fl.target) first = true;
            targets3.push_back(SolveTarget{k, first ? Rat(1) : Rat(-1)});
        }
    }
    SolveReport rep3 = solve_principal_part(coords3, targets3, keys3);
    REQUIRE(rep3.feasible);
    std::vector<ChainEntry> chain{{i_l1, f1}, {i_l2, f2}, {i_l3, rep3.solution}};

    ChainMapReport q1 = chain_map_check_q1(t, chain);
    CHECK(q1.pass);
    // Zero chain passes as well.
    CHECK(chain_map_check_q1(t, {}).pass);

    // q = 2 on ambient pairs.
    auto disc0 = t.l0_disc;
    AdmissibleCoords coords0 = admissible_coords(disc0, Rat(1));
    VecQ x(coords0.dim(), Rat(0));
    x[0] = 3;
    x[2] = -2;
    ModularInput F = coords0.to_input(x);
    VecQ y(coords0.dim(), Rat(0));
    y[1] = 1;
    y[3] = 5;
    ModularInput G = coords0.to_input(y);
    ChainMapReport q2 = chain_map_check_q2(t, F, G, Rat(3));
    CHECK(q2.pass);
}

TEST_CASE("chain map mismatch is detected") {
    // Mismatched groups between the routes: evaluate route A with a table
    // classified for the full group against chains meant for the hat group.
    OrbitTable hat = example_table();
    OrbitTable full = classify(l0_2u2a1(), GroupKind::Full, Rat(1), true);
    int i_l1 = -1;
    for (size_t i = 0; i < hat.corank1.size(); ++i)
        if (hat.corank1[i].key.norm == -2 && hat.corank1[i].key.div == 2 && i_l1 < 0) i_l1 = static_cast<int>(i);
    ModularInput f1 = gn_input(hat, i_l1, Rat(7), Rat(-1));
    auto va = boundary_values(hat, {{i_l1, f1}});
    // The full-group table merges the two divisor-2 carriers; the same input
    // on the merged class produces different boundary data.
    int j_l1 = -1;
    for (size_t i = 0; i < full.corank1.size(); ++i)
        if (full.corank1[i].key.norm == -2 && full.corank1[i].key.div == 2) j_l1 = static_cast<int>(i);
    REQUIRE(j_l1 >= 0);
    ModularInput g1 = gn_input(full, j_l1, Rat(7), Rat(-1));
    auto vb = boundary_values(full, {{j_l1, g1}});
    // Not directly comparable: class counts differ.
    CHECK(va.size() != vb.size());
}

TEST_CASE("lattice and input files round trip canonically") {
    Lattice l0 = l0_2u2a1();
    std::string payload = write_lattice(l0);
    std::istringstream in(payload);
    Lattice back = read_lattice(in);
    CHECK(back.gram() == l0.gram());
    CHECK(write_lattice(back) == payload);
    CHECK(back.content_hash() == l0.content_hash());

    auto disc = std::make_shared<DiscriminantForm>(two_u_plus(root_a1()));
    std::map<ModularInput::Key, Rat> pp;
    pp[{{Int(1)}, make_rat(-1, 4)}] = 7;
    pp[{{Int(0)}, Rat(-1)}] = -1;
    ModularInput f(disc, pp, make_rat(2, 3));
    std::string fp = write_input(f);
    std::istringstream fin(fp);
    ModularInput fback = read_input(fin, disc);
    CHECK(fback.pp() == f.pp());
    CHECK(fback.c00() == f.c00());
    CHECK(write_input(fback) == fp);
}

TEST_CASE("series and obstruction files round trip") {
    GradedQSeries th = theta_series(root_a1(), Rat(3));
    std::string sp = write_series(th);
    std::istringstream sin(sp);
    GradedQSeries back = read_series(sin);
    CHECK(back.coeffs() == th.coeffs());
    CHECK(back.trunc() == th.trunc());

    auto ob = theta_obstruction_tables(DiscriminantForm(direct_sum(root_a1(), root_a1())), Rat(4));
    REQUIRE(ob.has_value());
    std::string op = write_obstruction(*ob);
    std::istringstream oin(op);
    ObstructionBasis oback = read_obstruction(oin);
    CHECK(oback.orders == ob->orders);
    CHECK(oback.weight == ob->weight);
    CHECK(oback.functionals.size() == ob->functionals.size());
    for (size_t i = 0; i < oback.functionals.size(); ++i) {
        CHECK(oback.functionals[i].is_c00 == ob->functionals[i].is_c00);
        CHECK(oback.functionals[i].table == ob->functionals[i].table);
    }
    CHECK(write_obstruction(oback) == op);
}

TEST_CASE("orbit table serialization preserves the boundary data") {
    OrbitTable t = example_table();
    std::string payload = write_orbit_table(t);
    std::istringstream in(payload);
    OrbitTable back = read_orbit_table(in);
    REQUIRE(back.corank1.size() == t.corank1.size());
    REQUIRE(back.corank2.size() == t.corank2.size());
    REQUIRE(back.flags.size() == t.flags.size());
    for (size_t i = 0; i < t.flags.size(); ++i) {
        CHECK(back.flags[i].carrier == t.flags[i].carrier);
        CHECK(back.flags[i].target == t.flags[i].target);
        CHECK(back.flags[i].norm == t.flags[i].norm);
        CHECK(back.flags[i].ramification == t.flags[i].ramification);
        CHECK(back.flags[i].transfer_index == t.flags[i].transfer_index);
    }
    // Boundary values computed from the reloaded table agree.
    int i_l1 = -1;
    for (size_t i = 0; i < t.corank1.size(); ++i)
        if (t.corank1[i].key.norm == -2 && t.corank1[i].key.div == 2 && i_l1 < 0) i_l1 = static_cast<int>(i);
    ModularInput f1 = gn_input(t, i_l1, Rat(7), Rat(-1));
    auto va = boundary_values(t, {{i_l1, f1}});
    ModularInput f1b = gn_input(back, i_l1, Rat(7), Rat(-1));
    auto vb = boundary_values(back, {{i_l1, f1b}});
    CHECK(va == vb);
    CHECK(write_orbit_table(back) == payload);
}

TEST_CASE("cache round trip, miss and tamper detection") {
    std::string dir = std::filesystem::temp_directory_path() / "bgx-cache-test";
    std::filesystem::remove_all(dir);
    Cache cache(dir);
    int calls = 0;
    auto producer = [&] {
        ++calls;
        return std::string("payload-123\nline2\n");
    };
    std::string a = cache.get_or_compute("k1", producer);
    std::string b = cache.get_or_compute("k1", producer);
    CHECK(a == b);
    CHECK(calls == 1);
    // Different key recomputes.
    cache.get_or_compute("k2", producer);
    CHECK(calls == 2);
    // Tamper with the stored payload: checksum mismatch forces a recompute.
    {
        std::ofstream f(dir + "/k1.cache", std::ios::trunc);
        f << "deadbeef\ncorrupted\n";
    }
    std::string c = cache.get_or_compute("k1", producer);
    CHECK(c == a);
    CHECK(calls == 3);
    std::filesystem::remove_all(dir);
}

TEST_CASE("instance export lists dimensions and sparse boundaries") {
    Lattice l0 = l0_2u2a1();
    ObstructionSet obs;
    if (auto ob = theta_obstruction_tables(DiscriminantForm(l0), Rat(3))) obs.push_back(*ob);
    if (auto ob = theta_obstruction_tables(DiscriminantForm(root_a1()), Rat(3))) obs.push_back(*ob);
    ComplexInstance inst = assemble_complex(l0, GroupKind::Hat, 2, Rat(1), Rat(3), obs);
    std::string payload = export_instance(inst);
    CHECK(payload.find("dims 1 13 10") != std::string::npos);
    CHECK(payload.find("d1 10 13") != std::string::npos);
    CHECK(payload.find("endmatrix") != std::string::npos);
}
