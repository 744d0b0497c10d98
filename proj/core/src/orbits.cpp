#include <bgx/orbits.hpp>

#include <bgx/shortvec.hpp>

#include <algorithm>
#include <array>
#include <deque>
#include <functional>
#include <set>

namespace bgx {

namespace {

DiscPermutation identity_perm(size_t n) {
    DiscPermutation p(n);
    for (size_t i = 0; i < n; ++i) p[i] = static_cast<long>(i);
    return p;
}

DiscPermutation canonical_mod_pm(const DiscPermutation& p, const DiscPermutation& neg) {
    DiscPermutation q = compose(neg, p);
    return p <= q ? p : q;
}

std::vector<MatZ> all_autos(const Lattice& a) { return definite_aut_group(a).elements; }

std::vector<MatZ> isometries_between(const Lattice& a, const Lattice& b) {
    std::vector<MatZ> out;
    if (a.rank() != b.rank() || a.det() != b.det() || a.signature() != b.signature()) return out;
    auto one = definite_isometry(a, b);
    if (!one) return out;
    // definite_isometry maps b-coordinates to a-coordinates; compose with
    // automorphisms of a and invert to get all maps a -> b.
    for (const auto& g : all_autos(a)) {
        MatZ ba = g * (*one);  // b-coords -> a-coords
        MatQ invq = inverse(to_rational(ba));
        MatZ ab(ba.rows(), ba.cols());
        for (int i = 0; i < ba.rows(); ++i)
            for (int j = 0; j < ba.cols(); ++j) {
                if (!is_integer(invq(i, j))) fail(errc::invalid_input, "isometry inverse not integral");
                ab(i, j) = invq(i, j).get_num();
            }
        out.push_back(ab);  // a-coords -> b-coords
    }
    return out;
}

long element_order(const DiscriminantForm& d, const DiscElement& e) {
    long o = 1;
    DiscElement cur = e;
    while (!cur.is_zero()) {
        cur = d.add(cur, e);
        ++o;
    }
    return o;
}

// Isometries of discriminant forms a -> b as element index maps.
std::vector<std::vector<long>> disc_form_isometries(const DiscriminantForm& a, const DiscriminantForm& b) {
    std::vector<std::vector<long>> out;
    if (a.orders() != b.orders()) return out;
    auto ea = a.elements();
    auto eb = b.elements();
    long n = static_cast<long>(ea.size());
    std::vector<Rat> qa(n), qb(n);
    std::vector<long> orda(n), ordb(n);
    for (long i = 0; i < n; ++i) {
        qa[i] = a.q_value(ea[i]);
        qb[i] = b.q_value(eb[i]);
        orda[i] = element_order(a, ea[i]);
        ordb[i] = element_order(b, eb[i]);
    }
    int k = a.ngens();
    std::vector<long> gen_idx(k);
    for (int g = 0; g < k; ++g) {
        std::vector<Int> r(k, Int(0));
        r[g] = 1;
        gen_idx[g] = a.index_of(DiscElement{r});
    }
    std::vector<long> image(k, -1);
    std::function<void(int)> rec = [&](int g) {
        if (g == k) {
            std::vector<long> perm(n, -1);
            std::vector<bool> hit(n, false);
            for (long i = 0; i < n; ++i) {
                DiscElement img = b.zero();
                for (int j = 0; j < k; ++j) img = b.add(img, b.smul(ea[i].r[j], eb[image[j]]));
                long t = b.index_of(img);
                if (hit[t] || qb[t] != qa[i]) return;
                hit[t] = true;
                perm[i] = t;
            }
            out.push_back(std::move(perm));
            return;
        }
        long src = gen_idx[g];
        for (long cand = 0; cand < n; ++cand) {
            if (ordb[cand] != orda[src] || qb[cand] != qa[src]) continue;
            bool ok = true;
            for (int h = 0; h < g && ok; ++h)
                if (b.b_value(eb[cand], eb[image[h]]) != a.b_value(ea[src], ea[gen_idx[h]])) ok = false;
            if (!ok) continue;
            image[g] = cand;
            rec(g + 1);
            image[g] = -1;
        }
    };
    rec(0);
    return out;
}

VecZ mat_apply(const MatZ& m, const VecZ& v) { return m * v; }

VecZ negate(const VecZ& v) {
    VecZ w(v.size());
    for (size_t i = 0; i < v.size(); ++i) w[i] = -v[i];
    return w;
}

// Shared bookkeeping for a primitive sublattice plus definite complement.
struct PairContext {
    const Lattice* l0 = nullptr;
    GroupKind gamma = GroupKind::Hat;
    GlueData g;
    Lattice sub_lat, comp_lat;
    std::vector<DiscElement> sub_elems, comp_elems, amb_elems;
    std::set<std::pair<long, long>> glue_set;
    DiscPermutation sub_neg, amb_neg;
    std::vector<std::pair<long, long>> amb_split;
};

PairContext make_context(const Lattice& l0, const MatZ& sub_basis, const MatZ& comp_basis, GroupKind gamma) {
    PairContext c;
    c.l0 = &l0;
    c.gamma = gamma;
    c.g = glue(l0, sub_basis, comp_basis);
    c.sub_lat = c.g.disc_lp.lattice();
    c.comp_lat = c.g.disc_k.lattice();
    c.sub_elems = c.g.disc_lp.elements();
    c.comp_elems = c.g.disc_k.elements();
    c.amb_elems = c.g.disc_l.elements();
    c.sub_neg = negation_permutation(c.g.disc_lp);
    c.amb_neg = negation_permutation(c.g.disc_l);

    std::set<std::pair<long, long>> glue_set;
    glue_set.insert({c.g.disc_lp.index_of(c.g.disc_lp.zero()), c.g.disc_k.index_of(c.g.disc_k.zero())});
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<std::pair<long, long>> snapshot(glue_set.begin(), glue_set.end());
        for (const auto& [ia, ib] : snapshot)
            for (const auto& [ga, gb] : c.g.glue_gens) {
                DiscElement na = c.g.disc_lp.add(c.sub_elems[ia], ga);
                DiscElement nb = c.g.disc_k.add(c.comp_elems[ib], gb);
                if (glue_set.insert({c.g.disc_lp.index_of(na), c.g.disc_k.index_of(nb)}).second) grew = true;
            }
    }
    c.glue_set = std::move(glue_set);

    MatQ sub_inv = inverse(c.sub_lat.gram());
    MatQ comp_inv = inverse(c.comp_lat.gram());
    auto project = [&](const VecQ& amb, const MatZ& basis, const MatQ& gram_inv) {
        int r = basis.cols();
        VecQ t(r, Rat(0));
        for (int i = 0; i < r; ++i) {
            Rat s = 0;
            for (int a = 0; a < basis.rows(); ++a) {
                if (basis(a, i) == 0) continue;
                for (int b = 0; b < basis.rows(); ++b)
                    if (amb[b] != 0) s += Rat(basis(a, i) * l0.gram()(a, b)) * amb[b];
            }
            t[i] = s;
        }
        VecQ outv(r, Rat(0));
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) outv[i] += gram_inv(i, j) * t[j];
        return outv;
    };
    c.amb_split.resize(c.amb_elems.size());
    for (size_t i = 0; i < c.amb_elems.size(); ++i) {
        VecQ v = c.g.disc_l.lift(c.amb_elems[i]);
        VecQ pa = project(v, sub_basis, sub_inv);
        VecQ pb = project(v, comp_basis, comp_inv);
        c.amb_split[i] = {c.g.disc_lp.index_of(c.g.disc_lp.element_of(pa)),
                          c.g.disc_k.index_of(c.g.disc_k.element_of(pb))};
    }
    return c;
}

DiscPermutation comp_action(const PairContext& c, const MatZ& psi) {
    DiscPermutation p(c.comp_elems.size());
    for (size_t i = 0; i < c.comp_elems.size(); ++i) {
        VecQ lift = c.g.disc_k.lift(c.comp_elems[i]);
        VecQ mapped(lift.size(), Rat(0));
        for (size_t r = 0; r < lift.size(); ++r)
            for (size_t s = 0; s < lift.size(); ++s)
                if (psi(static_cast<int>(r), static_cast<int>(s)) != 0)
                    mapped[r] += Rat(psi(static_cast<int>(r), static_cast<int>(s))) * lift[s];
        p[i] = c.g.disc_k.index_of(c.g.disc_k.element_of(mapped));
    }
    return p;
}

bool pair_preserves_glue(const PairContext& c, const DiscPermutation& phi, const DiscPermutation& psi_bar) {
    for (const auto& [ia, ib] : c.glue_set)
        if (!c.glue_set.count({phi[ia], psi_bar[ib]})) return false;
    return true;
}

DiscPermutation ambient_action(const PairContext& c, const DiscPermutation& phi, const DiscPermutation& psi_bar) {
    DiscPermutation out(c.amb_elems.size());
    for (size_t i = 0; i < c.amb_elems.size(); ++i) {
        auto [ia, ib] = c.amb_split[i];
        long ja = phi[ia], jb = psi_bar[ib];
        VecQ la = c.g.disc_lp.lift(c.sub_elems[ja]);
        VecQ lb = c.g.disc_k.lift(c.comp_elems[jb]);
        VecQ amb(c.l0->rank(), Rat(0));
        for (int r = 0; r < c.l0->rank(); ++r) {
            for (int s = 0; s < c.g.lp_basis.cols(); ++s) amb[r] += Rat(c.g.lp_basis(r, s)) * la[s];
            for (int s = 0; s < c.g.k_basis.cols(); ++s) amb[r] += Rat(c.g.k_basis(r, s)) * lb[s];
        }
        out[i] = c.g.disc_l.index_of(c.g.disc_l.element_of(amb));
    }
    return out;
}

bool gamma_allows(const PairContext& c, const DiscPermutation& amb_act) {
    if (c.gamma == GroupKind::Full) return true;
    return is_identity_perm(amb_act) || amb_act == c.amb_neg;
}

bool rank_certificate(const Lattice& sub, const DiscriminantForm& d) {
    auto sig = sub.signature();
    if (sig.first == 0 || sig.second == 0) return false;
    return sub.rank() >= d.ngens() + 2;
}

// Pairs realized by reflections in short vectors of the sublattice or the
// complement, closed into a group; a certified lower bound.
std::vector<std::pair<DiscPermutation, DiscPermutation>> realized_pairs(const PairContext& c,
                                                                        const MatZ& sub_basis,
                                                                        const MatZ& comp_basis) {
    const Lattice& l0 = *c.l0;
    std::vector<std::pair<DiscPermutation, DiscPermutation>> gens;

    auto action_of_reflection = [&](const VecZ& w, const MatZ& basis, const DiscriminantForm& disc) {
        Int ww = l0.norm(w);
        auto elems = disc.elements();
        DiscPermutation p(elems.size());
        for (size_t i = 0; i < elems.size(); ++i) {
            VecQ lift = disc.lift(elems[i]);
            VecQ amb(l0.rank(), Rat(0));
            for (int r = 0; r < l0.rank(); ++r)
                for (int s = 0; s < basis.cols(); ++s) amb[r] += Rat(basis(r, s)) * lift[s];
            Rat coef = Rat(2) * l0.pair(amb, to_rational(w)) / Rat(ww);
            for (int r = 0; r < l0.rank(); ++r) amb[r] -= coef * Rat(w[r]);
            VecQ coords = solve_exact(basis, amb);
            p[i] = disc.index_of(disc.element_of(coords));
        }
        return p;
    };

    auto consider = [&](const VecZ& w, bool in_sub) {
        Int ww = l0.norm(w);
        if (ww == 0) return;
        Int aww = ww < 0 ? -ww : ww;
        if (aww != 2 && aww != 4) return;
        Int dv = l0.divisor(w);
        if ((2 * dv) % aww != 0) return;
        DiscPermutation phi = identity_perm(c.sub_elems.size());
        DiscPermutation psb = identity_perm(c.comp_elems.size());
        if (in_sub)
            phi = action_of_reflection(w, sub_basis, c.g.disc_lp);
        else
            psb = action_of_reflection(w, comp_basis, c.g.disc_k);
        if (!pair_preserves_glue(c, phi, psb)) return;
        if (!gamma_allows(c, ambient_action(c, phi, psb))) return;
        gens.emplace_back(std::move(phi), std::move(psb));
    };

    int rank = sub_basis.cols();
    std::vector<long> coord(rank, 0);
    std::function<void(int)> rec = [&](int i) {
        if (i == rank) {
            VecZ amb(l0.rank(), Int(0));
            bool zero = true;
            for (int r = 0; r < l0.rank(); ++r) {
                Int s = 0;
                for (int j = 0; j < rank; ++j) s += sub_basis(r, j) * Int(coord[j]);
                amb[r] = s;
                if (s != 0) zero = false;
            }
            if (!zero) consider(amb, true);
            return;
        }
        for (long t = -2; t <= 2; ++t) {
            coord[i] = t;
            rec(i + 1);
        }
    };
    rec(0);
    Lattice comp_pos = c.comp_lat.twist();
    for (const auto& e : short_vectors(comp_pos, Rat(4))) {
        VecZ amb(l0.rank(), Int(0));
        for (int r = 0; r < l0.rank(); ++r) {
            Rat s = 0;
            for (int j = 0; j < comp_basis.cols(); ++j) s += Rat(comp_basis(r, j)) * e.x[j];
            amb[r] = s.get_num();
        }
        consider(amb, false);
    }
    gens.emplace_back(c.sub_neg, negation_permutation(c.g.disc_k));

    // Bounded-height isometries of the sublattice paired with complement
    // automorphisms; every hit is an explicit ambient stabilizer element.
    for (const auto& t : bounded_isometries(c.sub_lat, c.sub_lat.rank() <= 4 ? 3 : 2)) {
        auto elems = c.sub_elems;
        DiscPermutation phi(elems.size());
        for (size_t i = 0; i < elems.size(); ++i) {
            VecQ lift = c.g.disc_lp.lift(elems[i]);
            VecQ img(lift.size(), Rat(0));
            for (size_t r = 0; r < lift.size(); ++r)
                for (size_t s = 0; s < lift.size(); ++s)
                    if (t(static_cast<int>(r), static_cast<int>(s)) != 0)
                        img[r] += Rat(t(static_cast<int>(r), static_cast<int>(s))) * lift[s];
            phi[i] = c.g.disc_lp.index_of(c.g.disc_lp.element_of(img));
        }
        for (const auto& psi : all_autos(c.comp_lat)) {
            DiscPermutation psb = comp_action(c, psi);
            if (!pair_preserves_glue(c, phi, psb)) continue;
            if (!gamma_allows(c, ambient_action(c, phi, psb))) continue;
            gens.emplace_back(phi, psb);
        }
    }
    return gens;
}

}  // namespace

std::array<int, 4> find_2u_block(const Lattice& l) {
    const MatZ& g = l.gram();
    int n = l.rank();
    std::vector<std::pair<int, int>> upairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (g(i, i) != 0 || g(j, j) != 0 || g(i, j) != 1) continue;
            bool clean = true;
            for (int k = 0; k < n && clean; ++k) {
                if (k == i || k == j) continue;
                if (g(i, k) != 0 || g(j, k) != 0) clean = false;
            }
            if (clean) upairs.emplace_back(i, j);
        }
    for (size_t a = 0; a < upairs.size(); ++a)
        for (size_t b = a + 1; b < upairs.size(); ++b) {
            auto [i1, j1] = upairs[a];
            auto [i2, j2] = upairs[b];
            if (i1 != i2 && i1 != j2 && j1 != i2 && j1 != j2) return {i1, j1, i2, j2};
        }
    fail(errc::unsupported_regime, "no visible 2U block in the lattice basis");
}

std::vector<DiscPermutation> ambient_action_group(const Lattice& l0, GroupKind gamma,
                                                  const DiscriminantForm& disc) {
    DiscPermutation neg = negation_permutation(disc);
    if (gamma == GroupKind::Hat) return {canonical_mod_pm(identity_perm(disc.elements().size()), neg)};
    if (!rank_certificate(l0, disc))
        fail(errc::unsupported_regime, "cannot certify the O(A) image for the full group");
    std::vector<DiscPermutation> out;
    std::set<DiscPermutation> seen;
    for (const auto& p : disc_form_autos(disc)) {
        DiscPermutation c = canonical_mod_pm(p, neg);
        if (seen.insert(c).second) out.push_back(c);
    }
    std::sort(out.begin(), out.end());
    return out;
}

VectorKey vector_key(const Lattice& l0, const DiscriminantForm& disc, const VecZ& l, GroupKind gamma) {
    Int norm = l0.norm(l);
    Int d = l0.divisor(l);
    VecQ lq(l.size());
    for (size_t i = 0; i < l.size(); ++i) lq[i] = make_rat(l[i], d);
    DiscElement lstar = disc.element_of(lq);
    auto group = ambient_action_group(l0, gamma, disc);
    DiscPermutation neg = negation_permutation(disc);
    DiscElement best = lstar;
    for (const auto& p : group)
        for (const auto& q : {p, compose(neg, p)}) {
            DiscElement cand = disc.element_at(q[disc.index_of(lstar)]);
            if (cand.r < best.r) best = cand;
        }
    return VectorKey{norm, d, best};
}

int ramification_index(const Lattice& l0, const MatZ& sub_basis, const MatZ& comp_basis, GroupKind gamma) {
    PairContext c = make_context(l0, sub_basis, comp_basis, gamma);
    DiscPermutation phi = identity_perm(c.sub_elems.size());
    DiscPermutation psb = negation_permutation(c.g.disc_k);
    if (!pair_preserves_glue(c, phi, psb)) return 1;
    if (!gamma_allows(c, ambient_action(c, phi, psb))) return 1;
    return 2;
}

int flag_ramification(const Lattice& l0, const MatZ& carrier_sub, const MatZ& carrier_comp,
                      const MatZ& p_in_carrier, const MatZ& l_in_carrier, GroupKind gamma) {
    Lattice carrier_lat = l0.sublattice_gram(carrier_sub);
    PairContext inner = make_context(carrier_lat, p_in_carrier, l_in_carrier, gamma);
    DiscPermutation phi_in = identity_perm(inner.sub_elems.size());
    DiscPermutation psb_in = negation_permutation(inner.g.disc_k);
    if (!pair_preserves_glue(inner, phi_in, psb_in)) return 1;
    DiscPermutation sigma_on_sub = ambient_action(inner, phi_in, psb_in);
    PairContext outer = make_context(l0, carrier_sub, carrier_comp, gamma);
    for (const auto& psi : all_autos(outer.comp_lat)) {
        DiscPermutation psb = comp_action(outer, psi);
        if (!pair_preserves_glue(outer, sigma_on_sub, psb)) continue;
        if (!gamma_allows(outer, ambient_action(outer, sigma_on_sub, psb))) continue;
        return 2;
    }
    return 1;
}

StabPairs stabilizer_pairs(const Lattice& l0, const MatZ& sub_basis, const MatZ& comp_basis, GroupKind gamma) {
    PairContext c = make_context(l0, sub_basis, comp_basis, gamma);
    StabPairs out;
    out.certified = rank_certificate(c.sub_lat, c.g.disc_lp);

    auto phis = disc_form_autos(c.g.disc_lp);
    auto psis = all_autos(c.comp_lat);
    std::vector<std::pair<DiscPermutation, DiscPermutation>> upper;
    std::vector<MatZ> upper_psi;
    for (const auto& psi : psis) {
        DiscPermutation psb = comp_action(c, psi);
        for (const auto& phi : phis) {
            if (!pair_preserves_glue(c, phi, psb)) continue;
            if (!gamma_allows(c, ambient_action(c, phi, psb))) continue;
            upper.emplace_back(phi, psb);
            upper_psi.push_back(psi);
        }
    }

    if (!out.certified) {
        auto gens = realized_pairs(c, sub_basis, comp_basis);
        std::set<std::pair<DiscPermutation, DiscPermutation>> closed;
        std::deque<std::pair<DiscPermutation, DiscPermutation>> todo;
        closed.insert({identity_perm(c.sub_elems.size()), identity_perm(c.comp_elems.size())});
        for (auto& g : gens)
            if (closed.insert(g).second) todo.push_back(g);
        while (!todo.empty()) {
            auto g = todo.front();
            todo.pop_front();
            std::vector<std::pair<DiscPermutation, DiscPermutation>> snap(closed.begin(), closed.end());
            for (const auto& h : snap) {
                std::pair<DiscPermutation, DiscPermutation> prod{compose(g.first, h.first),
                                                                 compose(g.second, h.second)};
                if (closed.insert(prod).second) todo.push_back(prod);
            }
        }
        std::set<std::pair<DiscPermutation, DiscPermutation>> upper_set(upper.begin(), upper.end());
        if (upper_set != closed) {
            std::string detail = "stabilizer image not certified (upper " + std::to_string(upper_set.size()) +
                                 ", realized " + std::to_string(closed.size()) + ") on gram";
            for (int i = 0; i < c.sub_lat.rank(); ++i)
                for (int j = 0; j < c.sub_lat.rank(); ++j) detail += " " + to_string(c.sub_lat.gram()(i, j));
            fail(errc::unsupported_regime, detail);
        }
    }

    DiscPermutation neg = negation_permutation(c.g.disc_lp);
    std::set<DiscPermutation> phi_seen;
    std::set<std::string> psi_seen;
    for (size_t i = 0; i < upper.size(); ++i) {
        out.pairs.push_back(PairElement{upper[i].first, upper_psi[i]});
        DiscPermutation cp = canonical_mod_pm(upper[i].first, neg);
        if (phi_seen.insert(cp).second) out.phi_mod_pm.push_back(cp);
        std::string key;
        for (int r = 0; r < upper_psi[i].rows(); ++r)
            for (int s = 0; s < upper_psi[i].cols(); ++s) key += upper_psi[i](r, s).get_str() + ",";
        if (psi_seen.insert(key).second) out.psi_parts.push_back(upper_psi[i]);
    }
    std::sort(out.phi_mod_pm.begin(), out.phi_mod_pm.end());
    return out;
}

namespace {

MatZ transvection(const Lattice& l, const VecZ& e, const VecZ& a) {
    int n = l.rank();
    MatZ m(n, n);
    Int qa = l.norm(a) / 2;
    for (int j = 0; j < n; ++j) {
        VecZ x(n, Int(0));
        x[j] = 1;
        Int xa = l.pair(x, a), xe = l.pair(x, e);
        for (int i = 0; i < n; ++i) m(i, j) = x[i] + xa * e[i] - xe * a[i] - qa * xe * e[i];
    }
    return m;
}

bool is_isometry(const Lattice& l, const MatZ& m) { return m.transpose() * l.gram() * m == l.gram(); }

std::vector<MatZ> block_swaps(const Lattice& l) {
    std::vector<MatZ> out;
    int n = l.rank();
    auto isolated = [&](int i) {
        for (int k = 0; k < n; ++k)
            if (k != i && l.gram()(i, k) != 0) return false;
        return true;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (!isolated(i) || !isolated(j)) continue;
            if (l.gram()(i, i) != l.gram()(j, j)) continue;
            MatZ m = MatZ::identity(n);
            m(i, i) = 0;
            m(j, j) = 0;
            m(i, j) = 1;
            m(j, i) = 1;
            out.push_back(m);
        }
    return out;
}

}  // namespace

std::optional<MatZ> connect_vectors(const Lattice& l0, const VecZ& from, const VecZ& to, GroupKind gamma) {
    int n = l0.rank();
    if (from == to || from == negate(to)) return MatZ::identity(n);

    auto block = find_2u_block(l0);
    std::vector<MatZ> moves;
    std::vector<VecZ> isotropics;
    for (int idx : block) {
        VecZ e(n, Int(0));
        e[idx] = 1;
        isotropics.push_back(e);
    }
    for (const auto& e : isotropics)
        for (int j = 0; j < n; ++j) {
            for (Int s : {Int(1), Int(-1)}) {
                VecZ a(n, Int(0));
                a[j] = s;
                if (l0.pair(e, a) != 0) continue;
                if (a == e || a == negate(e)) continue;
                MatZ t = transvection(l0, e, a);
                if (!is_isometry(l0, t)) fail(errc::invalid_input, "transvection is not an isometry");
                moves.push_back(t);
            }
        }
    for (int j = 0; j < n; ++j) {
        Int d = l0.gram()(j, j);
        if (d == 2 || d == -2) {
            MatZ m = MatZ::identity(n);
            VecZ w(n, Int(0));
            w[j] = 1;
            for (int col = 0; col < n; ++col) {
                VecZ x(n, Int(0));
                x[col] = 1;
                Int coef = 2 * l0.pair(x, w) / d;
                for (int r = 0; r < n; ++r) m(r, col) = x[r] - coef * w[r];
            }
            if (is_isometry(l0, m)) moves.push_back(m);
        }
    }
    if (gamma == GroupKind::Full)
        for (auto& m : block_swaps(l0)) moves.push_back(m);

    Int capn = 0;
    for (const auto& x : from) capn = std::max(capn, x < 0 ? -x : x);
    for (const auto& x : to) capn = std::max(capn, x < 0 ? -x : x);
    long cap = capn.get_si() + 6;
    auto in_bounds = [&](const VecZ& v) {
        for (const auto& x : v)
            if (x > cap || x < -cap) return false;
        return true;
    };
    std::map<VecZ, MatZ> visited;
    std::deque<VecZ> queue;
    visited.emplace(from, MatZ::identity(n));
    queue.push_back(from);
    VecZ tneg = negate(to);
    size_t expansions = 0;
    while (!queue.empty() && expansions < 120000) {
        VecZ cur = queue.front();
        queue.pop_front();
        ++expansions;
        MatZ path = visited.at(cur);
        for (const auto& m : moves) {
            VecZ nxt = mat_apply(m, cur);
            if (!in_bounds(nxt) || visited.count(nxt)) continue;
            MatZ comp = m * path;
            if (nxt == to || nxt == tneg) return comp;
            visited.emplace(nxt, comp);
            queue.push_back(nxt);
        }
    }
    return std::nullopt;
}

namespace {

std::vector<VectorKey> enumerate_keys(const Lattice& l0, const DiscriminantForm& disc, GroupKind gamma,
                                      const Rat& bound) {
    std::vector<VectorKey> keys;
    auto group = ambient_action_group(l0, gamma, disc);
    DiscPermutation neg = negation_permutation(disc);
    for (const auto& lam : disc.elements()) {
        DiscElement best = lam;
        for (const auto& p : group)
            for (const auto& q : {p, compose(neg, p)}) {
                DiscElement cand = disc.element_at(q[disc.index_of(lam)]);
                if (cand.r < best.r) best = cand;
            }
        if (best.r != lam.r) continue;
        Int dd(element_order(disc, lam));
        Rat qv = disc.q_value(lam);
        Rat lowq = Rat(-2) * bound * Rat(dd * dd);
        for (Int t = -2; Rat(t) >= lowq; t -= 2) {
            Rat rem = (Rat(t) - Rat(dd * dd) * qv) / (Rat(2) * Rat(dd * dd));
            if (!is_integer(rem)) continue;
            keys.push_back(VectorKey{t, dd, lam});
        }
    }
    std::sort(keys.begin(), keys.end());
    return keys;
}

VecZ construct_witness(const Lattice& l0, const DiscriminantForm& disc, const std::array<int, 4>& block,
                       const VectorKey& key) {
    int n = l0.rank();
    VecQ w = disc.lift(key.lstar);
    for (int idx : block) {
        if (!is_integer(w[idx])) fail(errc::invalid_input, "2U coordinates of a dual lift must be integral");
        w[idx] = 0;
    }
    Rat ww = l0.norm(w);
    Rat beta_q = (Rat(key.norm) / Rat(key.div * key.div) - ww) / 2;
    if (!is_integer(beta_q)) fail(errc::invalid_input, "witness congruence failure");
    Int beta = beta_q.get_num();
    VecZ l(n, Int(0));
    for (int i = 0; i < n; ++i) {
        Rat c = Rat(key.div) * w[i];
        if (!is_integer(c)) fail(errc::invalid_input, "witness lift not integral");
        l[i] = c.get_num();
    }
    l[block[0]] += key.div;
    l[block[1]] += key.div * beta;
    if (l0.norm(l) != key.norm) fail(errc::invalid_input, "witness norm mismatch");
    if (l0.divisor(l) != key.div) fail(errc::invalid_input, "witness divisor mismatch");
    if (!l0.is_primitive(l)) fail(errc::invalid_input, "witness not primitive");
    return l;
}

bool corank2_equivalent(const Lattice& l0, GroupKind gamma, const MatZ& p1, const MatZ& r1, const MatZ& p2,
                        const MatZ& r2) {
    Lattice pl1 = l0.sublattice_gram(p1), pl2 = l0.sublattice_gram(p2);
    Lattice rl1 = l0.sublattice_gram(r1), rl2 = l0.sublattice_gram(r2);
    if (pl1.det() != pl2.det() || rl1.det() != rl2.det()) return false;
    PairContext c1 = make_context(l0, p1, r1, gamma);
    PairContext c2 = make_context(l0, p2, r2, gamma);
    if (c1.g.index != c2.g.index) return false;
    auto psis = isometries_between(rl1, rl2);
    if (psis.empty()) return false;
    std::vector<std::vector<long>> phis;
    if (rank_certificate(pl1, c1.g.disc_lp)) {
        phis = disc_form_isometries(c1.g.disc_lp, c2.g.disc_lp);
    } else {
        // Without the rank certificate only explicitly realized sublattice
        // isometries are admitted.
        for (const auto& t : bounded_isometries_between(pl1, pl2, 2)) {
            std::vector<long> phi(c1.sub_elems.size());
            for (size_t i = 0; i < c1.sub_elems.size(); ++i) {
                VecQ lift = c1.g.disc_lp.lift(c1.sub_elems[i]);
                VecQ img(lift.size(), Rat(0));
                for (size_t r = 0; r < lift.size(); ++r)
                    for (size_t ss = 0; ss < lift.size(); ++ss)
                        if (t(static_cast<int>(r), static_cast<int>(ss)) != 0)
                            img[r] += Rat(t(static_cast<int>(r), static_cast<int>(ss))) * lift[ss];
                phi[i] = c2.g.disc_lp.index_of(c2.g.disc_lp.element_of(img));
            }
            phis.push_back(std::move(phi));
        }
    }
    if (phis.empty()) return false;
    for (const auto& psi : psis) {
        DiscPermutation psb(c1.comp_elems.size());
        for (size_t i = 0; i < c1.comp_elems.size(); ++i) {
            VecQ lift = c1.g.disc_k.lift(c1.comp_elems[i]);
            VecQ mapped(lift.size(), Rat(0));
            for (size_t r = 0; r < lift.size(); ++r)
                for (size_t s = 0; s < lift.size(); ++s)
                    if (psi(static_cast<int>(r), static_cast<int>(s)) != 0)
                        mapped[r] += Rat(psi(static_cast<int>(r), static_cast<int>(s))) * lift[s];
            psb[i] = c2.g.disc_k.index_of(c2.g.disc_k.element_of(mapped));
        }
        for (const auto& phi : phis) {
            bool glue_ok = true;
            for (const auto& [ia, ib] : c1.glue_set)
                if (!c2.glue_set.count({phi[ia], psb[ib]})) {
                    glue_ok = false;
                    break;
                }
            if (!glue_ok) continue;
            if (gamma == GroupKind::Full) return true;
            DiscPermutation amb(c1.amb_elems.size());
            for (size_t i = 0; i < c1.amb_elems.size(); ++i) {
                auto [ia, ib] = c1.amb_split[i];
                long ja = phi[ia], jb = psb[ib];
                VecQ la = c2.g.disc_lp.lift(c2.sub_elems[ja]);
                VecQ lb = c2.g.disc_k.lift(c2.comp_elems[jb]);
                VecQ ambv(l0.rank(), Rat(0));
                for (int r = 0; r < l0.rank(); ++r) {
                    for (int s = 0; s < p2.cols(); ++s) ambv[r] += Rat(p2(r, s)) * la[s];
                    for (int s = 0; s < r2.cols(); ++s) ambv[r] += Rat(r2(r, s)) * lb[s];
                }
                amb[i] = c2.g.disc_l.index_of(c2.g.disc_l.element_of(ambv));
            }
            if (is_identity_perm(amb) || amb == c1.amb_neg) return true;
        }
    }
    return false;
}

}  // namespace

std::vector<Corank1Class> classify_corank1(const Lattice& l0, GroupKind gamma, const Rat& bound) {
    auto block = find_2u_block(l0);
    auto disc = std::make_shared<DiscriminantForm>(l0);
    std::vector<Corank1Class> out;
    if (bound <= 0) return out;
    for (const auto& key : enumerate_keys(l0, *disc, gamma, bound)) {
        Corank1Class c;
        c.key = key;
        c.witness = construct_witness(l0, *disc, block, key);
        Sublattice sub = orth_complement(l0, c.witness);
        c.sub_basis = sub.basis;
        MatZ comp(l0.rank(), 1);
        comp.set_col(0, c.witness);
        c.comp_basis = comp;
        c.sub_lattice = l0.sublattice_gram(c.sub_basis);
        c.sub_disc = std::make_shared<DiscriminantForm>(c.sub_lattice);
        c.ramification = ramification_index(l0, c.sub_basis, c.comp_basis, gamma);
        StabPairs sp = stabilizer_pairs(l0, c.sub_basis, c.comp_basis, gamma);
        c.action = sp.phi_mod_pm;
        out.push_back(std::move(c));
    }
    return out;
}

OrbitTable classify(const Lattice& l0, GroupKind gamma, const Rat& bound, bool with_corank2) {
    OrbitTable t;
    t.l0 = l0;
    t.gamma = gamma;
    t.bound = bound;
    t.l0_disc = std::make_shared<DiscriminantForm>(l0);
    t.corank1 = classify_corank1(l0, gamma, bound);
    if (!with_corank2) return t;

    for (size_t ci = 0; ci < t.corank1.size(); ++ci) {
        const Corank1Class& carrier = t.corank1[ci];
        const Lattice& sub = carrier.sub_lattice;
        int rank = sub.rank();
        Int dmax = 1;
        for (const auto& e : carrier.sub_disc->elements()) {
            Int o(element_order(*carrier.sub_disc, e));
            if (o > dmax) dmax = o;
        }
        Rat norm_floor = Rat(-2) * bound * Rat(dmax * dmax);
        std::set<std::string> hnf_seen;
        const int height = 2;
        std::vector<long> coord(rank, 0);
        std::function<void(int)> rec = [&](int i) {
            if (i == rank) {
                VecZ inl0(l0.rank(), Int(0));
                bool zero = true;
                for (int r = 0; r < l0.rank(); ++r) {
                    Int s = 0;
                    for (int j = 0; j < rank; ++j) s += carrier.sub_basis(r, j) * Int(coord[j]);
                    inl0[r] = s;
                    if (s != 0) zero = false;
                }
                if (zero) return;
                Int nrm = l0.norm(inl0);
                if (nrm >= 0 || Rat(nrm) < norm_floor) return;
                if (!l0.is_primitive(inl0)) return;
                VecZ sub_coords(rank);
                for (int j = 0; j < rank; ++j) sub_coords[j] = Int(coord[j]);
                Int dsub = sub.divisor(sub_coords);
                if (Rat(nrm) < Rat(-2) * bound * Rat(dsub * dsub)) return;
                MatZ two(l0.rank(), 2);
                two.set_col(0, carrier.witness);
                two.set_col(1, inl0);
                Sublattice p = orth_complement(l0, two);
                Sublattice r = orth_complement(l0, p.basis);
                Lattice rl = l0.sublattice_gram(r.basis);
                if (!rl.negative_definite()) return;
                {
                    HermiteForm hf = hermite_form(p.basis);
                    std::string key;
                    for (int i = 0; i < hf.h.rows(); ++i)
                        for (int j = 0; j < hf.h.cols(); ++j) key += hf.h(i, j).get_str() + ",";
                    if (!hnf_seen.insert(key).second) return;
                }
                for (const auto& seen : t.corank2)
                    if (corank2_equivalent(l0, gamma, seen.p_basis, seen.r_basis, p.basis, r.basis)) return;
                Corank2Class c2;
                c2.p_basis = p.basis;
                c2.r_basis = r.basis;
                c2.p_lattice = l0.sublattice_gram(p.basis);
                c2.r_lattice = rl;
                c2.p_disc = std::make_shared<DiscriminantForm>(c2.p_lattice);
                c2.stab = stabilizer_pairs(l0, c2.p_basis, c2.r_basis, gamma);
                c2.group_order = static_cast<long>(c2.stab.phi_mod_pm.size());
                c2.action = c2.stab.phi_mod_pm;
                t.corank2.push_back(std::move(c2));
                return;
            }
            for (long v = -height; v <= height; ++v) {
                coord[i] = v;
                rec(i + 1);
            }
        };
        rec(0);
    }

    for (size_t pi = 0; pi < t.corank2.size(); ++pi) {
        const Corank2Class& p = t.corank2[pi];
        Lattice rpos = p.r_lattice.twist();
        for (size_t ci = 0; ci < t.corank1.size(); ++ci) {
            const Corank1Class& carrier = t.corank1[ci];
            Rat target_norm = Rat(carrier.key.norm < 0 ? -carrier.key.norm : carrier.key.norm);
            std::vector<VecZ> cands;
            for (const auto& e : short_vectors(rpos, target_norm)) {
                if (e.norm != target_norm) continue;
                VecZ rc(e.x.size());
                for (size_t i = 0; i < e.x.size(); ++i) rc[i] = e.x[i].get_num();
                if (!p.r_lattice.is_primitive(rc)) continue;
                VecZ amb(l0.rank(), Int(0));
                for (int r = 0; r < l0.rank(); ++r) {
                    Int s = 0;
                    for (int j = 0; j < p.r_basis.cols(); ++j) s += p.r_basis(r, j) * rc[j];
                    amb[r] = s;
                }
                if (vector_key(l0, *t.l0_disc, amb, gamma) == carrier.key) cands.push_back(rc);
            }
            if (cands.empty()) continue;
            std::set<VecZ> cand_set(cands.begin(), cands.end());
            std::vector<std::vector<VecZ>> orbits;
            std::set<VecZ> assigned;
            for (const auto& k : cands) {
                if (assigned.count(k)) continue;
                std::vector<VecZ> orbit;
                std::deque<VecZ> todo{k};
                assigned.insert(k);
                while (!todo.empty()) {
                    VecZ cur = todo.front();
                    todo.pop_front();
                    orbit.push_back(cur);
                    for (const auto& m : p.stab.psi_parts)
                        for (const VecZ& nxt : {mat_apply(m, cur), negate(mat_apply(m, cur))}) {
                            if (!cand_set.count(nxt)) continue;
                            if (assigned.insert(nxt).second) todo.push_back(nxt);
                        }
                }
                orbits.push_back(std::move(orbit));
            }
            for (const auto& orbit : orbits) {
                VecZ k_amb(l0.rank(), Int(0));
                for (int r = 0; r < l0.rank(); ++r) {
                    Int s = 0;
                    for (int j = 0; j < p.r_basis.cols(); ++j) s += p.r_basis(r, j) * orbit.front()[j];
                    k_amb[r] = s;
                }
                auto gmove = connect_vectors(l0, k_amb, carrier.witness, gamma);
                if (!gmove) fail(errc::unsupported_regime, "could not transport a flag into carrier coordinates");
                MatZ p_in_carrier = *gmove * p.p_basis;
                MatZ pushed(l0.rank(), p_in_carrier.cols() + 1);
                for (int j = 0; j < p_in_carrier.cols(); ++j) pushed.set_col(j, p_in_carrier.col(j));
                pushed.set_col(p_in_carrier.cols(), carrier.witness);
                Sublattice lvec = orth_complement(l0, pushed);
                if (lvec.rank() != 1) fail(errc::invalid_input, "flag vector extraction failed");
                VecZ l_amb = lvec.basis.col(0);

                FlagClass f;
                f.carrier = static_cast<int>(ci);
                f.target = static_cast<int>(pi);
                f.flag_vector = l_amb;
                f.norm = l0.norm(l_amb);
                VecQ sub_coords = solve_exact(carrier.sub_basis, to_rational(l_amb));
                VecZ sc(sub_coords.size());
                for (size_t i = 0; i < sub_coords.size(); ++i) {
                    if (!is_integer(sub_coords[i])) fail(errc::invalid_input, "flag vector outside the carrier");
                    sc[i] = sub_coords[i].get_num();
                }
                f.div_in_carrier = carrier.sub_lattice.divisor(sc);
                VecQ scq(sc.size());
                for (size_t i = 0; i < sc.size(); ++i) scq[i] = make_rat(sc[i], f.div_in_carrier);
                f.lstar_in_carrier = carrier.sub_disc->element_of(scq);

                // Ramification of P inside the carrier under Gamma_{carrier}:
                // sigma' = id_P ⊕ -id_l must preserve the carrier and admit a
                // complement companion landing in Gamma.
                {
                    MatZ pc(carrier.sub_basis.cols(), p_in_carrier.cols());
                    for (int j = 0; j < p_in_carrier.cols(); ++j) {
                        VecQ col = solve_exact(carrier.sub_basis, to_rational(p_in_carrier.col(j)));
                        for (size_t i = 0; i < col.size(); ++i) pc(static_cast<int>(i), j) = col[i].get_num();
                    }
                    MatZ lc(carrier.sub_basis.cols(), 1);
                    for (size_t i = 0; i < sc.size(); ++i) lc(static_cast<int>(i), 0) = sc[i];
                    f.ramification = flag_ramification(l0, carrier.sub_basis, carrier.comp_basis, pc, lc, gamma);
                }

                // Transfer index [G_P : G_flag], pinning the carrier witness.
                {
                    MatZ rb(l0.rank(), 2);
                    rb.set_col(0, carrier.witness);
                    rb.set_col(1, l_amb);
                    MatZ rbasis = saturation(l0, rb).basis;
                    StabPairs local = stabilizer_pairs(l0, p_in_carrier, rbasis, gamma);
                    if (static_cast<long>(local.phi_mod_pm.size()) != p.group_order)
                        fail(errc::invalid_input, "stabilizer order mismatch across a class");
                    VecQ wit_in_r = solve_exact(rbasis, to_rational(carrier.witness));
                    VecZ wr(wit_in_r.size());
                    for (size_t i = 0; i < wit_in_r.size(); ++i) wr[i] = wit_in_r[i].get_num();
                    DiscriminantForm pdisc(l0.sublattice_gram(p_in_carrier));
                    DiscPermutation neg_sub = negation_permutation(pdisc);
                    std::set<DiscPermutation> pinned;
                    for (const auto& pr : local.pairs) {
                        VecZ img = mat_apply(pr.psi, wr);
                        if (img == wr || img == negate(wr)) pinned.insert(canonical_mod_pm(pr.phi, neg_sub));
                    }
                    if (pinned.empty()) fail(errc::invalid_input, "flag stabilizer came out empty");
                    if (p.group_order % static_cast<long>(pinned.size()) != 0)
                        fail(errc::invalid_input, "flag stabilizer does not divide the class group order");
                    f.transfer_index = Int(p.group_order / static_cast<long>(pinned.size()));
                }
                t.flags.push_back(std::move(f));
            }
        }
    }
    std::sort(t.flags.begin(), t.flags.end(), [](const FlagClass& a, const FlagClass& b) {
        if (a.carrier != b.carrier) return a.carrier < b.carrier;
        if (a.target != b.target) return a.target < b.target;
        if (a.norm != b.norm) return a.norm > b.norm;
        return a.flag_vector < b.flag_vector;
    });
    return t;
}

ModularInput transfer_average_input(const ModularInput& f, const std::vector<DiscPermutation>& group,
                                    const std::vector<DiscPermutation>& subgroup) {
    DiscPermutation neg = negation_permutation(f.disc());
    auto reps = coset_representatives(group, subgroup, neg);
    ModularInput out = ModularInput::zero(f.disc_ptr());
    for (const auto& r : reps) out = out.plus(f.permuted(r));
    return out;
}

std::vector<DiscPermutation> coset_representatives(const std::vector<DiscPermutation>& group,
                                                   const std::vector<DiscPermutation>& subgroup,
                                                   const DiscPermutation& neg) {
    std::vector<DiscPermutation> reps;
    std::set<DiscPermutation> covered;
    for (const auto& g : group) {
        if (covered.count(g)) continue;
        reps.push_back(g);
        for (const auto& h : subgroup) covered.insert(canonical_mod_pm(compose(g, h), neg));
    }
    return reps;
}

}  // namespace bgx
