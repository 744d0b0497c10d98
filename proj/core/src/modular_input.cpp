#include <bgx/modular_input.hpp>

#include <sstream>

namespace bgx {

ModularInput::ModularInput(std::shared_ptr<const DiscriminantForm> disc, std::map<Key, Rat> pp, Rat c00)
    : disc_(std::move(disc)), pp_(std::move(pp)), c00_(std::move(c00)) {
    for (auto it = pp_.begin(); it != pp_.end();) {
        if (it->second == 0) {
            it = pp_.erase(it);
            continue;
        }
        const auto& [res, n] = it->first;
        DiscElement e{res};
        if (static_cast<int>(res.size()) != disc_->ngens()) fail(errc::invalid_input, "pp entry arity mismatch");
        DiscElement red = disc_->reduce(res);
        if (red.r != res) fail(errc::invalid_input, "pp entry not reduced");
        if (n >= 0) fail(errc::invalid_input, "principal part exponent must be negative");
        // Congruence n = q(e)/2 mod 1.
        Rat diff = n - disc_->q_value(e) / 2;
        if (!is_integer(diff)) fail(errc::invalid_input, "pp exponent violates the discriminant congruence");
        ++it;
    }
    // Symmetry is checked, never repaired.
    for (const auto& [key, val] : pp_) {
        DiscElement e{key.first};
        DiscElement m = disc_->neg(e);
        auto it = pp_.find({m.r, key.second});
        if (it == pp_.end() || it->second != val)
            fail(errc::invalid_input, "principal part violates c(l,n) = c(-l,n) symmetry");
    }
}

Rat ModularInput::pole_depth() const {
    Rat depth = 0;
    for (const auto& [key, val] : pp_) {
        Rat d = -key.second;
        if (d > depth) depth = d;
    }
    return depth;
}

ModularInput ModularInput::scaled(const Rat& s) const {
    if (s == 0) return zero(disc_);
    std::map<Key, Rat> pp;
    for (const auto& [key, val] : pp_) pp[key] = s * val;
    return ModularInput(disc_, std::move(pp), s * c00_);
}

ModularInput ModularInput::plus(const ModularInput& o, const Rat& co) const {
    if (disc_->orders() != o.disc_->orders()) fail(errc::invalid_input, "plus: grading mismatch");
    std::map<Key, Rat> pp = pp_;
    for (const auto& [key, val] : o.pp_) {
        auto it = pp.find(key);
        if (it == pp.end())
            pp.emplace(key, co * val);
        else {
            it->second += co * val;
            if (it->second == 0) pp.erase(it);
        }
    }
    return ModularInput(disc_, std::move(pp), c00_ + co * o.c00_);
}

ModularInput ModularInput::permuted(const DiscPermutation& perm) const {
    std::map<Key, Rat> pp;
    for (const auto& [key, val] : pp_) {
        DiscElement e{key.first};
        DiscElement img = disc_->element_at(perm[disc_->index_of(e)]);
        pp[{img.r, key.second}] = val;
    }
    return ModularInput(disc_, std::move(pp), c00_);
}

std::string ModularInput::canonical_string() const {
    std::ostringstream os;
    os << "input c00 " << to_string(c00_) << "\n";
    for (const auto& [key, val] : pp_) {
        for (const auto& r : key.first) os << r.get_str() << ' ';
        os << ": " << to_string(key.second) << " -> " << to_string(val) << "\n";
    }
    return os.str();
}

Rat nutilde(const ModularInput& f, const VecZ& l) {
    const Lattice& lat = f.lattice();
    Int norm = lat.norm(l);
    if (norm >= 0) fail(errc::invalid_input, "nutilde needs a negative norm vector");
    if (!lat.is_primitive(l)) fail(errc::invalid_input, "nutilde needs a primitive vector");
    Int d = lat.divisor(l);
    VecQ lq(l.size());
    for (size_t i = 0; i < l.size(); ++i) lq[i] = make_rat(l[i], d);
    DiscElement lstar = f.disc().element_of(lq);
    return nutilde_key(f, norm, d, lstar);
}

Rat nutilde_key(const ModularInput& f, const Int& t, const Int& d, const DiscElement& lstar) {
    Rat depth = f.pole_depth();
    Rat total = 0;
    for (Int k = 1;; ++k) {
        Rat n = Rat(k * k * t) / Rat(2 * d * d);
        if (n < -depth) break;
        DiscElement e = f.disc().smul(k, lstar);
        total += f.coeff(e, n);
    }
    return total;
}

GradedQSeries up_arrow(const ModularInput& f, const GlueData& g) {
    if (g.disc_l.orders() != f.disc().orders())
        fail(errc::invalid_input, "up_arrow: glue data does not match the input lattice");
    auto lp_elems = g.disc_lp.elements();
    auto k_elems = g.disc_k.elements();
    long nk = static_cast<long>(k_elems.size());
    std::vector<Int> orders;
    for (const auto& d : g.disc_lp.orders()) orders.push_back(d);
    for (const auto& d : g.disc_k.orders()) orders.push_back(d);
    GradedQSeries out(orders, Rat(0));
    auto key_of = [&](const DiscElement& a, const DiscElement& b) {
        std::vector<Int> r = a.r;
        r.insert(r.end(), b.r.begin(), b.r.end());
        return DiscElement{std::move(r)};
    };
    for (size_t ia = 0; ia < lp_elems.size(); ++ia)
        for (long ib = 0; ib < nk; ++ib) {
            const auto& lifted = g.coset_lift[ia * nk + ib];
            if (!lifted) continue;
            DiscElement mu = key_of(lp_elems[ia], k_elems[ib]);
            for (const auto& [key, val] : f.pp()) {
                if (key.first != lifted->r) continue;
                out.add(mu, key.second, val);
            }
            if (lifted->is_zero() && f.c00() != 0) out.add(mu, Rat(0), f.c00());
        }
    return out;
}

ModularInput quasi_pullback(const ModularInput& f, const MatZ& sub_basis, const Rat& theta_trunc,
                            std::shared_ptr<const DiscriminantForm> target_disc, int jobs) {
    const Lattice& l = f.lattice();
    GlueData g = glue_with_complement(l, sub_basis);
    Lattice k_lat = l.sublattice_gram(g.k_basis);
    if (!k_lat.negative_definite())
        fail(errc::unsupported_regime, "quasi_pullback: complement is not negative definite");
    Rat depth = f.pole_depth();
    if (theta_trunc < depth)
        fail(errc::trunc_shortfall, "quasi_pullback: theta truncation below the pole depth");
    GradedQSeries theta = theta_series(k_lat, theta_trunc, jobs);

    std::shared_ptr<const DiscriminantForm> out_disc = target_disc;
    if (!out_disc) out_disc = std::make_shared<DiscriminantForm>(g.disc_lp);
    // Residue tuples are written in the convention of the glue sublattice
    // form; a caller-supplied target must come from the identical Gram so
    // the conventions coincide.
    if (out_disc->lattice().gram() != g.disc_lp.lattice().gram())
        fail(errc::invalid_input, "quasi_pullback: target disc form mismatch");

    auto lp_elems = g.disc_lp.elements();
    auto k_elems = g.disc_k.elements();
    long nk = static_cast<long>(k_elems.size());

    std::map<ModularInput::Key, Rat> pp;
    Rat c00 = 0;
    auto accumulate = [&](const DiscElement& beta, const Rat& m, const Rat& v) {
        if (v == 0) return;
        if (m < 0) {
            auto key = ModularInput::Key{beta.r, m};
            pp[key] += v;
            if (pp[key] == 0) pp.erase(key);
        } else if (m == 0 && beta.is_zero()) {
            c00 += v;
        }
    };

    for (size_t ia = 0; ia < lp_elems.size(); ++ia) {
        for (long ib = 0; ib < nk; ++ib) {
            const auto& lifted = g.coset_lift[ia * nk + ib];
            if (!lifted) continue;
            // Input coefficients at the lifted element, including the c00 slot.
            std::vector<std::pair<Rat, Rat>> input_terms;  // (n, value)
            for (const auto& [key, val] : f.pp())
                if (key.first == lifted->r) input_terms.emplace_back(key.second, val);
            if (lifted->is_zero() && f.c00() != 0) input_terms.emplace_back(Rat(0), f.c00());
            if (input_terms.empty()) continue;
            for (const auto& [tkey, tval] : theta.coeffs()) {
                if (tkey.first != k_elems[ib].r) continue;
                const Rat& e = tkey.second;
                for (const auto& [n, v] : input_terms) {
                    Rat m = n + e;
                    if (m > 0) continue;
                    accumulate(lp_elems[ia], m, v * tval);
                }
            }
        }
    }
    return ModularInput(out_disc, std::move(pp), std::move(c00));
}

}  // namespace bgx
