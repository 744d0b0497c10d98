#include <bgx/discform.hpp>

#include <algorithm>
#include <functional>
#include <sstream>

namespace bgx {

DiscriminantForm::DiscriminantForm(const Lattice& l) : lattice_(l) {
    if (!l.even()) fail(errc::invalid_input, "discriminant form needs an even lattice");
    int n = l.rank();
    SmithForm s = smith_form(l.gram());
    gram_inv_ = inverse(l.gram());
    // A_L ≅ Z^n / G Z^n via v -> G v; with U G V = D the quotient is
    // ⊕ Z/d_i generated by the images of U^{-1} e_i, and the dual-vector
    // lifts are G^{-1} U^{-1} e_i = V D^{-1} e_i = (col_i V)/d_i.
    std::vector<int> keep;
    for (int i = 0; i < n; ++i)
        if (s.d(i, i) != 1) keep.push_back(i);
    orders_.reserve(keep.size());
    for (int i : keep) orders_.push_back(s.d(i, i));
    lifts_ = MatQ(n, static_cast<int>(keep.size()));
    for (size_t j = 0; j < keep.size(); ++j)
        for (int i = 0; i < n; ++i) lifts_(i, static_cast<int>(j)) = make_rat(s.v(i, keep[j]), s.d(keep[j], keep[j]));
    // Rows of u corresponding to kept factors give residues.
    u_ = MatZ(static_cast<int>(keep.size()), n);
    for (size_t i = 0; i < keep.size(); ++i)
        for (int j = 0; j < n; ++j) u_(static_cast<int>(i), j) = s.u(keep[i], j);
}

Int DiscriminantForm::order() const {
    Int o = 1;
    for (const auto& d : orders_) o *= d;
    return o;
}

DiscElement DiscriminantForm::reduce(std::vector<Int> residues) const {
    if (residues.size() != orders_.size()) fail(errc::invalid_input, "disc element arity mismatch");
    for (size_t i = 0; i < residues.size(); ++i) {
        Int m;
        mpz_fdiv_r(m.get_mpz_t(), residues[i].get_mpz_t(), orders_[i].get_mpz_t());
        residues[i] = m;
    }
    return DiscElement{std::move(residues)};
}

DiscElement DiscriminantForm::add(const DiscElement& a, const DiscElement& b) const {
    std::vector<Int> r(a.r.size());
    for (size_t i = 0; i < r.size(); ++i) r[i] = a.r[i] + b.r[i];
    return reduce(std::move(r));
}

DiscElement DiscriminantForm::neg(const DiscElement& a) const {
    std::vector<Int> r(a.r.size());
    for (size_t i = 0; i < r.size(); ++i) r[i] = -a.r[i];
    return reduce(std::move(r));
}

DiscElement DiscriminantForm::smul(const Int& k, const DiscElement& a) const {
    std::vector<Int> r(a.r.size());
    for (size_t i = 0; i < r.size(); ++i) r[i] = k * a.r[i];
    return reduce(std::move(r));
}

VecQ DiscriminantForm::lift(const DiscElement& a) const {
    VecQ v(lattice_.rank(), Rat(0));
    for (int j = 0; j < ngens(); ++j) {
        if (a.r[j] == 0) continue;
        for (int i = 0; i < lattice_.rank(); ++i) v[i] += Rat(a.r[j]) * lifts_(i, j);
    }
    return v;
}

bool DiscriminantForm::is_dual_vector(const VecQ& v) const {
    for (int i = 0; i < lattice_.rank(); ++i) {
        Rat s = 0;
        for (int j = 0; j < lattice_.rank(); ++j) s += Rat(lattice_.gram()(i, j)) * v[j];
        if (!is_integer(s)) return false;
    }
    return true;
}

DiscElement DiscriminantForm::element_of(const VecQ& v) const {
    // residues = (u * G v) mod d; G v must be integral.
    std::vector<Int> m(lattice_.rank());
    for (int i = 0; i < lattice_.rank(); ++i) {
        Rat s = 0;
        for (int j = 0; j < lattice_.rank(); ++j) s += Rat(lattice_.gram()(i, j)) * v[j];
        if (!is_integer(s)) fail(errc::invalid_input, "not a dual vector");
        m[i] = s.get_num();
    }
    std::vector<Int> r(orders_.size(), Int(0));
    for (int i = 0; i < ngens(); ++i) {
        Int s = 0;
        for (int j = 0; j < lattice_.rank(); ++j) s += u_(i, j) * m[j];
        r[i] = s;
    }
    return reduce(std::move(r));
}

Rat DiscriminantForm::q_value(const DiscElement& a) const {
    VecQ v = lift(a);
    return rat_mod(lattice_.norm(v), Rat(2));
}

Rat DiscriminantForm::b_value(const DiscElement& a, const DiscElement& b) const {
    VecQ va = lift(a), vb = lift(b);
    return rat_mod(lattice_.pair(va, vb), Rat(1));
}

std::vector<DiscElement> DiscriminantForm::elements() const {
    std::vector<DiscElement> out;
    long total = 1;
    for (const auto& d : orders_) total *= d.get_si();
    out.reserve(total);
    std::vector<Int> cur(orders_.size(), Int(0));
    std::function<void(size_t)> rec = [&](size_t i) {
        if (i == orders_.size()) {
            out.push_back(DiscElement{cur});
            return;
        }
        for (Int v = 0; v < orders_[i]; ++v) {
            cur[i] = v;
            rec(i + 1);
        }
    };
    rec(0);
    return out;
}

long DiscriminantForm::index_of(const DiscElement& a) const {
    long idx = 0;
    for (size_t i = 0; i < orders_.size(); ++i) idx = idx * orders_[i].get_si() + a.r[i].get_si();
    return idx;
}

DiscElement DiscriminantForm::element_at(long idx) const {
    std::vector<Int> r(orders_.size(), Int(0));
    for (size_t i = orders_.size(); i-- > 0;) {
        long d = orders_[i].get_si();
        r[i] = Int(idx % d);
        idx /= d;
    }
    return DiscElement{std::move(r)};
}

std::vector<DiscElement> DiscriminantForm::elements_mod_negation() const {
    std::vector<DiscElement> out;
    for (const auto& e : elements()) {
        DiscElement n = neg(e);
        if (e.r <= n.r) out.push_back(e);
    }
    return out;
}

std::string DiscriminantForm::canonical_string() const {
    std::ostringstream os;
    os << "disc";
    for (const auto& d : orders_) os << ' ' << d.get_str();
    os << " q";
    for (const auto& e : elements()) os << ' ' << to_string(q_value(e));
    return os.str();
}

std::vector<DiscPermutation> disc_form_autos(const DiscriminantForm& a) {
    // Group automorphisms preserving q (hence b). Found by assigning images
    // of the invariant-factor generators; |A| is tiny here.
    auto elems = a.elements();
    long n = static_cast<long>(elems.size());
    std::vector<long> elem_order(n);
    std::vector<Rat> qv(n);
    for (long i = 0; i < n; ++i) {
        qv[i] = a.q_value(elems[i]);
        long o = 1;
        DiscElement cur = elems[i];
        while (!cur.is_zero()) {
            cur = a.add(cur, elems[i]);
            ++o;
        }
        elem_order[i] = o;
    }
    int k = a.ngens();
    std::vector<long> gen_idx(k);
    {
        for (int g = 0; g < k; ++g) {
            std::vector<Int> r(k, Int(0));
            r[g] = 1;
            gen_idx[g] = a.index_of(DiscElement{r});
        }
    }
    std::vector<DiscPermutation> autos;
    std::vector<long> image(k, -1);
    std::function<void(int)> rec = [&](int g) {
        if (g == k) {
            // Build the candidate permutation and check bijectivity.
            DiscPermutation perm(n, -1);
            std::vector<bool> hit(n, false);
            for (long i = 0; i < n; ++i) {
                DiscElement img = a.zero();
                for (int j = 0; j < k; ++j)
                    img = a.add(img, a.smul(elems[i].r[j], elems[image[j]]));
                long t = a.index_of(img);
                if (hit[t]) return;
                if (qv[t] != qv[i]) return;
                hit[t] = true;
                perm[i] = t;
            }
            autos.push_back(std::move(perm));
            return;
        }
        long src = gen_idx[g];
        for (long cand = 0; cand < n; ++cand) {
            if (elem_order[cand] != elem_order[src]) continue;
            if (qv[cand] != qv[src]) continue;
            bool ok = true;
            for (int h = 0; h < g && ok; ++h)
                if (a.b_value(elems[cand], elems[image[h]]) != a.b_value(elems[gen_idx[g]], elems[gen_idx[h]]))
                    ok = false;
            if (!ok) continue;
            image[g] = cand;
            rec(g + 1);
            image[g] = -1;
        }
    };
    rec(0);
    return autos;
}

DiscPermutation negation_permutation(const DiscriminantForm& a) {
    auto elems = a.elements();
    DiscPermutation p(elems.size());
    for (size_t i = 0; i < elems.size(); ++i) p[i] = a.index_of(a.neg(elems[i]));
    return p;
}

bool is_identity_perm(const DiscPermutation& p) {
    for (size_t i = 0; i < p.size(); ++i)
        if (p[i] != static_cast<long>(i)) return false;
    return true;
}

DiscPermutation compose(const DiscPermutation& f, const DiscPermutation& g) {
    DiscPermutation h(f.size());
    for (size_t i = 0; i < f.size(); ++i) h[i] = f[g[i]];
    return h;
}

}  // namespace bgx
