#include <bgx/isometry.hpp>

#include <bgx/shortvec.hpp>

#include <algorithm>
#include <functional>
#include <map>

namespace bgx {

namespace {

// Work with positive definite copies; negate when needed.
MatZ positive_gram(const Lattice& l) {
    MatZ g = l.gram();
    if (l.negative_definite()) {
        for (int i = 0; i < g.rows(); ++i)
            for (int j = 0; j < g.cols(); ++j) g(i, j) = -g(i, j);
    } else if (!l.positive_definite()) {
        fail(errc::invalid_input, "definite lattice required");
    }
    return g;
}

// Candidate images: all vectors with the norms appearing on the diagonal.
struct SearchSpace {
    std::vector<VecZ> vectors;            // all vectors with norm <= max diagonal
    std::map<Int, std::vector<int>> by_norm;
    MatZ gram;
};

SearchSpace build_space(const MatZ& gram) {
    SearchSpace s;
    s.gram = gram;
    Lattice pos = Lattice::make(gram);
    Int maxd = 0;
    for (int i = 0; i < gram.rows(); ++i) maxd = std::max(maxd, gram(i, i));
    for (const auto& e : short_vectors(pos, Rat(maxd))) {
        VecZ v(e.x.size());
        for (size_t i = 0; i < e.x.size(); ++i) v[i] = e.x[i].get_num();
        s.by_norm[e.norm.get_num()].push_back(static_cast<int>(s.vectors.size()));
        s.vectors.push_back(std::move(v));
    }
    return s;
}

// Backtracking: images of the b-basis inside a's vector pool, preserving all
// pairings. Calls sink on every full solution; sink returning false aborts.
void search_isometries(const MatZ& ga, const MatZ& gb, const std::function<bool(const MatZ&)>& sink) {
    int n = gb.rows();
    SearchSpace space = build_space(ga);
    std::vector<int> chosen(n, -1);
    std::function<bool(int)> rec = [&](int k) -> bool {
        if (k == n) {
            MatZ t(n, n);
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) t(i, j) = space.vectors[chosen[j]][i];
            if (det(t) != 1 && det(t) != -1) return true;  // not surjective, keep looking
            return sink(t);
        }
        auto it = space.by_norm.find(gb(k, k));
        if (it == space.by_norm.end()) return true;
        for (int cand : it->second) {
            bool ok = true;
            for (int j = 0; j < k && ok; ++j)
                if (pair_z(space.gram, space.vectors[cand], space.vectors[chosen[j]]) != gb(k, j)) ok = false;
            if (!ok) continue;
            chosen[k] = cand;
            if (!rec(k + 1)) return false;
            chosen[k] = -1;
        }
        return true;
    };
    rec(0);
}

}  // namespace

std::optional<MatZ> definite_isometry(const Lattice& a, const Lattice& b) {
    if (a.rank() != b.rank()) return std::nullopt;
    if (a.det() != b.det()) return std::nullopt;
    if (a.signature() != b.signature()) return std::nullopt;
    if (a.rank() == 0) return MatZ(0, 0);
    MatZ ga = positive_gram(a), gb = positive_gram(b);
    std::optional<MatZ> found;
    search_isometries(ga, gb, [&](const MatZ& t) {
        found = t;
        return false;
    });
    return found;
}

AutGroup definite_aut_group(const Lattice& a) {
    AutGroup g;
    if (a.rank() == 0) {
        g.elements = {MatZ(0, 0)};
        g.order = 1;
        return g;
    }
    MatZ ga = positive_gram(a);
    search_isometries(ga, ga, [&](const MatZ& t) {
        g.elements.push_back(t);
        return true;
    });
    g.order = Int(static_cast<long>(g.elements.size()));
    for (const auto& t : g.elements)
        if (t != MatZ::identity(a.rank())) g.generators.push_back(t);
    return g;
}

std::vector<Lattice> classify_definite(int r, const Int& det_bound) {
    std::vector<Lattice> out;
    if (r == 0 || det_bound < 1) return out;
    if (r > 3) fail(errc::unsupported_regime, "classify_definite supports rank <= 3");
    std::vector<MatZ> candidates;
    if (r == 1) {
        for (Int d = 2; d <= det_bound; d += 2) candidates.push_back(MatZ{{-d}});
    } else if (r == 2) {
        // Reduced positive binary even forms [[2a, b], [b, 2c]],
        // 0 <= b <= a <= c; negate afterwards. det = 4ac - b^2 >= 3a^2.
        for (Int a = 1; 3 * a * a <= det_bound; ++a)
            for (Int c = a; 4 * a * c - a * a <= det_bound; ++c)
                for (Int b = 0; b <= a; ++b) {
                    Int d = 4 * a * c - b * b;
                    if (d <= 0 || d > det_bound) continue;
                    candidates.push_back(MatZ{{-2 * a, -b}, {-b, -2 * c}});
                }
    } else {
        // Small box of Minkowski-ish reduced ternary even forms; dedup below.
        long m = 0;
        while (Int(4) * (m + 1) * (m + 1) * (m + 1) <= det_bound * 8) ++m;
        m = std::max(m, 1l);
        for (Int a = 1; 2 * a <= 2 * (m + 1); ++a)
            for (Int c = a; c <= m + 1; ++c)
                for (Int e = c; e <= m + 1; ++e)
                    for (Int b = -a; b <= a; ++b)
                        for (Int d = -a; d <= a; ++d)
                            for (Int f = -c; f <= c; ++f) {
                                MatZ g{{-2 * a, -b, -d}, {-b, -2 * c, -f}, {-d, -f, -2 * e}};
                                Int dd = det(g);
                                if (dd >= 0 || -dd > det_bound) continue;
                                auto sig = exact_signature(g);
                                if (sig != std::pair<int, int>(0, 3)) continue;
                                candidates.push_back(g);
                            }
    }
    for (auto& g : candidates) {
        Lattice cand = Lattice::make(g);
        bool fresh = true;
        for (const auto& seen : out)
            if (definite_isometry(seen, cand)) {
                fresh = false;
                break;
            }
        if (fresh) out.push_back(cand);
    }
    std::sort(out.begin(), out.end(), [](const Lattice& x, const Lattice& y) {
        Int dx = x.disc_order(), dy = y.disc_order();
        if (dx != dy) return dx < dy;
        return x.canonical_string() < y.canonical_string();
    });
    return out;
}


std::vector<MatZ> bounded_isometries(const Lattice& a, long height) {
    std::vector<MatZ> out;
    int n = a.rank();
    if (n == 0) return {MatZ(0, 0)};
    // Candidate columns: box vectors matching each diagonal norm.
    std::vector<std::vector<VecZ>> pool(n);
    VecZ x(n, Int(0));
    std::function<void(int)> fill = [&](int i) {
        if (i == n) {
            Int nm = a.norm(x);
            for (int k = 0; k < n; ++k)
                if (nm == a.gram()(k, k)) pool[k].push_back(x);
            return;
        }
        for (long t = -height; t <= height; ++t) {
            x[i] = Int(t);
            fill(i + 1);
        }
    };
    fill(0);
    std::vector<VecZ> cols(n);
    std::function<void(int)> rec = [&](int k) {
        if (k == n) {
            MatZ t(n, n);
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) t(i, j) = cols[j][i];
            Int d = det(t);
            if (d != 1 && d != -1) return;
            if (t.transpose() * a.gram() * t == a.gram()) out.push_back(t);
            return;
        }
        for (const auto& v : pool[k]) {
            bool ok = true;
            for (int j = 0; j < k && ok; ++j)
                if (pair_z(a.gram(), v, cols[j]) != a.gram()(k, j)) ok = false;
            if (!ok) continue;
            cols[k] = v;
            rec(k + 1);
        }
    };
    rec(0);
    return out;
}


std::vector<MatZ> bounded_isometries_between(const Lattice& a, const Lattice& b, long height) {
    // Maps a-coordinates to b-coordinates: columns are b-coordinates of the
    // images of a's basis. Complete only for the height box.
    std::vector<MatZ> out;
    int n = a.rank();
    if (b.rank() != n) return out;
    std::vector<std::vector<VecZ>> pool(n);
    VecZ x(n, Int(0));
    std::function<void(int)> fill = [&](int i) {
        if (i == n) {
            Int nm = b.norm(x);
            for (int k = 0; k < n; ++k)
                if (nm == a.gram()(k, k)) pool[k].push_back(x);
            return;
        }
        for (long t = -height; t <= height; ++t) {
            x[i] = Int(t);
            fill(i + 1);
        }
    };
    fill(0);
    std::vector<VecZ> cols(n);
    std::function<void(int)> rec = [&](int k) {
        if (k == n) {
            MatZ t(n, n);
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) t(i, j) = cols[j][i];
            Int d = det(t);
            if (d != 1 && d != -1) return;
            if (t.transpose() * b.gram() * t == a.gram()) out.push_back(t);
            return;
        }
        for (const auto& v : pool[k]) {
            bool ok = true;
            for (int j = 0; j < k && ok; ++j)
                if (pair_z(b.gram(), v, cols[j]) != a.gram()(k, j)) ok = false;
            if (!ok) continue;
            cols[k] = v;
            rec(k + 1);
        }
    };
    rec(0);
    return out;
}

}  // namespace bgx
