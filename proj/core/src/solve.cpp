#include <bgx/solve.hpp>

#include <bgx/normform.hpp>

#include <sstream>

namespace bgx {

AdmissibleCoords admissible_coords(std::shared_ptr<const DiscriminantForm> disc, const Rat& bound) {
    AdmissibleCoords out;
    out.disc = disc;
    out.bound = bound;
    std::vector<std::pair<Rat, DiscElement>> tmp;  // (exponent, rep)
    for (const auto& e : disc->elements_mod_negation()) {
        Rat q = disc->q_value(e);
        // n = q/2 mod 1, -bound <= n < 0.
        Rat frac = rat_mod(q / 2, Rat(1));
        for (Rat n = frac - 1;; n -= 1) {
            if (n < -bound) break;
            tmp.emplace_back(n, e);
        }
    }
    std::sort(tmp.begin(), tmp.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;  // shallow first
        return a.second < b.second;
    });
    for (auto& [n, e] : tmp) out.coords.emplace_back(e, n);
    return out;
}

long AdmissibleCoords::find(const DiscElement& e, const Rat& n) const {
    DiscElement m = disc->neg(e);
    const DiscElement& rep = e.r <= m.r ? e : m;
    for (size_t i = 0; i < coords.size(); ++i)
        if (coords[i].second == n && coords[i].first == rep) return static_cast<long>(i);
    return -1;
}

ModularInput AdmissibleCoords::to_input(const VecQ& x, const Rat& c00) const {
    std::map<ModularInput::Key, Rat> pp;
    for (size_t i = 0; i < coords.size(); ++i) {
        if (x[i] == 0) continue;
        const auto& [e, n] = coords[i];
        pp[{e.r, n}] = x[i];
        DiscElement m = disc->neg(e);
        pp[{m.r, n}] = x[i];
    }
    return ModularInput(disc, std::move(pp), c00);
}

VecQ AdmissibleCoords::from_input(const ModularInput& f) const {
    VecQ x(coords.size(), Rat(0));
    for (const auto& [key, val] : f.pp()) {
        DiscElement e{key.first};
        DiscElement m = disc->neg(e);
        if (m.r < e.r) continue;  // count each orbit once
        long idx = find(e, key.second);
        if (idx < 0) fail(errc::invalid_input, "input has a coefficient outside the coordinate window");
        x[idx] = val;
    }
    return x;
}

VecQ order_functional(const AdmissibleCoords& coords, const OrderKey& key) {
    VecQ row(coords.coords.size(), Rat(0));
    for (Int k = 1;; ++k) {
        Rat n = Rat(k * k * key.norm) / Rat(2 * key.div * key.div);
        if (n < -coords.bound) break;
        DiscElement e = coords.disc->smul(k, key.lstar);
        long idx = coords.find(e, n);
        if (idx >= 0) row[idx] += 1;
    }
    return row;
}

SolveReport solve_principal_part(const AdmissibleCoords& coords, const std::vector<SolveTarget>& targets,
                                 const std::vector<OrderKey>& all_keys) {
    // Duplicate targets on one key are contradictory unless equal.
    std::map<OrderKey, Rat> rhs;
    for (const auto& t : targets) {
        auto it = rhs.find(t.key);
        if (it != rhs.end() && it->second != t.value) {
            SolveReport r;
            r.infeasible_detail = "contradictory duplicate targets on one class";
            return r;
        }
        rhs[t.key] = t.value;
    }
    for (const auto& k : all_keys)
        if (!rhs.count(k)) rhs[k] = 0;

    long n = coords.dim();
    std::vector<std::pair<OrderKey, Rat>> rows(rhs.begin(), rhs.end());
    MatQ m(static_cast<int>(rows.size()), static_cast<int>(n) + 1);
    for (size_t i = 0; i < rows.size(); ++i) {
        VecQ row = order_functional(coords, rows[i].first);
        for (long j = 0; j < n; ++j) m(static_cast<int>(i), static_cast<int>(j)) = row[j];
        m(static_cast<int>(i), static_cast<int>(n)) = rows[i].second;
    }
    std::vector<int> order;
    for (long j = 0; j < n; ++j) order.push_back(static_cast<int>(j));
    auto pivots = rref(m, &order);
    SolveReport rep;
    for (int i = static_cast<int>(pivots.size()); i < m.rows(); ++i)
        if (m(i, static_cast<int>(n)) != 0) {
            std::ostringstream os;
            os << "inconsistent subsystem: reduced row " << i << " demands 0 = "
               << to_string(m(i, static_cast<int>(n)));
            rep.infeasible_detail = os.str();
            return rep;
        }
    VecQ x(n, Rat(0));
    for (size_t p = 0; p < pivots.size(); ++p) x[pivots[p]] = m(static_cast<int>(p), static_cast<int>(n));
    rep.feasible = true;
    rep.solution = coords.to_input(x);
    return rep;
}

}  // namespace bgx
