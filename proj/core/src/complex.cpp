#include <bgx/complex.hpp>

#include <bgx/normform.hpp>

#include <atomic>
#include <future>
#include <sstream>

namespace bgx {

const ObstructionBasis* match_obstruction(const ObstructionSet& set, const DiscriminantForm& d) {
    for (const auto& ob : set)
        if (ob.matches(d)) return &ob;
    return nullptr;
}

Rat nu_value(const Corank1Class& cls, const ModularInput& f) {
    return nutilde_key(f, cls.key.norm, cls.key.div, cls.key.lstar) / Rat(cls.ramification);
}

Rat nu_value(const FlagClass& flag, const ModularInput& f) {
    return nutilde_key(f, flag.norm, flag.div_in_carrier, flag.lstar_in_carrier) / Rat(flag.ramification);
}

namespace {

TermSpace make_term(std::shared_ptr<const DiscriminantForm> disc, const Rat& bound, int q,
                    const std::vector<DiscPermutation>& action, const ObstructionSet& obstructions) {
    TermSpace t;
    const ObstructionBasis* ob = match_obstruction(obstructions, *disc);
    t.space = ob ? realizable_space(disc, bound, *ob) : formal_space(disc, bound);
    t.term_basis = invariant_subspace(t.space, action);
    t.wedge_q = q;
    t.tuples = wedge_tuples(t.term_basis.cols(), q);
    auto acts = basis_actions(t.space, t.term_basis, action);
    t.wedge_basis = invariant_wedge_basis(acts, t.term_basis.cols(), q);
    return t;
}

ModularInput term_vector(const TermSpace& t, int j) {
    VecQ coords(t.space.coords.dim(), Rat(0));
    for (int i = 0; i < t.term_basis.rows(); ++i) coords[i] = t.term_basis(i, j);
    return t.space.coords.to_input(coords);
}

// Coordinates of an input against the term basis.
VecQ term_coordinates(const TermSpace& t, const ModularInput& f) {
    VecQ x = t.space.coords.from_input(f);
    MatQ m(t.term_basis.rows(), t.term_basis.cols() + 1);
    for (int i = 0; i < t.term_basis.rows(); ++i) {
        for (int j = 0; j < t.term_basis.cols(); ++j) m(i, j) = t.term_basis(i, j);
        m(i, t.term_basis.cols()) = x[i];
    }
    std::vector<int> order;
    for (int j = 0; j < t.term_basis.cols(); ++j) order.push_back(j);
    auto pivots = rref(m, &order);
    for (int i = static_cast<int>(pivots.size()); i < m.rows(); ++i)
        if (m(i, t.term_basis.cols()) != 0)
            fail(errc::invalid_input, "residue image lies outside the modeled term space");
    VecQ y(t.term_basis.cols(), Rat(0));
    for (size_t p = 0; p < pivots.size(); ++p) y[pivots[p]] = m(static_cast<int>(p), t.term_basis.cols());
    return y;
}

}  // namespace

MatQ residue_matrix(const ComplexInstance& inst, int class_index) {
    const Corank1Class& cls = inst.table.corank1[class_index];
    const TermSpace& src = inst.degree0;
    const TermSpace& dst = inst.degree1[class_index];
    // nu values of the degree-0 term basis vectors.
    int m = src.term_basis.cols();
    std::vector<ModularInput> basis_inputs;
    std::vector<Rat> nu(m);
    for (int j = 0; j < m; ++j) {
        basis_inputs.push_back(term_vector(src, j));
        nu[j] = nu_value(cls, basis_inputs.back());
    }
    int q = src.wedge_q;
    std::vector<std::vector<int>> tuples = src.tuples;
    MatQ out(dst.term_basis.cols(), static_cast<int>(tuples.size()));
    if (q != 2) fail(errc::invalid_input, "residue_matrix expects a degree-0 wedge of two slots");
    for (size_t tix = 0; tix < tuples.size(); ++tix) {
        int i1 = tuples[tix][0], i2 = tuples[tix][1];
        // Pivot normalization: rewrite so that one slot has nu = 0.
        const ModularInput &f1 = basis_inputs[i1], &f2 = basis_inputs[i2];
        Rat n1 = nu[i1], n2 = nu[i2];
        ModularInput combo = ModularInput::zero(f1.disc_ptr());
        if (n1 == 0 && n2 == 0) continue;  // zero column
        if (n1 != 0) {
            // Res = nu(f1) * (f2 - (n2/n1) f1)|'
            combo = f2.plus(f1, -n2 / n1).scaled(n1);
        } else {
            // nu(f2) != 0: Res = -nu(f2) * (f1 - (n1/n2) f2)|'
            combo = f1.plus(f2, -n1 / n2).scaled(-n2);
        }
        ModularInput pulled = quasi_pullback(combo, cls.sub_basis, inst.trunc, cls.sub_disc);
        if (pulled.c00() != 0) fail(errc::invalid_input, "normalized residue produced a nonzero constant term");
        VecQ y = term_coordinates(dst, pulled);
        for (int r = 0; r < dst.term_basis.cols(); ++r) out(r, static_cast<int>(tix)) = y[r];
    }
    return out;
}

ComplexInstance assemble_complex(const Lattice& l0, GroupKind gamma, int p, const Rat& bound, const Rat& trunc,
                                 const ObstructionSet& obstructions, int jobs) {
    int n = l0.signature().second;
    if (p > n) fail(errc::usage, "p exceeds the lattice dimension bound");
    if (p < 1 || p > 2) fail(errc::unsupported_regime, "this build assembles complexes for p in {1, 2}");
    if (trunc < bound) fail(errc::trunc_shortfall, "series truncation below the pole bound");
    ComplexInstance inst;
    inst.l0 = l0;
    inst.gamma = gamma;
    inst.p = p;
    inst.bound = bound;
    inst.trunc = trunc;
    inst.table = classify(l0, gamma, bound, p >= 2);

    auto l0_disc = inst.table.l0_disc;
    auto ambient_group = ambient_action_group(l0, gamma, *l0_disc);
    inst.degree0 = make_term(l0_disc, bound, p, ambient_group, obstructions);

    for (const auto& cls : inst.table.corank1)
        inst.degree1.push_back(make_term(cls.sub_disc, bound, p - 1, cls.action, obstructions));

    // d0: degree 0 -> degree 1.
    long rows1 = 0;
    for (const auto& t : inst.degree1) {
        inst.degree1_offsets.push_back(rows1);
        rows1 += t.dim();
    }
    long cols0 = inst.degree0.dim();
    inst.d0 = MatQ(static_cast<int>(rows1), static_cast<int>(cols0));
    if (p == 2) {
        // Residue blocks are independent per class; compute them in a worker
        // pool and merge in class order.
        std::vector<MatQ> blocks(inst.table.corank1.size());
        {
            std::vector<std::future<void>> futs;
            std::atomic<size_t> next{0};
            int workers = std::max(1, std::min<int>(jobs, static_cast<int>(inst.table.corank1.size())));
            for (int w = 0; w < workers; ++w)
                futs.push_back(std::async(std::launch::async, [&] {
                    for (size_t ci = next.fetch_add(1); ci < blocks.size(); ci = next.fetch_add(1))
                        blocks[ci] = residue_matrix(inst, static_cast<int>(ci));
                }));
            for (auto& f : futs) f.get();
        }
        for (size_t ci = 0; ci < inst.table.corank1.size(); ++ci) {
            MatQ res = blocks[ci];  // dst-term-dim x tuples(src)
            // Restrict to invariant wedge bases on both sides.
            // Source basis: wedge_basis over tuples; destination: express in
            // the invariant basis of the destination term (q = 1: term itself).
            MatQ block = res * inst.degree0.wedge_basis;
            const TermSpace& dst = inst.degree1[ci];
            // block columns live in dst term coordinates; dst wedge_basis for
            // q = 1 is over the term dimension.
            MatQ m(dst.term_basis.cols(), dst.wedge_basis.cols() + block.cols());
            for (int i = 0; i < dst.term_basis.cols(); ++i) {
                for (int j = 0; j < dst.wedge_basis.cols(); ++j) m(i, j) = dst.wedge_basis(i, j);
                for (int j = 0; j < block.cols(); ++j) m(i, dst.wedge_basis.cols() + j) = block(i, j);
            }
            std::vector<int> order;
            for (int j = 0; j < dst.wedge_basis.cols(); ++j) order.push_back(j);
            auto pivots = rref(m, &order);
            for (int i = static_cast<int>(pivots.size()); i < m.rows(); ++i)
                for (int j = 0; j < block.cols(); ++j)
                    if (m(i, dst.wedge_basis.cols() + j) != 0)
                        fail(errc::invalid_input, "residue image missed the invariant term space");
            for (size_t pi = 0; pi < pivots.size(); ++pi)
                for (int j = 0; j < block.cols(); ++j)
                    inst.d0(static_cast<int>(inst.degree1_offsets[ci] + pivots[pi]), j) =
                        m(static_cast<int>(pi), dst.wedge_basis.cols() + j);
        }
    } else {
        // p = 1: degree 0 is wedge^1; d0 entries are nu values per class.
        for (size_t ci = 0; ci < inst.table.corank1.size(); ++ci)
            for (long j = 0; j < cols0; ++j) {
                VecQ coords(inst.degree0.space.coords.dim(), Rat(0));
                // wedge_basis for q=1 indexes term basis columns.
                for (int r = 0; r < inst.degree0.term_basis.rows(); ++r) {
                    Rat s = 0;
                    for (int k = 0; k < inst.degree0.term_basis.cols(); ++k)
                        s += inst.degree0.term_basis(r, k) * inst.degree0.wedge_basis(k, static_cast<int>(j));
                    coords[r] = s;
                }
                ModularInput f = inst.degree0.space.coords.to_input(coords);
                inst.d0(static_cast<int>(inst.degree1_offsets[ci]), static_cast<int>(j)) =
                    nu_value(inst.table.corank1[ci], f);
            }
    }

    // d1: degree 1 -> degree 2 (p = 2 only; empty otherwise).
    if (p == 2) {
        inst.d1 = MatQ(static_cast<int>(inst.table.corank2.size()), static_cast<int>(rows1));
        for (size_t ci = 0; ci < inst.table.corank1.size(); ++ci) {
            const TermSpace& t = inst.degree1[ci];
            for (long j = 0; j < t.dim(); ++j) {
                // q = 1: wedge_basis column j gives term-basis coefficients.
                VecQ coords(t.space.coords.dim(), Rat(0));
                for (int r = 0; r < t.term_basis.rows(); ++r) {
                    Rat s = 0;
                    for (int k = 0; k < t.term_basis.cols(); ++k) s += t.term_basis(r, k) * t.wedge_basis(k, static_cast<int>(j));
                    coords[r] = s;
                }
                ModularInput f = t.space.coords.to_input(coords);
                for (int fi : inst.table.flags_of_carrier(static_cast<int>(ci))) {
                    const FlagClass& flag = inst.table.flags[fi];
                    Rat v = Rat(flag.transfer_index) * nu_value(flag, f);
                    if (v != 0)
                        inst.d1(flag.target, static_cast<int>(inst.degree1_offsets[ci] + j)) += v;
                }
            }
        }
    } else {
        inst.d1 = MatQ(0, static_cast<int>(rows1));
    }
    return inst;
}

std::vector<long> ComplexInstance::dims() const {
    std::vector<long> out;
    out.push_back(degree0.dim());
    long t = 0;
    for (const auto& d : degree1) t += d.dim();
    out.push_back(t);
    if (p == 2) out.push_back(static_cast<long>(table.corank2.size()));
    return out;
}

D2Report verify_d2(const ComplexInstance& inst) {
    D2Report rep;
    if (inst.p < 2) return rep;
    MatQ prod = inst.d1 * inst.d0;
    for (int i = 0; i < prod.rows(); ++i)
        for (int j = 0; j < prod.cols(); ++j)
            if (prod(i, j) != 0) {
                rep.zero = false;
                std::ostringstream os;
                os << "d1*d0 entry (" << i << ", " << j << ") = " << to_string(prod(i, j));
                rep.failures.push_back(os.str());
            }
    return rep;
}

std::vector<long> cohomology_ranks(const ComplexInstance& inst) {
    auto dims = inst.dims();
    std::vector<long> ranks;
    long rank_d0 = rank(inst.d0);
    long rank_d1 = inst.p == 2 ? rank(inst.d1) : 0;
    // H^0 = ker d0.
    ranks.push_back(dims[0] - rank_d0);
    if (inst.p == 2) {
        ranks.push_back(dims[1] - rank_d1 - rank_d0);
        ranks.push_back(dims[2] - rank_d1);
    } else {
        ranks.push_back(dims[1] - rank_d0);
    }
    return ranks;
}

std::vector<Rat> boundary_values(const OrbitTable& table, const std::vector<ChainEntry>& chain) {
    std::vector<Rat> out(table.corank2.size(), Rat(0));
    for (const auto& entry : chain) {
        if (entry.class_index < 0 || entry.class_index >= static_cast<int>(table.corank1.size()))
            fail(errc::invalid_input, "chain entry class index out of range");
        for (int fi : table.flags_of_carrier(entry.class_index)) {
            const FlagClass& flag = table.flags[fi];
            out[flag.target] += Rat(flag.transfer_index) * nu_value(flag, entry.input);
        }
    }
    return out;
}

CocycleReport cocycle_check_p1(const OrbitTable& table, const std::vector<ChainEntry>& chain) {
    CocycleReport rep;
    auto vals = boundary_values(table, chain);
    for (size_t i = 0; i < vals.size(); ++i)
        if (vals[i] != 0) {
            rep.pass = false;
            std::ostringstream os;
            os << "class " << i << " residual " << to_string(vals[i]);
            rep.residuals.push_back(os.str());
        }
    return rep;
}

CocycleReport cocycle_check_p2(const OrbitTable& table,
                               const std::vector<std::pair<ModularInput, ModularInput>>& chain, const Rat& trunc) {
    CocycleReport rep;
    for (size_t ci = 0; ci < table.corank1.size(); ++ci) {
        const Corank1Class& cls = table.corank1[ci];
        ModularInput combo = chain.empty() ? ModularInput() : ModularInput::zero(chain.front().first.disc_ptr());
        bool have = false;
        for (const auto& [f, g] : chain) {
            Rat nf = nu_value(cls, f), ng = nu_value(cls, g);
            ModularInput term = g.scaled(nf).plus(f, -ng);
            combo = have ? combo.plus(term) : term;
            have = true;
        }
        if (!have) continue;
        ModularInput pulled = quasi_pullback(combo, cls.sub_basis, trunc, cls.sub_disc);
        if (!pulled.is_zero()) {
            rep.pass = false;
            std::ostringstream os;
            os << "class " << ci << " residual with " << pulled.pp().size() << " principal terms, c00 "
               << to_string(pulled.c00());
            rep.residuals.push_back(os.str());
        }
    }
    return rep;
}

}  // namespace bgx
