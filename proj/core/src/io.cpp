#include <bgx/io.hpp>

#include <fstream>
#include <sstream>

namespace bgx {

namespace {

std::string next_token(std::istream& in) {
    std::string t;
    if (!(in >> t)) fail(errc::invalid_input, "unexpected end of file");
    return t;
}

Int next_int(std::istream& in) { return Int(next_token(in)); }
Rat next_rat(std::istream& in) { return parse_rat(next_token(in)); }

void expect(std::istream& in, const std::string& word) {
    std::string t = next_token(in);
    if (t != word) fail(errc::invalid_input, "expected '" + word + "', found '" + t + "'");
}

}  // namespace

std::string write_lattice(const Lattice& l) {
    std::ostringstream os;
    os << "lattice " << (l.name().empty() ? "-" : l.name()) << "\n";
    os << "rank " << l.rank() << "\n";
    os << "gram";
    for (int i = 0; i < l.rank(); ++i)
        for (int j = 0; j < l.rank(); ++j) os << ' ' << l.gram()(i, j).get_str();
    os << "\nend\n";
    return os.str();
}

Lattice read_lattice(std::istream& in) {
    expect(in, "lattice");
    std::string name = next_token(in);
    if (name == "-") name.clear();
    expect(in, "rank");
    long n = next_int(in).get_si();
    if (n < 0 || n > 64) fail(errc::invalid_input, "unreasonable lattice rank");
    expect(in, "gram");
    MatZ g(static_cast<int>(n), static_cast<int>(n));
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) g(static_cast<int>(i), static_cast<int>(j)) = next_int(in);
    expect(in, "end");
    return Lattice::make(std::move(g), name);
}

Lattice read_lattice_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) fail(errc::usage, "cannot open lattice file: " + path);
    return read_lattice(f);
}

std::string write_input(const ModularInput& f) {
    std::ostringstream os;
    os << "input\n";
    os << "c00 " << to_string(f.c00()) << "\n";
    for (const auto& [key, val] : f.pp()) {
        os << "pp";
        for (const auto& r : key.first) os << ' ' << r.get_str();
        os << ' ' << to_string(key.second) << ' ' << to_string(val) << "\n";
    }
    os << "end\n";
    return os.str();
}

ModularInput read_input(std::istream& in, std::shared_ptr<const DiscriminantForm> disc) {
    expect(in, "input");
    expect(in, "c00");
    Rat c00 = next_rat(in);
    std::map<ModularInput::Key, Rat> pp;
    for (std::string t = next_token(in); t != "end"; t = next_token(in)) {
        if (t != "pp") fail(errc::invalid_input, "expected 'pp' or 'end'");
        std::vector<Int> res(disc->ngens());
        for (int i = 0; i < disc->ngens(); ++i) res[i] = next_int(in);
        Rat n = next_rat(in);
        Rat c = next_rat(in);
        pp[{std::move(res), n}] = c;
    }
    return ModularInput(std::move(disc), std::move(pp), std::move(c00));
}

ModularInput read_input_file(const std::string& path, std::shared_ptr<const DiscriminantForm> disc) {
    std::ifstream f(path);
    if (!f) fail(errc::usage, "cannot open input file: " + path);
    return read_input(f, std::move(disc));
}

std::string write_series(const GradedQSeries& s) {
    std::ostringstream os;
    os << "series\n";
    os << "orders";
    for (const auto& d : s.orders()) os << ' ' << d.get_str();
    os << "\ntrunc " << to_string(s.trunc()) << "\n";
    for (const auto& [key, val] : s.coeffs()) {
        os << "coeff";
        for (const auto& r : key.first) os << ' ' << r.get_str();
        os << ' ' << to_string(key.second) << ' ' << to_string(val) << "\n";
    }
    os << "end\n";
    return os.str();
}

GradedQSeries read_series(std::istream& in) {
    expect(in, "series");
    expect(in, "orders");
    std::vector<Int> orders;
    std::string t = next_token(in);
    while (t != "trunc") {
        orders.push_back(Int(t));
        t = next_token(in);
    }
    Rat trunc = next_rat(in);
    GradedQSeries s(orders, trunc);
    for (t = next_token(in); t != "end"; t = next_token(in)) {
        if (t != "coeff") fail(errc::invalid_input, "expected 'coeff' or 'end'");
        std::vector<Int> res(orders.size());
        for (size_t i = 0; i < orders.size(); ++i) res[i] = next_int(in);
        Rat e = next_rat(in);
        Rat v = next_rat(in);
        s.add(DiscElement{res}, e, v);
    }
    return s;
}

std::string write_obstruction(const ObstructionBasis& ob) {
    std::ostringstream os;
    os << "obstruction\n";
    os << "orders";
    for (const auto& d : ob.orders) os << ' ' << d.get_str();
    os << "\nweight " << to_string(ob.weight) << "\n";
    os << "qvalues";
    for (const auto& q : ob.q_values) os << ' ' << to_string(q);
    os << "\n";
    for (const auto& fn : ob.functionals) {
        os << "functional " << (fn.is_c00 ? "c00" : "cusp") << " coverage " << to_string(fn.coverage) << "\n";
        for (const auto& [key, val] : fn.table) {
            os << "entry";
            for (const auto& r : key.first) os << ' ' << r.get_str();
            os << ' ' << to_string(key.second) << ' ' << to_string(val) << "\n";
        }
        os << "endfunctional\n";
    }
    os << "end\n";
    return os.str();
}

ObstructionBasis read_obstruction(std::istream& in) {
    expect(in, "obstruction");
    expect(in, "orders");
    ObstructionBasis ob;
    std::string t = next_token(in);
    while (t != "weight") {
        ob.orders.push_back(Int(t));
        t = next_token(in);
    }
    ob.weight = next_rat(in);
    expect(in, "qvalues");
    long total = 1;
    for (const auto& d : ob.orders) total *= d.get_si();
    for (long i = 0; i < total; ++i) ob.q_values.push_back(next_rat(in));
    for (t = next_token(in); t != "end"; t = next_token(in)) {
        if (t != "functional") fail(errc::invalid_input, "expected 'functional' or 'end'");
        ObstructionFunctional fn;
        std::string kind = next_token(in);
        fn.is_c00 = (kind == "c00");
        expect(in, "coverage");
        fn.coverage = next_rat(in);
        for (std::string u = next_token(in); u != "endfunctional"; u = next_token(in)) {
            if (u != "entry") fail(errc::invalid_input, "expected 'entry' or 'endfunctional'");
            std::vector<Int> res(ob.orders.size());
            for (size_t i = 0; i < ob.orders.size(); ++i) res[i] = next_int(in);
            Rat e = next_rat(in);
            Rat v = next_rat(in);
            fn.table[{std::move(res), e}] = v;
        }
        ob.functionals.push_back(std::move(fn));
    }
    return ob;
}

ObstructionBasis read_obstruction_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) fail(errc::usage, "cannot open obstruction file: " + path);
    return read_obstruction(f);
}

namespace {

void write_matz(std::ostringstream& os, const std::string& tag, const MatZ& m) {
    os << tag << ' ' << m.rows() << ' ' << m.cols();
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) os << ' ' << m(i, j).get_str();
    os << "\n";
}

MatZ read_matz(std::istream& in, const std::string& tag) {
    expect(in, tag);
    long r = next_int(in).get_si(), c = next_int(in).get_si();
    MatZ m(static_cast<int>(r), static_cast<int>(c));
    for (long i = 0; i < r; ++i)
        for (long j = 0; j < c; ++j) m(static_cast<int>(i), static_cast<int>(j)) = next_int(in);
    return m;
}

void write_perms(std::ostringstream& os, const std::vector<DiscPermutation>& ps) {
    os << "perms " << ps.size();
    for (const auto& p : ps) {
        os << " [";
        for (size_t i = 0; i < p.size(); ++i) os << ' ' << p[i];
        os << " ]";
    }
    os << "\n";
}

std::vector<DiscPermutation> read_perms(std::istream& in, long elem_count) {
    expect(in, "perms");
    long n = next_int(in).get_si();
    std::vector<DiscPermutation> out;
    for (long i = 0; i < n; ++i) {
        expect(in, "[");
        DiscPermutation p(elem_count);
        for (long j = 0; j < elem_count; ++j) p[j] = next_int(in).get_si();
        expect(in, "]");
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace

std::string write_orbit_table(const OrbitTable& t) {
    std::ostringstream os;
    os << "orbits\n";
    os << "hash " << t.l0.content_hash() << "\n";
    os << "gamma " << group_name(t.gamma) << "\n";
    os << "bound " << to_string(t.bound) << "\n";
    os << write_lattice(t.l0);
    os << "corank1 " << t.corank1.size() << "\n";
    for (const auto& c : t.corank1) {
        os << "class " << c.key.norm.get_str() << ' ' << c.key.div.get_str();
        for (const auto& r : c.key.lstar.r) os << ' ' << r.get_str();
        os << "\nwitness";
        for (const auto& x : c.witness) os << ' ' << x.get_str();
        os << "\nram " << c.ramification << "\n";
        write_perms(os, c.action);
    }
    os << "corank2 " << t.corank2.size() << "\n";
    for (const auto& c : t.corank2) {
        write_matz(os, "pbasis", c.p_basis);
        write_matz(os, "rbasis", c.r_basis);
        os << "order " << c.group_order << "\n";
        write_perms(os, c.action);
    }
    os << "flags " << t.flags.size() << "\n";
    for (const auto& f : t.flags) {
        os << "flag " << f.carrier << ' ' << f.target << ' ';
        for (const auto& x : f.flag_vector) os << x.get_str() << ' ';
        os << f.norm.get_str() << ' ' << f.div_in_carrier.get_str();
        for (const auto& r : f.lstar_in_carrier.r) os << ' ' << r.get_str();
        os << ' ' << f.ramification << ' ' << f.transfer_index.get_str() << "\n";
    }
    os << "end\n";
    return os.str();
}

OrbitTable read_orbit_table(std::istream& in) {
    OrbitTable t;
    expect(in, "orbits");
    expect(in, "hash");
    next_token(in);
    expect(in, "gamma");
    t.gamma = next_token(in) == "full" ? GroupKind::Full : GroupKind::Hat;
    expect(in, "bound");
    t.bound = next_rat(in);
    t.l0 = read_lattice(in);
    t.l0_disc = std::make_shared<DiscriminantForm>(t.l0);
    expect(in, "corank1");
    long n1 = next_int(in).get_si();
    int ngens = t.l0_disc->ngens();
    for (long i = 0; i < n1; ++i) {
        Corank1Class c;
        expect(in, "class");
        c.key.norm = next_int(in);
        c.key.div = next_int(in);
        std::vector<Int> res(ngens);
        for (int j = 0; j < ngens; ++j) res[j] = next_int(in);
        c.key.lstar = DiscElement{std::move(res)};
        expect(in, "witness");
        c.witness.resize(t.l0.rank());
        for (int j = 0; j < t.l0.rank(); ++j) c.witness[j] = next_int(in);
        expect(in, "ram");
        c.ramification = static_cast<int>(next_int(in).get_si());
        Sublattice sub = orth_complement(t.l0, c.witness);
        c.sub_basis = sub.basis;
        MatZ comp(t.l0.rank(), 1);
        comp.set_col(0, c.witness);
        c.comp_basis = comp;
        c.sub_lattice = t.l0.sublattice_gram(c.sub_basis);
        c.sub_disc = std::make_shared<DiscriminantForm>(c.sub_lattice);
        c.action = read_perms(in, t.l0.rank() == 0 ? 1 : static_cast<long>(c.sub_disc->elements().size()));
        t.corank1.push_back(std::move(c));
    }
    expect(in, "corank2");
    long n2 = next_int(in).get_si();
    for (long i = 0; i < n2; ++i) {
        Corank2Class c;
        c.p_basis = read_matz(in, "pbasis");
        c.r_basis = read_matz(in, "rbasis");
        expect(in, "order");
        c.group_order = next_int(in).get_si();
        c.p_lattice = t.l0.sublattice_gram(c.p_basis);
        c.r_lattice = t.l0.sublattice_gram(c.r_basis);
        c.p_disc = std::make_shared<DiscriminantForm>(c.p_lattice);
        c.action = read_perms(in, static_cast<long>(c.p_disc->elements().size()));
        t.corank2.push_back(std::move(c));
    }
    expect(in, "flags");
    long nf = next_int(in).get_si();
    for (long i = 0; i < nf; ++i) {
        FlagClass f;
        expect(in, "flag");
        f.carrier = static_cast<int>(next_int(in).get_si());
        f.target = static_cast<int>(next_int(in).get_si());
        f.flag_vector.resize(t.l0.rank());
        for (int j = 0; j < t.l0.rank(); ++j) f.flag_vector[j] = next_int(in);
        f.norm = next_int(in);
        f.div_in_carrier = next_int(in);
        int g = t.corank1[f.carrier].sub_disc->ngens();
        std::vector<Int> res(g);
        for (int j = 0; j < g; ++j) res[j] = next_int(in);
        f.lstar_in_carrier = DiscElement{std::move(res)};
        f.ramification = static_cast<int>(next_int(in).get_si());
        f.transfer_index = next_int(in);
        t.flags.push_back(std::move(f));
    }
    expect(in, "end");
    return t;
}

std::string export_instance(const ComplexInstance& inst) {
    std::ostringstream os;
    os << "instance\n";
    os << "gamma " << group_name(inst.gamma) << "\n";
    os << "p " << inst.p << "\n";
    os << "bound " << to_string(inst.bound) << "\n";
    os << "trunc " << to_string(inst.trunc) << "\n";
    auto dims = inst.dims();
    os << "dims";
    for (auto d : dims) os << ' ' << d;
    os << "\n";
    os << "classes1 " << inst.table.corank1.size() << "\n";
    for (const auto& c : inst.table.corank1) {
        os << "class " << c.key.norm.get_str() << ' ' << c.key.div.get_str();
        for (const auto& r : c.key.lstar.r) os << ' ' << r.get_str();
        os << ' ' << c.ramification << "\n";
    }
    os << "classes2 " << inst.table.corank2.size() << "\n";
    for (const auto& c : inst.table.corank2)
        os << "class det " << c.p_lattice.det().get_str() << " order " << c.group_order << "\n";
    // Per-term bases: coordinates are (disc residues, exponent) pairs in the
    // canonical shallow-first order; columns are the invariant wedge basis.
    auto dump_term = [&os](const std::string& tag, const TermSpace& t) {
        os << "term " << tag << " coords " << t.space.coords.dim() << " basisdim " << t.term_basis.cols()
           << " wedge " << t.wedge_q << " dim " << t.dim() << "\n";
        for (long j = 0; j < t.space.coords.dim(); ++j) {
            const auto& [e, expo] = t.space.coords.coords[j];
            os << "coord";
            for (const auto& r : e.r) os << ' ' << r.get_str();
            os << ' ' << to_string(expo) << "\n";
        }
        for (int i = 0; i < t.term_basis.rows(); ++i)
            for (int j = 0; j < t.term_basis.cols(); ++j)
                if (t.term_basis(i, j) != 0) os << "b " << i << ' ' << j << ' ' << to_string(t.term_basis(i, j)) << "\n";
        for (int i = 0; i < t.wedge_basis.rows(); ++i)
            for (int j = 0; j < t.wedge_basis.cols(); ++j)
                if (t.wedge_basis(i, j) != 0) os << "w " << i << ' ' << j << ' ' << to_string(t.wedge_basis(i, j)) << "\n";
        os << "endterm\n";
    };
    dump_term("degree0", inst.degree0);
    for (size_t i = 0; i < inst.degree1.size(); ++i) dump_term("degree1." + std::to_string(i), inst.degree1[i]);
    auto dump = [&os](const char* name, const MatQ& m) {
        os << name << ' ' << m.rows() << ' ' << m.cols() << "\n";
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j)
                if (m(i, j) != 0) os << i << ' ' << j << ' ' << to_string(m(i, j)) << "\n";
        os << "endmatrix\n";
    };
    dump("d0", inst.d0);
    dump("d1", inst.d1);
    os << "end\n";
    return os.str();
}

}  // namespace bgx
