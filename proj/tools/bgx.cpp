#include <CLI11.hpp>

#include <bgx/cache.hpp>
#include <bgx/io.hpp>
#include <bgx/obsgen.hpp>
#include <bgx/shadow.hpp>
#include <bgx/solve.hpp>

#include <iostream>
#include <thread>

using namespace bgx;

namespace {

struct Options {
    std::string lattice_path;
    std::string gamma = "hat";
    int p = 2;
    std::string pole_bound = "1";
    std::string trunc;
    std::vector<std::string> obstruction_paths;
    std::string cache_dir;
    std::string format = "human";
    int jobs = 0;

    GroupKind group() const { return gamma == "full" ? GroupKind::Full : GroupKind::Hat; }
    Rat bound() const { return parse_rat(pole_bound); }
    Rat trunc_or_default() const { return trunc.empty() ? bound() + 2 : parse_rat(trunc); }
    bool machine() const { return format == "machine"; }
    int effective_jobs() const {
        if (jobs > 0) return jobs;
        unsigned h = std::thread::hardware_concurrency();
        return h ? static_cast<int>(h) : 1;
    }
};

Lattice load_lattice(const Options& opt) {
    if (opt.lattice_path.empty()) fail(errc::usage, "--lattice is required for this subcommand");
    return read_lattice_file(opt.lattice_path);
}

ObstructionSet load_obstructions(const Options& opt) {
    ObstructionSet set;
    for (const auto& path : opt.obstruction_paths) set.push_back(read_obstruction_file(path));
    return set;
}

VecZ parse_vector(const std::string& csv, int rank) {
    VecZ v;
    std::string cur;
    for (char c : csv + ",") {
        if (c == ',' || c == ' ') {
            if (!cur.empty()) v.push_back(Int(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (static_cast<int>(v.size()) != rank) fail(errc::usage, "vector length does not match the lattice rank");
    return v;
}

std::string class_label(const Corank1Class& c) {
    std::ostringstream os;
    os << "(" << c.key.norm.get_str() << "," << c.key.div.get_str() << ",[";
    for (size_t i = 0; i < c.key.lstar.r.size(); ++i) os << (i ? " " : "") << c.key.lstar.r[i].get_str();
    os << "])";
    return os.str();
}

std::string class2_label(const Corank2Class& c) {
    std::ostringstream os;
    os << "(det " << c.p_lattice.det().get_str() << ", disc " << c.p_disc->order().get_str() << ")";
    return os.str();
}

OrbitTable classify_cached(const Lattice& l0, const Options& opt, bool with_corank2) {
    Cache cache(opt.cache_dir);
    std::string key = "orbits-" + l0.content_hash() + "-" + opt.gamma + "-" +
                      to_string(opt.bound()) + (with_corank2 ? "-full" : "-c1");
    std::string payload = cache.get_or_compute(hash_hex(key), [&] {
        OrbitTable t = classify(l0, opt.group(), opt.bound(), with_corank2);
        return write_orbit_table(t);
    });
    std::istringstream in(payload);
    return read_orbit_table(in);
}

std::vector<ChainEntry> load_chain(const OrbitTable& table, const std::vector<std::string>& specs) {
    std::vector<ChainEntry> chain;
    for (const auto& s : specs) {
        auto pos = s.find(':');
        if (pos == std::string::npos) fail(errc::usage, "chain entries have the form INDEX:FILE");
        int idx = std::stoi(s.substr(0, pos));
        if (idx < 0 || idx >= static_cast<int>(table.corank1.size()))
            fail(errc::usage, "chain class index out of range");
        chain.push_back(ChainEntry{idx, read_input_file(s.substr(pos + 1), table.corank1[idx].sub_disc)});
    }
    return chain;
}

int run_example_gn(const Options& opt) {
    std::ostream& out = std::cout;
    Lattice l0 = two_u_plus(direct_sum(root_a1(), root_a1()));
    l0.set_name("2U+2A1");
    GroupKind gk = GroupKind::Hat;
    Rat bound(1);
    Rat trunc(3);

    OrbitTable table = classify(l0, gk, bound, true);
    int i_l1 = -1, i_l2 = -1, i_l3 = -1;
    for (size_t i = 0; i < table.corank1.size(); ++i) {
        const auto& c = table.corank1[i];
        if (c.key.norm != -2) continue;
        if (c.key.div == 1)
            i_l3 = static_cast<int>(i);
        else
            (i_l1 < 0 ? i_l1 : i_l2) = static_cast<int>(i);
    }
    if (i_l1 < 0 || i_l2 < 0 || i_l3 < 0) fail(errc::unsupported_regime, "expected three (-2)-classes");

    auto find_flag = [&](int carrier_idx, const std::function<bool(const FlagClass&)>& pred) -> int {
        for (int fi : table.flags_of_carrier(carrier_idx))
            if (pred(table.flags[fi])) return fi;
        fail(errc::invalid_input, "expected flag not found");
    };
    auto solve_on = [&](int carrier_idx, const std::vector<std::pair<int, Rat>>& flag_targets) {
        const Corank1Class& carrier = table.corank1[carrier_idx];
        AdmissibleCoords coords = admissible_coords(carrier.sub_disc, bound);
        std::vector<OrderKey> keys;
        for (int fi : table.flags_of_carrier(carrier_idx)) {
            const FlagClass& f = table.flags[fi];
            OrderKey k{f.norm, f.div_in_carrier, f.lstar_in_carrier};
            bool fresh = true;
            for (const auto& seen : keys)
                if (seen == k) fresh = false;
            if (fresh) keys.push_back(k);
        }
        std::vector<SolveTarget> targets;
        for (const auto& [fi, value] : flag_targets) {
            const FlagClass& f = table.flags[fi];
            targets.push_back(SolveTarget{OrderKey{f.norm, f.div_in_carrier, f.lstar_in_carrier}, value});
        }
        SolveReport rep = solve_principal_part(coords, targets, keys);
        if (!rep.feasible) fail(errc::infeasible, "worked example solve failed: " + rep.infeasible_detail);
        return rep.solution;
    };

    int f1_l12 = find_flag(i_l1, [&](const FlagClass& f) { return table.corank2[f.target].p_lattice.det() == 1; });
    int f1_l13 = find_flag(i_l1, [&](const FlagClass& f) { return table.corank2[f.target].p_lattice.det() == 4; });
    int f2_l12 = find_flag(i_l2, [&](const FlagClass& f) { return table.corank2[f.target].p_lattice.det() == 1; });
    int f2_l23 = find_flag(i_l2, [&](const FlagClass& f) { return table.corank2[f.target].p_lattice.det() == 4; });
    int t13 = table.flags[f1_l13].target;
    int t23 = table.flags[f2_l23].target;
    if (t13 == t23) fail(errc::invalid_input, "the two intersection classes merged unexpectedly");
    int f3_l13 = find_flag(i_l3, [&](const FlagClass& f) { return f.target == t13; });
    int f3_l23 = find_flag(i_l3, [&](const FlagClass& f) { return f.target == t23; });

    ModularInput f1 = solve_on(i_l1, {{f1_l12, Rat(6)}, {f1_l13, Rat(-1)}});
    ModularInput f2 = solve_on(i_l2, {{f2_l12, Rat(-6)}, {f2_l23, Rat(1)}});
    ModularInput f3 = solve_on(i_l3, {{f3_l13, Rat(1)}, {f3_l23, Rat(-1)}});

    DivisorOnCycle div1 = divisor_of(table, FunctionSymbol{i_l1, f1});
    out << "div(f1) =";
    for (const auto& [fi, mult] : div1.multiplicities) {
        const FlagClass& fl = table.flags[fi];
        out << " " << (mult >= 0 ? "+" : "") << to_string(mult) << "*[" << class2_label(table.corank2[fl.target])
            << "]";
    }
    out << "\n";

    std::vector<ChainEntry> chain{{i_l1, f1}, {i_l2, f2}, {i_l3, f3}};
    CocycleReport crep = cocycle_check_p1(table, chain);
    out << "cocycle: " << (crep.pass ? "PASS" : "FAIL") << "\n";
    for (const auto& r : crep.residuals) out << "  " << r << "\n";

    ObstructionSet obs;
    DiscriminantForm d0(l0);
    if (auto ob = theta_obstruction_tables(d0, bound + 2)) obs.push_back(*ob);
    if (auto ob = theta_obstruction_tables(DiscriminantForm(root_a1()), bound + 2)) obs.push_back(*ob);
    ComplexInstance inst = assemble_complex(l0, gk, 2, bound, trunc, obs, opt.effective_jobs());
    D2Report rep = verify_d2(inst);
    out << "d2: " << (rep.zero ? "PASS" : "FAIL") << "\n";
    auto dims = inst.dims();
    out << "dims";
    for (auto d : dims) out << ' ' << d;
    out << "\n";
    if (!crep.pass || !rep.zero) return 1;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact workbench for lattice input forms, their order data and the induced complexes"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand
    Options opt;
    app.add_option("--lattice", opt.lattice_path, "lattice file");
    app.add_option("--gamma", opt.gamma, "group kind: hat or full")->check(CLI::IsMember({"hat", "full"}));
    app.add_option("--p", opt.p, "codimension parameter");
    app.add_option("--pole-bound", opt.pole_bound, "pole depth bound B");
    app.add_option("--trunc", opt.trunc, "series truncation (default B + 2)");
    app.add_option("--obstructions", opt.obstruction_paths, "obstruction table files");
    app.add_option("--cache-dir", opt.cache_dir, "cache directory");
    app.add_option("--format", opt.format, "output format: human or machine")
        ->check(CLI::IsMember({"human", "machine"}));
    app.add_option("--jobs", opt.jobs, "worker threads (default: cores)");

    auto* cmd_info = app.add_subcommand("info", "lattice summary");
    auto* cmd_disc = app.add_subcommand("disc", "discriminant group and quadratic form");
    auto* cmd_theta = app.add_subcommand("theta", "theta series of a negative definite lattice");
    auto* cmd_classify = app.add_subcommand("classify", "corank-1 classes");
    std::string arg_input, arg_input2, arg_vector;
    int arg_class = -1;
    std::vector<std::string> arg_chain;
    auto* cmd_nutilde = app.add_subcommand("nutilde", "order sum along a primitive vector");
    cmd_nutilde->add_option("--input", arg_input, "input form file")->required();
    cmd_nutilde->add_option("--vector", arg_vector, "vector, comma separated")->required();
    auto* cmd_qp = app.add_subcommand("qp", "quasi-pullback to the perp of a vector");
    cmd_qp->add_option("--input", arg_input, "input form file")->required();
    cmd_qp->add_option("--vector", arg_vector, "complement vector, comma separated")->required();
    auto* cmd_res = app.add_subcommand("res", "residue of a two-slot wedge at a class");
    cmd_res->add_option("--input", arg_input, "first input file")->required();
    cmd_res->add_option("--input2", arg_input2, "second input file")->required();
    cmd_res->add_option("--class", arg_class, "corank-1 class index")->required();
    auto* cmd_boundary = app.add_subcommand("boundary", "boundary values of a chain");
    cmd_boundary->add_option("--entry", arg_chain, "chain entries INDEX:FILE")->required();
    auto* cmd_assemble = app.add_subcommand("assemble", "assemble the truncated complex");
    auto* cmd_d2 = app.add_subcommand("d2", "verify the composite boundary vanishes");
    auto* cmd_ranks = app.add_subcommand("ranks", "cohomology ranks of the assembled complex");
    auto* cmd_cocycle = app.add_subcommand("cocycle", "first-order cocycle check of a chain");
    cmd_cocycle->add_option("--entry", arg_chain, "chain entries INDEX:FILE")->required();
    auto* cmd_divisor = app.add_subcommand("divisor", "divisor of a labeled input on a class");
    cmd_divisor->add_option("--input", arg_input, "input form file")->required();
    cmd_divisor->add_option("--class", arg_class, "carrier class index")->required();
    auto* cmd_chainmap = app.add_subcommand("chainmap", "two-route boundary comparison");
    cmd_chainmap->add_option("--entry", arg_chain, "chain entries INDEX:FILE (valuation route set)");
    cmd_chainmap->add_option("--pair-first", arg_input, "first slot input for the two-slot check");
    cmd_chainmap->add_option("--pair-second", arg_input2, "second slot input for the two-slot check");
    auto* cmd_example = app.add_subcommand("example-gn", "reproduce the built-in worked example");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        // --help exits zero; anything else is a usage error.
        return rc == 0 ? 0 : 2;
    }

    try {
        std::ostream& out = std::cout;
        if (cmd_info->parsed()) {
            Lattice l = load_lattice(opt);
            auto sig = l.signature();
            out << "name " << (l.name().empty() ? "-" : l.name()) << "\n";
            out << "rank " << l.rank() << "\n";
            out << "signature " << sig.first << " " << sig.second << "\n";
            out << "det " << to_string(l.det()) << "\n";
            out << "hash " << l.content_hash() << "\n";
        } else if (cmd_disc->parsed()) {
            Lattice l = load_lattice(opt);
            DiscriminantForm d(l);
            out << "orders";
            for (const auto& o : d.orders()) out << ' ' << o.get_str();
            out << "\n";
            for (const auto& e : d.elements()) {
                out << "elem";
                for (const auto& r : e.r) out << ' ' << r.get_str();
                out << " q " << to_string(d.q_value(e)) << "\n";
            }
        } else if (cmd_theta->parsed()) {
            Lattice l = load_lattice(opt);
            Rat trunc = opt.trunc.empty() ? Rat(3) : parse_rat(opt.trunc);
            Cache cache(opt.cache_dir);
            std::string key = hash_hex("theta-" + l.content_hash() + "-" + to_string(trunc));
            std::string payload =
                cache.get_or_compute(key, [&] { return write_series(theta_series(l, trunc, opt.effective_jobs())); });
            out << payload;
        } else if (cmd_classify->parsed()) {
            Lattice l = load_lattice(opt);
            OrbitTable t = classify_cached(l, opt, false);
            out << "classes " << t.corank1.size() << "\n";
            for (size_t i = 0; i < t.corank1.size(); ++i) {
                const auto& c = t.corank1[i];
                out << i << ' ' << class_label(c) << " ram " << c.ramification << " stab " << c.action.size();
                if (!opt.machine()) {
                    out << " witness";
                    for (const auto& x : c.witness) out << ' ' << x.get_str();
                }
                out << "\n";
            }
        } else if (cmd_nutilde->parsed()) {
            Lattice l = load_lattice(opt);
            auto disc = std::make_shared<DiscriminantForm>(l);
            ModularInput f = read_input_file(arg_input, disc);
            VecZ v = parse_vector(arg_vector, l.rank());
            out << "nutilde " << to_string(nutilde(f, v)) << "\n";
        } else if (cmd_qp->parsed()) {
            Lattice l = load_lattice(opt);
            auto disc = std::make_shared<DiscriminantForm>(l);
            ModularInput f = read_input_file(arg_input, disc);
            VecZ v = parse_vector(arg_vector, l.rank());
            Sublattice sub = orth_complement(l, v);
            ModularInput pulled = quasi_pullback(f, sub.basis, opt.trunc_or_default(), nullptr, opt.effective_jobs());
            out << write_input(pulled);
        } else if (cmd_res->parsed()) {
            Lattice l = load_lattice(opt);
            OrbitTable t = classify_cached(l, opt, false);
            if (arg_class < 0 || arg_class >= static_cast<int>(t.corank1.size()))
                fail(errc::usage, "class index out of range");
            auto disc = t.l0_disc;
            ModularInput f = read_input_file(arg_input, disc);
            ModularInput g = read_input_file(arg_input2, disc);
            const Corank1Class& cls = t.corank1[arg_class];
            Rat nf = nu_value(cls, f), ng = nu_value(cls, g);
            ModularInput combo = g.scaled(nf).plus(f, -ng);
            ModularInput pulled = quasi_pullback(combo, cls.sub_basis, opt.trunc_or_default(), cls.sub_disc,
                                                 opt.effective_jobs());
            out << "class " << arg_class << " " << class_label(cls) << "\n";
            out << write_input(pulled);
        } else if (cmd_boundary->parsed()) {
            Lattice l = load_lattice(opt);
            OrbitTable t = classify_cached(l, opt, true);
            auto chain = load_chain(t, arg_chain);
            auto vals = boundary_values(t, chain);
            for (size_t i = 0; i < vals.size(); ++i)
                out << "class2 " << i << " " << class2_label(t.corank2[i]) << " value " << to_string(vals[i]) << "\n";
        } else if (cmd_assemble->parsed() || cmd_d2->parsed() || cmd_ranks->parsed()) {
            Lattice l = load_lattice(opt);
            ComplexInstance inst = assemble_complex(l, opt.group(), opt.p, opt.bound(), opt.trunc_or_default(),
                                                    load_obstructions(opt), opt.effective_jobs());
            if (cmd_assemble->parsed()) {
                out << export_instance(inst);
            } else {
                D2Report rep = verify_d2(inst);
                out << "d2 " << (rep.zero ? "PASS" : "FAIL") << "\n";
                for (const auto& fline : rep.failures) out << "  " << fline << "\n";
                if (cmd_ranks->parsed()) {
                    if (!rep.zero) fail(errc::invalid_input, "ranks requested but the composite is nonzero");
                    auto ranks = cohomology_ranks(inst);
                    out << "ranks";
                    for (auto r : ranks) out << ' ' << r;
                    out << "\n";
                }
                if (!rep.zero) return 1;
            }
        } else if (cmd_cocycle->parsed()) {
            Lattice l = load_lattice(opt);
            OrbitTable t = classify_cached(l, opt, true);
            auto chain = load_chain(t, arg_chain);
            CocycleReport rep = cocycle_check_p1(t, chain);
            out << "cocycle " << (rep.pass ? "PASS" : "FAIL") << "\n";
            for (const auto& r : rep.residuals) out << "  " << r << "\n";
            if (!rep.pass) return 1;
        } else if (cmd_divisor->parsed()) {
            Lattice l = load_lattice(opt);
            OrbitTable t = classify_cached(l, opt, true);
            if (arg_class < 0 || arg_class >= static_cast<int>(t.corank1.size()))
                fail(errc::usage, "class index out of range");
            ModularInput f = read_input_file(arg_input, t.corank1[arg_class].sub_disc);
            DivisorOnCycle div = divisor_of(t, FunctionSymbol{arg_class, f});
            for (const auto& [fi, mult] : div.multiplicities) {
                const FlagClass& fl = t.flags[fi];
                out << "flag " << fi << " target " << fl.target << " " << class2_label(t.corank2[fl.target])
                    << " mult " << to_string(mult) << "\n";
            }
        } else if (cmd_chainmap->parsed()) {
            Lattice l = load_lattice(opt);
            OrbitTable t = classify_cached(l, opt, true);
            bool any = false;
            if (!arg_chain.empty()) {
                auto chain = load_chain(t, arg_chain);
                ChainMapReport rep = chain_map_check_q1(t, chain);
                out << "chainmap-q1 " << (rep.pass ? "PASS" : "FAIL") << "\n";
                for (const auto& m : rep.mismatches) out << "  " << m << "\n";
                if (!rep.pass) return 1;
                any = true;
            }
            if (!arg_input.empty() && !arg_input2.empty()) {
                ModularInput f = read_input_file(arg_input, t.l0_disc);
                ModularInput g = read_input_file(arg_input2, t.l0_disc);
                ChainMapReport rep = chain_map_check_q2(t, f, g, opt.trunc_or_default());
                out << "chainmap-q2 " << (rep.pass ? "PASS" : "FAIL") << "\n";
                for (const auto& m : rep.mismatches) out << "  " << m << "\n";
                if (!rep.pass) return 1;
                any = true;
            }
            if (!any) fail(errc::usage, "chainmap needs --entry items or a --pair-first/--pair-second pair");
        } else if (cmd_example->parsed()) {
            return run_example_gn(opt);
        }
        return 0;
    } catch (const bgx_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        int code = static_cast<int>(e.code());
        return code == 6 ? 1 : code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
