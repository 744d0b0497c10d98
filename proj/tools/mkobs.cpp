#include <CLI11.hpp>

#include <bgx/io.hpp>
#include <bgx/obsgen.hpp>

#include <fstream>
#include <iostream>

using namespace bgx;

// Regenerates the shipped realizability tables from the built-in theta
// constructions. Lattices outside the supported family get no tables.
int main(int argc, char** argv) {
    CLI::App app{"emit realizability tables for a lattice"};
    std::string lattice_path, out_path;
    std::string coverage = "4";
    app.add_option("--lattice", lattice_path, "lattice file")->required();
    app.add_option("--out", out_path, "output file (stdout when omitted)");
    app.add_option("--coverage", coverage, "exponent coverage bound");
    CLI11_PARSE(app, argc, argv);
    try {
        Lattice l = read_lattice_file(lattice_path);
        DiscriminantForm d(l);
        auto ob = theta_obstruction_tables(d, parse_rat(coverage));
        if (!ob) {
            std::cerr << "no table family covers this discriminant form\n";
            return 4;
        }
        std::string payload = write_obstruction(*ob);
        if (out_path.empty()) {
            std::cout << payload;
        } else {
            std::ofstream f(out_path, std::ios::trunc);
            f << payload;
        }
        return 0;
    } catch (const bgx_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
