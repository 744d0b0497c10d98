#pragma once

#include <bgx/complex.hpp>

#include <iosfwd>
#include <string>

namespace bgx {

// Line-oriented text formats; writers emit canonical whitespace so files
// hash stably for caching.

std::string write_lattice(const Lattice& l);
Lattice read_lattice(std::istream& in);
Lattice read_lattice_file(const std::string& path);

std::string write_input(const ModularInput& f);
ModularInput read_input(std::istream& in, std::shared_ptr<const DiscriminantForm> disc);
ModularInput read_input_file(const std::string& path, std::shared_ptr<const DiscriminantForm> disc);

std::string write_series(const GradedQSeries& s);
GradedQSeries read_series(std::istream& in);

std::string write_obstruction(const ObstructionBasis& ob);
ObstructionBasis read_obstruction(std::istream& in);
ObstructionBasis read_obstruction_file(const std::string& path);

std::string write_orbit_table(const OrbitTable& t);
OrbitTable read_orbit_table(std::istream& in);

// Structured text bundle of an assembled instance: parameters, class lists,
// per-degree dimensions, basis matrices and boundary matrices in sparse
// triplet form.
std::string export_instance(const ComplexInstance& inst);

}  // namespace bgx
