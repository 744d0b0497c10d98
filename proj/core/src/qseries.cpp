#include <bgx/qseries.hpp>

#include <sstream>

namespace bgx {

std::string GradedQSeries::canonical_string() const {
    std::ostringstream os;
    os << "series trunc " << to_string(trunc_) << "\n";
    for (const auto& [key, val] : c_) {
        for (const auto& r : key.first) os << r.get_str() << ' ';
        os << ": " << to_string(key.second) << " -> " << to_string(val) << "\n";
    }
    return os.str();
}

GradedQSeries combine(const GradedQSeries& a, const GradedQSeries& b, const Rat& ca, const Rat& cb) {
    if (!a.compatible(b)) fail(errc::invalid_input, "combine: grading mismatch");
    Rat trunc = a.trunc() < b.trunc() ? a.trunc() : b.trunc();
    GradedQSeries out(a.orders(), trunc);
    for (const auto& [key, val] : a.coeffs()) {
        if (key.second > trunc) continue;
        out.add(DiscElement{key.first}, key.second, ca * val);
    }
    for (const auto& [key, val] : b.coeffs()) {
        if (key.second > trunc) continue;
        out.add(DiscElement{key.first}, key.second, cb * val);
    }
    return out;
}

}  // namespace bgx
