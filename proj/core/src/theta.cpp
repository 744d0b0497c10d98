#include <bgx/qseries.hpp>
#include <bgx/shortvec.hpp>

#include <future>

namespace bgx {

GradedQSeries theta_series(const Lattice& k, const Rat& trunc, int jobs) {
    if (!k.negative_definite()) fail(errc::invalid_input, "theta_series: lattice not negative definite");
    DiscriminantForm a(k);
    GradedQSeries out(a.orders(), trunc);
    Lattice pos = k.twist();
    auto elements = a.elements();

    auto component = [&](const DiscElement& delta) {
        // Coset delta + K against Q(x) = -(x,x) <= 2*trunc; exponent -(x,x)/2.
        std::map<Rat, Rat> comp;
        VecQ shift = a.lift(delta);
        enumerate_coset(pos.gram(), shift, Rat(2) * trunc, true, [&](const ShortVectorEntry& e) {
            comp[e.norm / 2] += 1;
        });
        return comp;
    };

    if (jobs <= 1 || elements.size() <= 1) {
        for (const auto& delta : elements) {
            auto comp = component(delta);
            for (const auto& [expo, cnt] : comp) out.add(delta, expo, cnt);
        }
        return out;
    }
    std::vector<std::future<std::map<Rat, Rat>>> futs;
    futs.reserve(elements.size());
    for (const auto& delta : elements)
        futs.push_back(std::async(std::launch::async, [&component, delta] { return component(delta); }));
    for (size_t i = 0; i < elements.size(); ++i) {
        auto comp = futs[i].get();
        for (const auto& [expo, cnt] : comp) out.add(elements[i], expo, cnt);
    }
    return out;
}

}  // namespace bgx
