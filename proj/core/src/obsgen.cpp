#include <bgx/obsgen.hpp>

#include <bgx/qexp.hpp>

#include <functional>

namespace bgx {

std::optional<ObstructionBasis> theta_obstruction_tables(const DiscriminantForm& d, const Rat& coverage) {
    int k = d.ngens();
    for (const auto& o : d.orders())
        if (o != 2) return std::nullopt;
    auto elems = d.elements();
    for (int i = 0; i < k; ++i) {
        std::vector<Int> ri(k, Int(0)), rj(k, Int(0));
        ri[i] = 1;
        if (d.q_value(DiscElement{ri}) != make_rat(3, 2)) return std::nullopt;
        for (int j = 0; j < i; ++j) {
            rj[j] = 1;
            if (d.b_value(DiscElement{ri}, DiscElement{rj}) != 0) return std::nullopt;
            rj[j] = 0;
        }
    }

    ObstructionBasis ob;
    ob.orders = d.orders();
    for (const auto& e : elems) ob.q_values.push_back(d.q_value(e));
    ob.weight = Rat(2) + make_rat(k, 2);

    QExp th[2] = {unary_theta2(0, coverage + 1), unary_theta2(1, coverage + 1)};
    QExp dth[2] = {serre_derivative(th[0], make_rat(1, 2)), serre_derivative(th[1], make_rat(1, 2))};

    auto slot_product = [&](const DiscElement& e, int derivative_slot) {
        QExp acc(coverage + 1);
        acc.add(Rat(0), Rat(1));
        for (int i = 0; i < k; ++i) {
            int r = static_cast<int>(e.r[i].get_si());
            acc = acc * (i == derivative_slot ? dth[r] : th[r]);
        }
        return acc;
    };

    if (k == 2) {
        ObstructionFunctional cusp;
        cusp.coverage = coverage;
        for (const auto& e : elems) {
            QExp f = slot_product(e, 1) - slot_product(e, 0);
            for (const auto& [expo, val] : f.coeffs()) {
                if (expo <= 0 || expo > coverage || val == 0) continue;
                cusp.table[{e.r, expo}] = val;
            }
        }
        ob.functionals.push_back(std::move(cusp));
    } else if (k > 2) {
        return std::nullopt;  // cusp conditions unsettled for three or more slots
    }

    if (k >= 1) {
        // Constant-term functional: Serre derivative of the full product,
        // normalized to constant term one.
        ObstructionFunctional c00;
        c00.is_c00 = true;
        c00.coverage = coverage;
        Rat scale = make_rat(-24, k);
        for (const auto& e : elems) {
            QExp total(coverage + 1);
            for (int slot = 0; slot < k; ++slot) total = total + slot_product(e, slot);
            for (const auto& [expo, val] : total.coeffs()) {
                if (expo <= 0 || expo > coverage || val == 0) continue;
                c00.table[{e.r, expo}] = scale * val;
            }
        }
        ob.functionals.push_back(std::move(c00));
    }
    return ob;
}

}  // namespace bgx
