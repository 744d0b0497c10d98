#include <bgx/qexp.hpp>

namespace bgx {

QExp eisenstein_e2(const Rat& trunc) {
    QExp e(trunc);
    e.add(Rat(0), Rat(1));
    Int top = rat_floor(trunc);
    for (Int n = 1; n <= top; ++n) {
        Int sigma = 0;
        for (Int d = 1; d <= n; ++d)
            if (n % d == 0) sigma += d;
        e.add(Rat(n), Rat(-24) * Rat(sigma));
    }
    return e;
}

QExp unary_theta2(int residue, const Rat& trunc) {
    QExp t(trunc);
    // x = m + residue/2, exponent x^2 <= trunc.
    for (Int m = -(isqrt_floor(trunc) + 2);; ++m) {
        Rat x = Rat(m) + make_rat(residue, 2);
        Rat e = x * x;
        if (Rat(m) > Rat(isqrt_floor(trunc) + 2)) break;
        if (e <= trunc) t.add(e, Rat(1));
    }
    return t;
}

QExp serre_derivative(const QExp& f, const Rat& weight) {
    QExp e2 = eisenstein_e2(f.trunc());
    QExp out = f.q_derivative() - (e2 * f).scaled(weight / 12);
    return out;
}

}  // namespace bgx
