#pragma once

#include <bgx/numbers.hpp>

#include <map>

namespace bgx {

// Scalar truncated q-expansion with rational exponents; exponents beyond
// trunc are dropped on every operation.
class QExp {
  public:
    QExp() = default;
    explicit QExp(Rat trunc) : trunc_(std::move(trunc)) {}

    const Rat& trunc() const { return trunc_; }
    const std::map<Rat, Rat>& coeffs() const { return c_; }

    void add(const Rat& e, const Rat& v) {
        if (e > trunc_ || v == 0) return;
        auto it = c_.find(e);
        if (it == c_.end())
            c_.emplace(e, v);
        else {
            it->second += v;
            if (it->second == 0) c_.erase(it);
        }
    }
    Rat coeff(const Rat& e) const {
        auto it = c_.find(e);
        return it == c_.end() ? Rat(0) : it->second;
    }

    QExp operator*(const QExp& o) const {
        Rat t = trunc_ < o.trunc_ ? trunc_ : o.trunc_;
        QExp out(t);
        for (const auto& [ea, va] : c_)
            for (const auto& [eb, vb] : o.c_) {
                Rat e = ea + eb;
                if (e > t) break;
                out.add(e, va * vb);
            }
        return out;
    }
    QExp operator+(const QExp& o) const {
        Rat t = trunc_ < o.trunc_ ? trunc_ : o.trunc_;
        QExp out(t);
        for (const auto& [e, v] : c_) out.add(e, v);
        for (const auto& [e, v] : o.c_) out.add(e, v);
        return out;
    }
    QExp operator-(const QExp& o) const {
        Rat t = trunc_ < o.trunc_ ? trunc_ : o.trunc_;
        QExp out(t);
        for (const auto& [e, v] : c_) out.add(e, v);
        for (const auto& [e, v] : o.c_) out.add(e, -v);
        return out;
    }
    QExp scaled(const Rat& s) const {
        QExp out(trunc_);
        for (const auto& [e, v] : c_) out.add(e, s * v);
        return out;
    }
    // q d/dq.
    QExp q_derivative() const {
        QExp out(trunc_);
        for (const auto& [e, v] : c_) out.add(e, e * v);
        return out;
    }

  private:
    Rat trunc_;
    std::map<Rat, Rat> c_;
};

// E2 = 1 - 24 sum sigma_1(n) q^n.
QExp eisenstein_e2(const Rat& trunc);

// Components of the unary theta of <2>: theta_r(tau) = sum_{x = r/2 + Z} q^{x^2},
// r in {0, 1}. Weight 1/2 building block for 2-elementary types.
QExp unary_theta2(int residue, const Rat& trunc);

// Serre derivative: q f' - (weight/12) E2 f, sends weight w to w + 2.
QExp serre_derivative(const QExp& f, const Rat& weight);

}  // namespace bgx
