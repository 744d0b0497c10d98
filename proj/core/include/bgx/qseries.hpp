#pragma once

#include <bgx/discform.hpp>

#include <map>

namespace bgx {

// Truncated q-expansion with exact rational coefficients, graded by the
// elements of a discriminant group. Coefficients are valid for exponents
// <= trunc; anything beyond is absent by contract.
class GradedQSeries {
  public:
    GradedQSeries() = default;
    GradedQSeries(std::vector<Int> orders, Rat trunc) : orders_(std::move(orders)), trunc_(std::move(trunc)) {}

    const std::vector<Int>& orders() const { return orders_; }
    const Rat& trunc() const { return trunc_; }

    using Key = std::pair<std::vector<Int>, Rat>;  // (disc residues, exponent)

    const std::map<Key, Rat>& coeffs() const { return c_; }

    void set(const DiscElement& e, const Rat& exponent, const Rat& value) {
        if (exponent > trunc_) return;
        if (value == 0)
            c_.erase({e.r, exponent});
        else
            c_[{e.r, exponent}] = value;
    }
    void add(const DiscElement& e, const Rat& exponent, const Rat& value) {
        if (exponent > trunc_ || value == 0) return;
        auto key = Key{e.r, exponent};
        auto it = c_.find(key);
        if (it == c_.end()) {
            c_.emplace(key, value);
        } else {
            it->second += value;
            if (it->second == 0) c_.erase(it);
        }
    }
    Rat coeff(const DiscElement& e, const Rat& exponent) const {
        auto it = c_.find({e.r, exponent});
        return it == c_.end() ? Rat(0) : it->second;
    }

    bool compatible(const GradedQSeries& o) const { return orders_ == o.orders_; }

    std::string canonical_string() const;

  private:
    std::vector<Int> orders_;
    Rat trunc_;
    std::map<Key, Rat> c_;
};

// ca * a + cb * b with trunc = min(trunc_a, trunc_b).
GradedQSeries combine(const GradedQSeries& a, const GradedQSeries& b, const Rat& ca, const Rat& cb);

// Theta series of K(-1) for a negative definite lattice K: the component at
// delta in A_K is sum over x in delta+K of q^{-(x,x)/2}, truncated.
GradedQSeries theta_series(const Lattice& k, const Rat& trunc, int jobs = 1);

}  // namespace bgx
