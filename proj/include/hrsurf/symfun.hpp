#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <vector>

namespace hrsurf {

/// Binomial coefficient as a double. Exact for every argument this library uses (n <= 64).
inline double binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) {
        return 0.0;
    }
    k = std::min(k, n - k);
    double c = 1.0;
    for (int j = 1; j <= k; j++) {
        c = c * (n - k + j) / j;
    }
    return std::round(c);
}

struct SpectrumEntry {
    double value;
    int multiplicity;

    bool operator==(const SpectrumEntry &) const = default;
};

/// Multiset of principal curvatures stored as (value, multiplicity) pairs.
///
/// Always canonical: entries sorted by value, equal values merged (exact
/// comparison), zero multiplicities dropped.
class CurvatureSpectrum {
   public:
    CurvatureSpectrum() = default;
    CurvatureSpectrum(std::initializer_list<SpectrumEntry> entries) : entries_(entries) { canonicalize(); }
    explicit CurvatureSpectrum(std::vector<SpectrumEntry> entries) : entries_(std::move(entries)) { canonicalize(); }

    const std::vector<SpectrumEntry> &entries() const { return entries_; }

    int total_multiplicity() const {
        int total = 0;
        for (const auto &e : entries_) {
            total += e.multiplicity;
        }
        return total;
    }

    /// Every value multiplied by `factor`, multiplicities kept.
    CurvatureSpectrum scaled(double factor) const {
        std::vector<SpectrumEntry> out;
        out.reserve(entries_.size());
        for (const auto &e : entries_) {
            out.push_back({factor * e.value, e.multiplicity});
        }
        return CurvatureSpectrum(std::move(out));
    }

    /// The multiset with one more value of multiplicity `m` added.
    CurvatureSpectrum with(double value, int m = 1) const {
        auto out = entries_;
        out.push_back({value, m});
        return CurvatureSpectrum(std::move(out));
    }

    bool operator==(const CurvatureSpectrum &) const = default;

   private:
    void canonicalize() {
        std::erase_if(entries_, [](const SpectrumEntry &e) { return e.multiplicity <= 0; });
        std::sort(entries_.begin(), entries_.end(),
                  [](const SpectrumEntry &a, const SpectrumEntry &b) { return a.value < b.value; });
        std::vector<SpectrumEntry> merged;
        for (const auto &e : entries_) {
            if (!merged.empty() && merged.back().value == e.value) {
                merged.back().multiplicity += e.multiplicity;
            } else {
                merged.push_back(e);
            }
        }
        entries_ = std::move(merged);
    }

    std::vector<SpectrumEntry> entries_;
};

/// e_0 .. e_{max_r} of the expanded multiset, using the binomial recurrence
/// e_k(P ∪ {v×m}) = Σ_j C(m,j) v^j e_{k−j}(P).
inline std::vector<double> elem_sym_all(const CurvatureSpectrum &spectrum, int max_r) {
    std::vector<double> e(max_r + 1, 0.0);
    e[0] = 1.0;
    std::vector<double> next(max_r + 1);
    int seen = 0;
    for (const auto &entry : spectrum.entries()) {
        seen += entry.multiplicity;
        int top = std::min(seen, max_r);
        for (int k = 0; k <= top; k++) {
            double acc = 0.0;
            double vj = 1.0;
            for (int j = 0; j <= std::min(entry.multiplicity, k); j++) {
                acc += binomial(entry.multiplicity, j) * vj * e[k - j];
                vj *= entry.value;
            }
            next[k] = acc;
        }
        for (int k = 0; k <= top; k++) {
            e[k] = next[k];
        }
    }
    return e;
}

inline double elem_sym(const CurvatureSpectrum &spectrum, int r) {
    if (r < 0 || r > spectrum.total_multiplicity()) {
        return r == 0 ? 1.0 : 0.0;
    }
    return elem_sym_all(spectrum, r)[r];
}

/// H_r of the (f_s, φ)-graph from the leaf spectrum at s, ρ and ρ′.
inline double graph_hr(const CurvatureSpectrum &leaf, double rho, double rho_prime, int r) {
    auto e = elem_sym_all(leaf, r);
    double sign_r = (r % 2 == 0) ? 1.0 : -1.0;
    return sign_r * e[r] * std::pow(rho, r) - sign_r * e[r - 1] * std::pow(rho, r - 1) * rho_prime;
}

/// Same quantity through the explicit array {−ρ·k_i} ∪ {ρ′}.
inline double full_array_hr(const CurvatureSpectrum &leaf, double rho, double rho_prime, int r) {
    return elem_sym(leaf.scaled(-rho).with(rho_prime), r);
}

}  // namespace hrsurf
