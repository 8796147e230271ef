#include "plk/multiindex.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

#include "plk/errors.hpp"

namespace plk {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, const char* what) {
    std::uint64_t out = 0;
    if (__builtin_mul_overflow(a, b, &out)) {
        throw OverflowError(std::string(what) + ": exceeds 64-bit exact range");
    }
    return out;
}

void visit_degree(std::size_t d, unsigned remaining, std::uint32_t start, MultiIndex& scratch,
                  const std::function<void(const MultiIndex&)>& visit) {
    if (remaining == 0) {
        visit(scratch);
        return;
    }
    // Earlier coordinates take exponent first; larger exponents first.
    for (std::uint32_t c = start; c <= d; ++c) {
        for (unsigned e = remaining; e >= 1; --e) {
            scratch.push_term(c, e);
            visit_degree(d, remaining - e, c + 1, scratch, visit);
            scratch.pop_term();
        }
    }
}

}  // namespace

MultiIndex::MultiIndex(std::size_t dim) : dim_(dim) {
    if (dim == 0) {
        throw DomainError("MultiIndex: dimension must be >= 1");
    }
}

MultiIndex MultiIndex::from_terms(std::size_t dim, std::vector<Term> terms) {
    MultiIndex out(dim);
    std::uint32_t prev = 0;
    for (const auto& [j, e] : terms) {
        if (j < 1 || j > dim) {
            throw DomainError("MultiIndex: coordinate " + std::to_string(j) + " outside [1, " +
                              std::to_string(dim) + "]");
        }
        if (j <= prev) {
            throw DomainError("MultiIndex: coordinates must be strictly increasing");
        }
        if (e == 0) {
            throw DomainError("MultiIndex: stored exponents must be >= 1");
        }
        prev = j;
        out.degree_ += e;
    }
    out.terms_ = std::move(terms);
    return out;
}

MultiIndex MultiIndex::from_dense(std::span<const unsigned> exponents) {
    MultiIndex out(exponents.size());
    for (std::size_t i = 0; i < exponents.size(); ++i) {
        if (exponents[i] > 0) {
            out.push_term(static_cast<std::uint32_t>(i + 1), exponents[i]);
        }
    }
    return out;
}

MultiIndex MultiIndex::unit(std::size_t dim, std::uint32_t coordinate, std::uint32_t exponent) {
    if (exponent == 0) {
        return MultiIndex(dim);
    }
    return from_terms(dim, {{coordinate, exponent}});
}

unsigned MultiIndex::exponent(std::uint32_t j) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), j,
                               [](const Term& t, std::uint32_t key) { return t.first < key; });
    return (it != terms_.end() && it->first == j) ? it->second : 0U;
}

std::vector<unsigned> MultiIndex::to_dense() const {
    std::vector<unsigned> out(dim_, 0);
    for (const auto& [j, e] : terms_) {
        out[j - 1] = e;
    }
    return out;
}

std::string MultiIndex::to_string() const {
    if (terms_.empty()) {
        return "0";
    }
    std::ostringstream os;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (i > 0) {
            os << '*';
        }
        os << terms_[i].first << '^' << terms_[i].second;
    }
    return os.str();
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
    if (dim_ != other.dim_) {
        throw DomainError("MultiIndex: dimension mismatch in addition");
    }
    MultiIndex out(dim_);
    auto a = terms_.begin();
    auto b = other.terms_.begin();
    while (a != terms_.end() || b != other.terms_.end()) {
        if (b == other.terms_.end() || (a != terms_.end() && a->first < b->first)) {
            out.push_term(a->first, a->second);
            ++a;
        } else if (a == terms_.end() || b->first < a->first) {
            out.push_term(b->first, b->second);
            ++b;
        } else {
            out.push_term(a->first, a->second + b->second);
            ++a;
            ++b;
        }
    }
    return out;
}

bool MultiIndex::componentwise_leq(const MultiIndex& other) const {
    if (dim_ != other.dim_) {
        throw DomainError("MultiIndex: dimension mismatch in comparison");
    }
    return std::all_of(terms_.begin(), terms_.end(),
                       [&](const Term& t) { return t.second <= other.exponent(t.first); });
}

void MultiIndex::push_term(std::uint32_t coordinate, std::uint32_t exponent) {
    terms_.emplace_back(coordinate, exponent);
    degree_ += exponent;
}

void MultiIndex::pop_term() {
    degree_ -= terms_.back().second;
    terms_.pop_back();
}

bool canonical_less(const MultiIndex& a, const MultiIndex& b) {
    if (a.degree() != b.degree()) {
        return a.degree() < b.degree();
    }
    const auto ta = a.terms();
    const auto tb = b.terms();
    const std::size_t n = std::min(ta.size(), tb.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (ta[i].first != tb[i].first) {
            return ta[i].first < tb[i].first;
        }
        if (ta[i].second != tb[i].second) {
            return ta[i].second > tb[i].second;
        }
    }
    // Equal degree and equal common prefix means equal indices.
    return false;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    std::uint64_t result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        // result * (n - k + i) / i is exact at every step; divide first where possible.
        const std::uint64_t num = n - k + i;
        const std::uint64_t g = std::gcd(result, i);
        const std::uint64_t r = result / g;
        const std::uint64_t den = i / g;
        result = checked_mul(r, num / den, "binomial");
    }
    return result;
}

std::uint64_t count_multi_indices(std::size_t d, unsigned max_degree) {
    try {
        return binomial(d + max_degree, max_degree);
    } catch (const OverflowError&) {
        return std::numeric_limits<std::uint64_t>::max();
    }
}

void for_each_multi_index_of_degree(std::size_t d, unsigned degree,
                                    const std::function<void(const MultiIndex&)>& visit) {
    MultiIndex scratch(d);
    visit_degree(d, degree, 1, scratch, visit);
}

void for_each_multi_index(std::size_t d, unsigned max_degree,
                          const std::function<void(const MultiIndex&)>& visit) {
    MultiIndex scratch(d);
    for (unsigned k = 0; k <= max_degree; ++k) {
        visit_degree(d, k, 1, scratch, visit);
    }
}

std::vector<MultiIndex> enumerate(std::size_t d, unsigned max_degree, std::uint64_t cap) {
    if (d == 0) {
        throw DomainError("enumerate: d must be >= 1");
    }
    const std::uint64_t count = count_multi_indices(d, max_degree);
    if (count > cap) {
        throw ResourceError("enumerate: C(d + D, D) = " +
                            (count == std::numeric_limits<std::uint64_t>::max()
                                 ? std::string("overflow")
                                 : std::to_string(count)) +
                            " exceeds cap " + std::to_string(cap));
    }
    std::vector<MultiIndex> out;
    out.reserve(count);
    for_each_multi_index(d, max_degree, [&](const MultiIndex& b) { out.push_back(b); });
    return out;
}

std::uint64_t factorial(unsigned n) {
    if (n > 20) {
        throw OverflowError("factorial: " + std::to_string(n) + "! exceeds 64-bit exact range");
    }
    std::uint64_t out = 1;
    for (unsigned i = 2; i <= n; ++i) {
        out *= i;
    }
    return out;
}

std::uint64_t multinomial(const MultiIndex& beta) {
    // Product of binomials C(partial sum, beta_j).
    std::uint64_t out = 1;
    std::uint64_t partial = 0;
    for (const auto& [j, e] : beta.terms()) {
        partial += e;
        out = checked_mul(out, binomial(partial, e), "multinomial");
    }
    return out;
}

std::uint64_t factorial_product(const MultiIndex& beta) {
    std::uint64_t out = 1;
    for (const auto& [j, e] : beta.terms()) {
        out = checked_mul(out, factorial(e), "factorial_product");
    }
    return out;
}

}  // namespace plk
