#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace plk {

/// Exponent vector beta in Z^d_{>=0}, stored sparsely as (coordinate, exponent)
/// pairs with 1-based coordinates in ascending order and exponents >= 1.
class MultiIndex {
public:
    using Term = std::pair<std::uint32_t, std::uint32_t>;

    /// Zero index in dimension `dim`.
    explicit MultiIndex(std::size_t dim);

    /// Validates coordinates (in [1, dim], strictly increasing) and exponents (>= 1).
    static MultiIndex from_terms(std::size_t dim, std::vector<Term> terms);
    static MultiIndex from_dense(std::span<const unsigned> exponents);
    static MultiIndex unit(std::size_t dim, std::uint32_t coordinate, std::uint32_t exponent = 1);

    std::size_t dim() const noexcept { return dim_; }
    unsigned degree() const noexcept { return degree_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    std::span<const Term> terms() const noexcept { return terms_; }

    /// Exponent of 1-based coordinate j (0 when absent).
    unsigned exponent(std::uint32_t j) const;
    std::vector<unsigned> to_dense() const;

    /// "j1^e1*j2^e2", or "0" for the zero index.
    std::string to_string() const;

    /// Componentwise sum; dimensions must agree.
    MultiIndex operator+(const MultiIndex& other) const;
    /// Componentwise comparison beta <= gamma.
    bool componentwise_leq(const MultiIndex& other) const;

    bool operator==(const MultiIndex& other) const = default;

    // Used by the enumerator to build indices in place.
    void push_term(std::uint32_t coordinate, std::uint32_t exponent);
    void pop_term();

private:
    std::size_t dim_;
    unsigned degree_ = 0;
    std::vector<Term> terms_;
};

/// Canonical order: ascending degree; within a degree, descending lexicographic
/// order of the dense exponent vector, so (2,0) < (1,1) < (0,2).
bool canonical_less(const MultiIndex& a, const MultiIndex& b);

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

/// C(n, k) with overflow detection; throws OverflowError.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Number of beta in Z^d_{>=0} with |beta| <= max_degree, i.e. C(d + D, D).
/// Returns UINT64_MAX when the count does not fit.
std::uint64_t count_multi_indices(std::size_t d, unsigned max_degree);

/// Visits every beta with |beta| <= max_degree in canonical order without
/// materializing the list. The reference is only valid during the callback.
void for_each_multi_index(std::size_t d, unsigned max_degree,
                          const std::function<void(const MultiIndex&)>& visit);

/// Visits every beta with |beta| == degree in canonical order.
void for_each_multi_index_of_degree(std::size_t d, unsigned degree,
                                    const std::function<void(const MultiIndex&)>& visit);

/// All beta with |beta| <= max_degree, canonical order. Throws ResourceError
/// when C(d + D, D) exceeds `cap`.
std::vector<MultiIndex> enumerate(std::size_t d, unsigned max_degree,
                                  std::uint64_t cap = kDefaultEnumerationCap);

/// |beta|! / prod beta_j!  (exact; OverflowError when it does not fit 64 bits).
std::uint64_t multinomial(const MultiIndex& beta);

/// prod beta_j!  (exact; OverflowError when it does not fit 64 bits).
std::uint64_t factorial_product(const MultiIndex& beta);

/// n! for n <= 20; OverflowError above.
std::uint64_t factorial(unsigned n);

}  // namespace plk
