#ifndef ASFM_SUBSET_HPP
#define ASFM_SUBSET_HPP

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace asfm {

/// Ground set N = {0,...,n-1} with a cardinality budget k.
struct GroundSet {
    int n = 0;
    int k = 0;

    GroundSet() = default;
    GroundSet(int n_, int k_) : n(n_), k(k_) {
        if (n < 1) throw std::invalid_argument("GroundSet: n must be >= 1");
        if (k < 1 || k > n) throw std::invalid_argument("GroundSet: need 1 <= k <= n");
    }
};

/// A subset of {0,...,n-1} as a fixed-width bit vector with a cached popcount.
/// Equality is bitwise; ordering is lexicographic on the sorted element list,
/// which is the tie-break order used throughout the solvers.
class Subset {
public:
    Subset() = default;

    explicit Subset(int n) : n_(n), words_((n + 63) / 64, 0) {
        if (n < 0) throw std::invalid_argument("Subset: negative capacity");
    }

    static Subset of(int n, std::initializer_list<int> elems) {
        Subset s(n);
        for (int e : elems) s.add(e);
        return s;
    }

    static Subset of(int n, const std::vector<int>& elems) {
        Subset s(n);
        for (int e : elems) s.add(e);
        return s;
    }

    static Subset from_mask(int n, std::uint64_t mask) {
        if (n > 64) throw std::invalid_argument("Subset::from_mask: n > 64");
        Subset s(n);
        if (!s.words_.empty()) s.words_[0] = mask;
        s.card_ = std::popcount(mask);
        return s;
    }

    int capacity() const { return n_; }
    int cardinality() const { return card_; }
    bool empty() const { return card_ == 0; }

    bool contains(int i) const {
        check(i);
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }

    void add(int i) {
        check(i);
        std::uint64_t& w = words_[i >> 6];
        std::uint64_t bit = std::uint64_t{1} << (i & 63);
        if (!(w & bit)) {
            w |= bit;
            ++card_;
        }
    }

    void remove(int i) {
        check(i);
        std::uint64_t& w = words_[i >> 6];
        std::uint64_t bit = std::uint64_t{1} << (i & 63);
        if (w & bit) {
            w &= ~bit;
            --card_;
        }
    }

    Subset with(int i) const {
        Subset s = *this;
        s.add(i);
        return s;
    }

    Subset without(int i) const {
        Subset s = *this;
        s.remove(i);
        return s;
    }

    bool is_subset_of(const Subset& other) const {
        for (std::size_t w = 0; w < words_.size(); ++w)
            if (words_[w] & ~other.words_[w]) return false;
        return true;
    }

    bool intersects(const Subset& other) const {
        for (std::size_t w = 0; w < words_.size(); ++w)
            if (words_[w] & other.words_[w]) return true;
        return false;
    }

    Subset union_with(const Subset& other) const {
        Subset s = *this;
        s.card_ = 0;
        for (std::size_t w = 0; w < words_.size(); ++w) {
            s.words_[w] |= other.words_[w];
            s.card_ += std::popcount(s.words_[w]);
        }
        return s;
    }

    /// Largest element, or -1 for the empty set.
    int max_element() const {
        for (int w = static_cast<int>(words_.size()) - 1; w >= 0; --w)
            if (words_[w]) return w * 64 + 63 - std::countl_zero(words_[w]);
        return -1;
    }

    std::vector<int> elements() const {
        std::vector<int> out;
        out.reserve(card_);
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t bits = words_[w];
            while (bits) {
                int b = std::countr_zero(bits);
                out.push_back(static_cast<int>(w) * 64 + b);
                bits &= bits - 1;
            }
        }
        return out;
    }

    template <typename Fn>
    void for_each(Fn&& fn) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t bits = words_[w];
            while (bits) {
                int b = std::countr_zero(bits);
                fn(static_cast<int>(w) * 64 + b);
                bits &= bits - 1;
            }
        }
    }

    std::uint64_t to_mask() const {
        if (n_ > 64) throw std::logic_error("Subset::to_mask: n > 64");
        return words_.empty() ? 0 : words_[0];
    }

    bool operator==(const Subset& other) const {
        return n_ == other.n_ && words_ == other.words_;
    }
    bool operator!=(const Subset& other) const { return !(*this == other); }

    /// Lexicographic comparison on sorted element lists: {0,2} < {1,2}, {0} < {0,1}.
    static int compare(const Subset& a, const Subset& b) {
        auto ea = a.elements();
        auto eb = b.elements();
        std::size_t m = std::min(ea.size(), eb.size());
        for (std::size_t i = 0; i < m; ++i) {
            if (ea[i] != eb[i]) return ea[i] < eb[i] ? -1 : 1;
        }
        if (ea.size() != eb.size()) return ea.size() < eb.size() ? -1 : 1;
        return 0;
    }

    std::size_t hash() const {
        std::size_t h = 1469598103934665603ull;
        for (std::uint64_t w : words_) {
            h ^= static_cast<std::size_t>(w);
            h *= 1099511628211ull;
        }
        return h;
    }

    std::string to_string() const {
        std::string s = "{";
        bool first = true;
        for (int e : elements()) {
            if (!first) s += ",";
            s += std::to_string(e + 1);  // external element labels are 1-based
            first = false;
        }
        return s + "}";
    }

private:
    void check(int i) const {
        if (i < 0 || i >= n_) throw std::out_of_range("Subset: element out of range");
    }

    int n_ = 0;
    int card_ = 0;
    std::vector<std::uint64_t> words_;
};

struct SubsetHash {
    std::size_t operator()(const Subset& s) const { return s.hash(); }
};

}  // namespace asfm

#endif
