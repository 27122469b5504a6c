#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace refp {

using LabelId = std::uint32_t;

// Sorted, duplicate-free set of label ids stored as a trimmed bitset.
// Ordering is lexicographic on the ascending member sequence.
class LabelSet {
  public:
    LabelSet() = default;
    LabelSet(std::initializer_list<LabelId> ids)
    {
        for (auto id : ids)
            insert(id);
    }

    static auto singleton(LabelId id) -> LabelSet
    {
        LabelSet s;
        s.insert(id);
        return s;
    }

    static auto from_ids(const std::vector<LabelId> & ids) -> LabelSet
    {
        LabelSet s;
        for (auto id : ids)
            s.insert(id);
        return s;
    }

    // All ids in [0, n).
    static auto full(std::size_t n) -> LabelSet
    {
        LabelSet s;
        for (std::size_t i = 0; i < n; ++i)
            s.insert(static_cast<LabelId>(i));
        return s;
    }

    void insert(LabelId id)
    {
        std::size_t w = id / 64;
        if (w >= words_.size())
            words_.resize(w + 1, 0);
        words_[w] |= std::uint64_t{1} << (id % 64);
    }

    void erase(LabelId id)
    {
        std::size_t w = id / 64;
        if (w < words_.size()) {
            words_[w] &= ~(std::uint64_t{1} << (id % 64));
            trim();
        }
    }

    auto contains(LabelId id) const -> bool
    {
        std::size_t w = id / 64;
        return w < words_.size() && ((words_[w] >> (id % 64)) & 1u);
    }

    auto empty() const -> bool { return words_.empty(); }

    auto size() const -> std::size_t
    {
        std::size_t n = 0;
        for (auto w : words_)
            n += static_cast<std::size_t>(std::popcount(w));
        return n;
    }

    auto members() const -> std::vector<LabelId>
    {
        std::vector<LabelId> out;
        for (std::size_t w = 0; w < words_.size(); ++w) {
            auto bits = words_[w];
            while (bits) {
                int b = std::countr_zero(bits);
                out.push_back(static_cast<LabelId>(w * 64 + static_cast<std::size_t>(b)));
                bits &= bits - 1;
            }
        }
        return out;
    }

    // Smallest member; undefined on the empty set.
    auto first() const -> LabelId
    {
        for (std::size_t w = 0; w < words_.size(); ++w)
            if (words_[w])
                return static_cast<LabelId>(w * 64 + static_cast<std::size_t>(std::countr_zero(words_[w])));
        return 0;
    }

    auto subset_of(const LabelSet & other) const -> bool
    {
        if (words_.size() > other.words_.size())
            return false;
        for (std::size_t w = 0; w < words_.size(); ++w)
            if (words_[w] & ~other.words_[w])
                return false;
        return true;
    }

    auto intersects(const LabelSet & other) const -> bool
    {
        std::size_t n = std::min(words_.size(), other.words_.size());
        for (std::size_t w = 0; w < n; ++w)
            if (words_[w] & other.words_[w])
                return true;
        return false;
    }

    auto operator|=(const LabelSet & other) -> LabelSet &
    {
        if (other.words_.size() > words_.size())
            words_.resize(other.words_.size(), 0);
        for (std::size_t w = 0; w < other.words_.size(); ++w)
            words_[w] |= other.words_[w];
        return *this;
    }

    auto operator&=(const LabelSet & other) -> LabelSet &
    {
        if (words_.size() > other.words_.size())
            words_.resize(other.words_.size());
        for (std::size_t w = 0; w < words_.size(); ++w)
            words_[w] &= other.words_[w];
        trim();
        return *this;
    }

    // Set difference.
    auto operator-=(const LabelSet & other) -> LabelSet &
    {
        std::size_t n = std::min(words_.size(), other.words_.size());
        for (std::size_t w = 0; w < n; ++w)
            words_[w] &= ~other.words_[w];
        trim();
        return *this;
    }

    friend auto operator|(LabelSet a, const LabelSet & b) -> LabelSet { return a |= b; }
    friend auto operator&(LabelSet a, const LabelSet & b) -> LabelSet { return a &= b; }
    friend auto operator-(LabelSet a, const LabelSet & b) -> LabelSet { return a -= b; }

    friend auto operator==(const LabelSet & a, const LabelSet & b) -> bool { return a.words_ == b.words_; }

    friend auto operator<=>(const LabelSet & a, const LabelSet & b) -> std::strong_ordering
    {
        std::size_t n = std::max(a.words_.size(), b.words_.size());
        for (std::size_t w = 0; w < n; ++w) {
            std::uint64_t x = w < a.words_.size() ? a.words_[w] : 0;
            std::uint64_t y = w < b.words_.size() ? b.words_[w] : 0;
            if (x == y)
                continue;
            std::uint64_t diff = x ^ y;
            int bit = std::countr_zero(diff);
            std::uint64_t above = bit == 63 ? 0 : (~std::uint64_t{0} << (bit + 1));
            bool a_has = (x >> bit) & 1u;
            // The set owning the lowest differing element is smaller, unless the
            // other set ends before that element (it is then a proper prefix).
            const auto & other = a_has ? b : a;
            std::uint64_t other_word = a_has ? y : x;
            bool other_continues = (other_word & above) != 0;
            for (std::size_t v = w + 1; ! other_continues && v < other.words_.size(); ++v)
                other_continues = other.words_[v] != 0;
            if (other_continues)
                return a_has ? std::strong_ordering::less : std::strong_ordering::greater;
            return a_has ? std::strong_ordering::greater : std::strong_ordering::less;
        }
        return std::strong_ordering::equal;
    }

    auto hash() const -> std::size_t
    {
        std::uint64_t h = 0x9e3779b97f4a7c15ull;
        for (auto w : words_) {
            h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
            h *= 0xff51afd7ed558ccdull;
        }
        return static_cast<std::size_t>(h ^ (h >> 33));
    }

  private:
    void trim()
    {
        while (! words_.empty() && words_.back() == 0)
            words_.pop_back();
    }

    boost::container::small_vector<std::uint64_t, 1> words_;
};

struct LabelSetHash {
    auto operator()(const LabelSet & s) const -> std::size_t { return s.hash(); }
};

}
