#pragma once

#include <cstdint>
#include <limits>
#include <cmath>
#include <string>
#include <vector>
#include <stdexcept>

namespace grig {

// Unsigned arbitrary-precision integer, little-endian 64-bit limbs.
// Only the operations the rest of the code needs: add, checked sub,
// mul, shifts, comparisons, bit access, decimal/double conversion.
class BigUint {
public:
    BigUint() = default;
    BigUint(uint64_t v) {
        if (v) limbs_.push_back(v);
    }

    static BigUint pow2(size_t k) {
        BigUint r;
        r.set_bit(k);
        return r;
    }

    bool is_zero() const { return limbs_.empty(); }

    bool bit(size_t i) const {
        size_t w = i / 64, b = i % 64;
        if (w >= limbs_.size()) return false;
        return (limbs_[w] >> b) & 1u;
    }

    void set_bit(size_t i) {
        size_t w = i / 64, b = i % 64;
        if (w >= limbs_.size()) limbs_.resize(w + 1, 0);
        limbs_[w] |= (uint64_t(1) << b);
    }

    size_t bit_length() const {
        if (limbs_.empty()) return 0;
        uint64_t top = limbs_.back();
        size_t n = 0;
        while (top) { ++n; top >>= 1; }
        return (limbs_.size() - 1) * 64 + n;
    }

    BigUint& operator+=(const BigUint& o) {
        size_t n = std::max(limbs_.size(), o.limbs_.size());
        limbs_.resize(n, 0);
        unsigned __int128 carry = 0;
        for (size_t i = 0; i < n; ++i) {
            unsigned __int128 s = carry + limbs_[i] + (i < o.limbs_.size() ? o.limbs_[i] : 0);
            limbs_[i] = uint64_t(s);
            carry = s >> 64;
        }
        if (carry) limbs_.push_back(uint64_t(carry));
        return *this;
    }

    // Requires *this >= o.
    BigUint& operator-=(const BigUint& o) {
        if (cmp(o) < 0) throw std::underflow_error("BigUint subtraction underflow");
        __int128 borrow = 0;
        for (size_t i = 0; i < limbs_.size(); ++i) {
            __int128 d = (__int128)limbs_[i] - (i < o.limbs_.size() ? o.limbs_[i] : 0) - borrow;
            if (d < 0) { d += ((__int128)1 << 64); borrow = 1; } else borrow = 0;
            limbs_[i] = uint64_t(d);
        }
        trim();
        return *this;
    }

    BigUint operator+(const BigUint& o) const { BigUint r = *this; r += o; return r; }
    BigUint operator-(const BigUint& o) const { BigUint r = *this; r -= o; return r; }

    BigUint operator*(const BigUint& o) const {
        if (is_zero() || o.is_zero()) return BigUint();
        BigUint r;
        r.limbs_.assign(limbs_.size() + o.limbs_.size(), 0);
        for (size_t i = 0; i < limbs_.size(); ++i) {
            unsigned __int128 carry = 0;
            for (size_t j = 0; j < o.limbs_.size(); ++j) {
                unsigned __int128 cur = (unsigned __int128)limbs_[i] * o.limbs_[j] + r.limbs_[i + j] + carry;
                r.limbs_[i + j] = uint64_t(cur);
                carry = cur >> 64;
            }
            size_t k = i + o.limbs_.size();
            while (carry) {
                unsigned __int128 cur = carry + r.limbs_[k];
                r.limbs_[k] = uint64_t(cur);
                carry = cur >> 64;
                ++k;
            }
        }
        r.trim();
        return r;
    }

    BigUint operator<<(size_t bits) const {
        if (is_zero()) return BigUint();
        size_t words = bits / 64, rem = bits % 64;
        BigUint r;
        r.limbs_.assign(limbs_.size() + words + 1, 0);
        for (size_t i = 0; i < limbs_.size(); ++i) {
            r.limbs_[i + words] |= rem ? (limbs_[i] << rem) : limbs_[i];
            if (rem) r.limbs_[i + words + 1] |= limbs_[i] >> (64 - rem);
        }
        r.trim();
        return r;
    }

    int cmp(const BigUint& o) const {
        if (limbs_.size() != o.limbs_.size())
            return limbs_.size() < o.limbs_.size() ? -1 : 1;
        for (size_t i = limbs_.size(); i-- > 0;) {
            if (limbs_[i] != o.limbs_[i]) return limbs_[i] < o.limbs_[i] ? -1 : 1;
        }
        return 0;
    }

    bool operator==(const BigUint& o) const { return cmp(o) == 0; }
    bool operator!=(const BigUint& o) const { return cmp(o) != 0; }
    bool operator<(const BigUint& o) const { return cmp(o) < 0; }
    bool operator<=(const BigUint& o) const { return cmp(o) <= 0; }
    bool operator>(const BigUint& o) const { return cmp(o) > 0; }
    bool operator>=(const BigUint& o) const { return cmp(o) >= 0; }

    // |a - b| as BigUint.
    static BigUint absdiff(const BigUint& a, const BigUint& b) {
        return a.cmp(b) >= 0 ? a - b : b - a;
    }

    double to_double() const {
        double r = 0.0;
        for (size_t i = limbs_.size(); i-- > 0;)
            r = r * std::ldexp(1.0, 64) + double(limbs_[i]);
        return r;
    }

    uint64_t to_u64() const {
        if (limbs_.size() > 1) throw std::overflow_error("BigUint does not fit u64");
        return limbs_.empty() ? 0 : limbs_[0];
    }

    bool fits_u64() const { return limbs_.size() <= 1; }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::vector<uint64_t> tmp = limbs_;
        std::string out;
        while (!tmp.empty()) {
            unsigned __int128 rem = 0;
            for (size_t i = tmp.size(); i-- > 0;) {
                unsigned __int128 cur = (rem << 64) | tmp[i];
                tmp[i] = uint64_t(cur / 10);
                rem = cur % 10;
            }
            out.push_back(char('0' + int(rem)));
            while (!tmp.empty() && tmp.back() == 0) tmp.pop_back();
        }
        return std::string(out.rbegin(), out.rend());
    }

private:
    void trim() {
        while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
    }
    std::vector<uint64_t> limbs_;
};

} // namespace grig
