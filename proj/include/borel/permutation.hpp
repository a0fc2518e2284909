#pragma once

#include <borel/errors.hpp>
#include <borel/field.hpp>
#include <borel/matrix.hpp>

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

namespace borel {

/*
 * Element of the symmetric group S_n, the Weyl group of GL_n.
 *
 * One-line notation with 1-based images: images()[j-1] = w(j). Composition
 * is (u * w)(j) = u(w(j)) and the permutation matrix satisfies
 * P_w e_j = e_{w(j)}, so that P_{u*w} = P_u P_w.
 */
class Permutation {
public:
    /// The identity of S_n.
    explicit Permutation(std::size_t n = 1) : images_(n)
    {
        if (n == 0)
            throw InvalidInput("S_0 is not supported");
        std::iota(images_.begin(), images_.end(), std::size_t{1});
    }

    /// Throws InvalidInput unless images is a permutation of {1..n}.
    static Permutation from_images(std::vector<std::size_t> images)
    {
        const std::size_t n = images.size();
        if (n == 0)
            throw InvalidInput("empty permutation");
        std::vector<bool> seen(n + 1, false);
        for (auto v : images) {
            if (v < 1 || v > n || seen[v])
                throw InvalidInput("not a permutation of 1.." + std::to_string(n));
            seen[v] = true;
        }
        Permutation w;
        w.images_ = std::move(images);
        return w;
    }

    /// The transposition exchanging i and j (1-based); the identity when i == j.
    static Permutation transposition(std::size_t n, std::size_t i, std::size_t j)
    {
        if (i < 1 || j < 1 || i > n || j > n)
            throw InvalidInput("transposition index out of range");
        Permutation w(n);
        std::swap(w.images_[i - 1], w.images_[j - 1]);
        return w;
    }

    std::size_t size() const { return images_.size(); }
    const std::vector<std::size_t>& images() const { return images_; }

    /// w(j), 1-based.
    std::size_t operator()(std::size_t j) const { return images_.at(j - 1); }

    bool is_identity() const
    {
        for (std::size_t j = 0; j < images_.size(); ++j)
            if (images_[j] != j + 1)
                return false;
        return true;
    }

    Permutation inverse() const
    {
        Permutation inv(size());
        for (std::size_t j = 0; j < images_.size(); ++j)
            inv.images_[images_[j] - 1] = j + 1;
        return inv;
    }

    /// Number of inversions, i.e. Coxeter length for adjacent transpositions.
    std::size_t length() const
    {
        std::size_t count = 0;
        for (std::size_t i = 0; i < images_.size(); ++i)
            for (std::size_t j = i + 1; j < images_.size(); ++j)
                if (images_[i] > images_[j])
                    ++count;
        return count;
    }

    /// "2,1,3"
    std::string to_string() const
    {
        std::string s;
        for (std::size_t j = 0; j < images_.size(); ++j) {
            if (j)
                s += ',';
            s += std::to_string(images_[j]);
        }
        return s;
    }

    friend bool operator==(const Permutation&, const Permutation&) = default;
    friend auto operator<=>(const Permutation&, const Permutation&) = default;

private:
    std::vector<std::size_t> images_;
};

/// (u * w)(j) = u(w(j)).
inline Permutation compose(const Permutation& u, const Permutation& w)
{
    if (u.size() != w.size())
        throw DimensionMismatch("composing permutations of S_" + std::to_string(u.size()) + " and S_" +
                                std::to_string(w.size()));
    std::vector<std::size_t> images(w.size());
    for (std::size_t j = 1; j <= w.size(); ++j)
        images[j - 1] = u(w(j));
    return Permutation::from_images(std::move(images));
}

inline Permutation operator*(const Permutation& u, const Permutation& w) { return compose(u, w); }

/// j -> n + 1 - j
inline Permutation longest_element(std::size_t n)
{
    std::vector<std::size_t> images(n);
    for (std::size_t j = 0; j < n; ++j)
        images[j] = n - j;
    return Permutation::from_images(std::move(images));
}

/*
 * Bruhat order by the rank-matrix criterion: u <= w iff for all i, j
 *   #{a <= j : u(a) >= i} <= #{a <= j : w(a) >= i}.
 */
inline bool bruhat_leq(const Permutation& u, const Permutation& w)
{
    if (u.size() != w.size())
        throw DimensionMismatch("comparing permutations of S_" + std::to_string(u.size()) + " and S_" +
                                std::to_string(w.size()));
    const std::size_t n = u.size();
    for (std::size_t i = 1; i <= n; ++i) {
        std::size_t cu = 0, cw = 0;
        for (std::size_t j = 1; j <= n; ++j) {
            cu += u(j) >= i;
            cw += w(j) >= i;
            if (cu > cw)
                return false;
        }
    }
    return true;
}

template <ExactField F>
Matrix<F> perm_matrix(const Permutation& w, const F& field)
{
    const std::size_t n = w.size();
    Matrix<F> p(field, n, n);
    for (std::size_t j = 1; j <= n; ++j)
        p(w(j) - 1, j - 1) = field.one();
    return p;
}

/// {e} followed by the transpositions (i,j), i > j, in lexicographic (j, i) order.
inline std::vector<Permutation> transposition_set(std::size_t n)
{
    std::vector<Permutation> out;
    out.reserve((n * n - n + 2) / 2);
    out.emplace_back(n);
    for (std::size_t j = 1; j <= n; ++j)
        for (std::size_t i = j + 1; i <= n; ++i)
            out.push_back(Permutation::transposition(n, i, j));
    return out;
}

inline constexpr std::size_t max_enumerated_degree = 8;

/// All of S_n in lexicographic one-line order.
inline std::vector<Permutation> enumerate_group(std::size_t n)
{
    if (n > max_enumerated_degree)
        throw ResourceGuard("refusing to enumerate S_" + std::to_string(n) + " (limit n <= " +
                            std::to_string(max_enumerated_degree) + ")");
    Permutation e(n);
    std::vector<std::size_t> images = e.images();
    std::vector<Permutation> out;
    do {
        out.push_back(Permutation::from_images(images));
    } while (std::next_permutation(images.begin(), images.end()));
    return out;
}

/// Recovers w from a permutation matrix (exactly one 1 per column).
template <ExactField F>
Permutation permutation_of_matrix(const Matrix<F>& p)
{
    if (!p.is_square())
        throw InvalidInput("permutation matrix must be square");
    const F& f = p.field();
    std::vector<std::size_t> images(p.cols(), 0);
    for (std::size_t j = 0; j < p.cols(); ++j)
        for (std::size_t i = 0; i < p.rows(); ++i) {
            if (f.is_zero(p(i, j)))
                continue;
            if (!f.equal(p(i, j), f.one()) || images[j] != 0)
                throw InvalidInput("not a permutation matrix");
            images[j] = i + 1;
        }
    return Permutation::from_images(std::move(images));
}

} // namespace borel
