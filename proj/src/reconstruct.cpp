#include "bern/reconstruct.hpp"

#include <chrono>
#include <stdexcept>
#include <unordered_set>

#include "bern/bounds.hpp"
#include "bern/primesieve.hpp"
#include "bern/threadpool.hpp"

namespace bern {

std::string BernoulliRational::to_string(int base) const {
    if (base != 10 && base != 16)
        throw std::invalid_argument("base must be 10 or 16");
    return num.get_str(base) + "/" + den.get_str(base);
}

CrtTree::CrtTree(std::span<const std::uint64_t> moduli) {
    if (moduli.empty())
        throw std::invalid_argument("product_tree: no moduli");
    std::unordered_set<std::uint64_t> seen;
    for (std::uint64_t m : moduli)
        if (!seen.insert(m).second)
            throw std::invalid_argument("product_tree: duplicate modulus");

    std::vector<mpz_class> level;
    level.reserve(moduli.size());
    for (std::uint64_t m : moduli)
        level.emplace_back(static_cast<unsigned long>(m));
    levels_.push_back(std::move(level));
    while (levels_.back().size() > 1) {
        const auto& prev = levels_.back();
        std::vector<mpz_class> up;
        up.reserve((prev.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < prev.size(); i += 2)
            up.push_back(prev[i] * prev[i + 1]);
        if (prev.size() % 2 == 1)
            up.push_back(prev.back());
        levels_.push_back(std::move(up));
    }
}

CrtTree product_tree(std::span<const std::uint64_t> moduli) {
    return CrtTree(moduli);
}

mpz_class crt_combine(std::span<const ResiduePair> pairs, const CrtTree& tree,
                      unsigned threads) {
    const auto& levels = tree.levels();
    const auto& leaves = levels.front();
    if (pairs.size() != leaves.size())
        throw std::invalid_argument("crt_combine: residue count does not match tree");
    for (std::size_t i = 0; i < pairs.size(); ++i)
        if (leaves[i] != static_cast<unsigned long>(pairs[i].p))
            throw std::invalid_argument("crt_combine: residue/modulus mismatch at leaf");

    // Down pass: W_v = (M / M_v) mod M_v, the product of all moduli outside
    // the node's subtree. Children get W_L = W_v M_R mod M_L and the mirror
    // image, so the only inverses are word-sized ones at the leaves.
    std::vector<mpz_class> w(1, mpz_class(1));
    for (std::size_t lvl = levels.size() - 1; lvl-- > 0;) {
        const auto& mods = levels[lvl];
        std::vector<mpz_class> next(mods.size());
        std::size_t pairs_here = mods.size() / 2;
        parallel_for_dynamic(pairs_here, threads, [&](std::size_t i) {
            const mpz_class& ml = mods[2 * i];
            const mpz_class& mr = mods[2 * i + 1];
            mpz_class t = w[i] * mr;
            mpz_mod(next[2 * i].get_mpz_t(), t.get_mpz_t(), ml.get_mpz_t());
            t = w[i] * ml;
            mpz_mod(next[2 * i + 1].get_mpz_t(), t.get_mpz_t(), mr.get_mpz_t());
        });
        if (mods.size() % 2 == 1)
            next.back() = w.back(); // carried node keeps its outside product
        w = std::move(next);
    }

    // Leaf step: R = sum r_p * ((M/p)^{-1} mod p) * (M/p), assembled exactly
    // by the up pass val_parent = val_L * M_R + val_R * M_L.
    std::vector<mpz_class> values(pairs.size());
    parallel_for_dynamic(pairs.size(), threads, [&](std::size_t i) {
        const std::uint64_t p = pairs[i].p;
        std::uint64_t wp = mpz_get_ui(w[i].get_mpz_t());
        std::uint64_t vp = static_cast<std::uint64_t>(
            static_cast<u128>(pairs[i].rp) * mod_inv(wp, p) % p);
        values[i] = static_cast<unsigned long>(vp);
    });

    for (std::size_t lvl = 0; lvl + 1 < levels.size(); ++lvl) {
        const auto& mods = levels[lvl];
        std::size_t pairs_here = mods.size() / 2;
        std::vector<mpz_class> up(pairs_here + mods.size() % 2);
        parallel_for_dynamic(pairs_here, threads, [&](std::size_t i) {
            up[i] = values[2 * i] * mods[2 * i + 1] + values[2 * i + 1] * mods[2 * i];
        });
        if (mods.size() % 2 == 1)
            up.back() = values.back();
        values = std::move(up);
    }
    mpz_class r;
    mpz_mod(r.get_mpz_t(), values.front().get_mpz_t(), tree.root().get_mpz_t());
    return r;
}

mpz_class recover_numerator(const mpz_class& R, const mpz_class& M,
                            const mpz_class& Dk, std::uint64_t k) {
    mpz_class n_prime = Dk * R;
    mpz_mod(n_prime.get_mpz_t(), n_prime.get_mpz_t(), M.get_mpz_t());
    if (k % 4 == 2)
        return n_prime;
    return n_prime - M;
}

BernoulliRational bernoulli(std::uint64_t k, unsigned threads,
                            const ProgressFn& progress, ComputeStats* stats) {
    if (threads == 0)
        threads = 1;
    if (k == 0)
        return {1, 1};
    if (k == 1)
        return {-1, 2};
    if (k % 2 == 1)
        return {0, 1};
    if (k == 2)
        return {1, 6};
    if (k > (std::uint64_t(1) << 40))
        throw std::invalid_argument("k too large: the prime bound would exceed the sieve range");

    const std::uint64_t Y = a_priori_Y(k);
    PrimeList primes = sieve_upto(Y);
    BoundSet bounds = compute_bounds(k, primes);

    std::vector<std::uint64_t> mods;
    for (std::uint64_t p : primes) {
        if (p > bounds.X)
            break;
        if (p >= 5 && k % (p - 1) != 0)
            mods.push_back(p);
    }

    auto t0 = std::chrono::steady_clock::now();
    std::vector<ResiduePair> residues(mods.size());
    std::atomic<std::uint64_t> done{0};
    const std::uint64_t total = mods.size();
    // largest primes first so the longest jobs start earliest
    parallel_for_dynamic(mods.size(), threads, [&](std::size_t i) {
        std::size_t j = mods.size() - 1 - i;
        residues[j] = bern_mod_p(k, mods[j]);
        std::uint64_t d = done.fetch_add(1, std::memory_order_relaxed) + 1;
        if (progress)
            progress(d, total);
    });
    auto t1 = std::chrono::steady_clock::now();

    CrtTree tree = product_tree(mods);
    if (mpz_sizeinbase(tree.root().get_mpz_t(), 2) <= bounds.beta)
        throw std::logic_error("bernoulli: modulus product below 2^beta (bound bug)");
    mpz_class R = crt_combine(residues, tree, threads);
    mpz_class N = recover_numerator(R, tree.root(), bounds.Dk, k);
    auto t2 = std::chrono::steady_clock::now();

    if (stats) {
        stats->prime_count = mods.size();
        stats->modulus_bits = mpz_sizeinbase(tree.root().get_mpz_t(), 2);
        stats->residue_seconds = std::chrono::duration<double>(t1 - t0).count();
        stats->reconstruct_seconds = std::chrono::duration<double>(t2 - t1).count();
    }
    return {N, bounds.Dk};
}

} // namespace bern
