#include "lvlsf/perfect_hash.hpp"

#include <cmath>

#include "lvlsf/errors.hpp"
#include "lvlsf/oracle.hpp"

namespace lvlsf {

namespace {

constexpr double kVerifyGuard = 1e6;

bool is_prime(uint32_t n) {
    if (n < 2) return false;
    for (uint32_t d = 2; uint64_t(d) * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

uint32_t next_prime(uint32_t n) {
    while (!is_prime(n)) ++n;
    return n;
}

// Pair-independent upper bound on the number of u in [1, p) with
// h_u(x) = h_u(y) for a fixed pair x != y. Writing w = u*(x-y) mod p (a
// bijection of [1,p) in u), a collision requires w ≡ 0 or w ≡ p (mod range);
// counting all such w bounds the per-pair count from above.
uint32_t pair_collision_count(uint32_t p, uint32_t range) {
    uint32_t cnt = 0;
    for (uint32_t w = range; w < p; w += range) ++cnt; // w ≡ 0 (mod range)
    uint32_t start = p % range;                        // nonzero: p is prime, range < p
    if (start != 0)
        for (uint32_t w = start; w < p; w += range) ++cnt;
    return cnt;
}

double log_binomial(uint32_t n, uint32_t k) {
    double v = 0;
    for (uint32_t i = 0; i < k; ++i)
        v += std::log(double(n - i)) - std::log(double(i + 1));
    return v;
}

bool injective_on(const PerfectHashFamily& phf, size_t fn, const std::vector<uint32_t>& set,
                  std::vector<uint8_t>& scratch, std::vector<uint32_t>& touched) {
    bool ok = true;
    touched.clear();
    for (uint32_t x : set) {
        uint32_t v = phf.apply(fn, x);
        if (scratch[v]) { ok = false; break; }
        scratch[v] = 1;
        touched.push_back(v);
    }
    for (uint32_t v : touched) scratch[v] = 0;
    return ok;
}

} // namespace

bool verify_phf(const PerfectHashFamily& phf) {
    if (log_binomial(phf.domain, phf.k) > std::log(kVerifyGuard))
        throw cost_guard_error("verify_phf: C(domain,k) beyond cost guard");
    std::vector<uint32_t> set(phf.k);
    for (uint32_t i = 0; i < phf.k; ++i) set[i] = i;
    std::vector<uint8_t> scratch(phf.range, 0);
    std::vector<uint32_t> touched;
    for (;;) {
        bool covered = false;
        for (size_t fn = 0; fn < phf.size() && !covered; ++fn)
            covered = injective_on(phf, fn, set, scratch, touched);
        if (!covered) return false;
        // next k-combination of [domain], colex order
        uint32_t i = 0;
        while (i < phf.k) {
            uint32_t limit = (i + 1 < phf.k) ? set[i + 1] : phf.domain;
            if (set[i] + 1 < limit) break;
            ++i;
        }
        if (i == phf.k) break;
        ++set[i];
        for (uint32_t j = 0; j < i; ++j) set[j] = j;
    }
    return true;
}

PerfectHashFamily build_perfect_hash_family(uint32_t domain, uint32_t range, uint32_t k,
                                            const Seed& seed) {
    if (k == 0 || range == 0 || domain == 0)
        throw parameter_error("perfect hash family: zero parameter");
    if (k > domain)
        throw parameter_error("perfect hash family: k > domain");
    if (k > range)
        throw parameter_error("perfect hash family: k > range can never be injective");

    PerfectHashFamily phf;
    phf.domain = domain;
    phf.range = range;
    phf.k = k;

    if (range >= domain || k == 1) {
        phf.mode = PerfectHashFamily::Mode::identity;
        if (range < domain && k == 1) phf.range = range; // any single map works for k=1
        return phf;
    }

    if (log_binomial(domain, k) <= std::log(kVerifyGuard)) {
        // Sample-and-verify regime: grow the family until the exhaustive
        // check passes.
        phf.mode = PerfectHashFamily::Mode::sampled;
        double size_cap = std::pow(double(k), 4.0) * std::log(double(domain));
        for (uint32_t round = 0; round < 64; ++round) {
            size_t fam = std::min<size_t>(size_t(8) << round, size_t(std::ceil(size_cap)));
            Rng rng(seed.child(round));
            phf.fns.assign(fam, std::vector<uint32_t>(domain));
            for (auto& f : phf.fns)
                for (auto& v : f) v = uint32_t(rng.below(range));
            if (verify_phf(phf)) return phf;
            if (fam >= size_t(std::ceil(size_cap)))
                throw construction_error("perfect hash family: retry cap exceeded");
        }
        throw construction_error("perfect hash family: retry cap exceeded");
    }

    // Multiplicative family with a deterministic certificate.
    phf.mode = PerfectHashFamily::Mode::multiplicative;
    uint32_t p = next_prime(domain);
    for (; p < 16 * domain + 64; p = next_prime(p + 1)) {
        uint32_t cnt = pair_collision_count(p, range);
        // E_u[# colliding pairs within any k-set] = C(k,2) * cnt / (p-1) < 1
        // guarantees an injective member for every k-set.
        if (uint64_t(k) * (k - 1) / 2 * cnt < uint64_t(p) - 1) {
            phf.prime = p;
            phf.collision_count = cnt;
            phf.multipliers.resize(p - 1);
            for (uint32_t u = 1; u < p; ++u) phf.multipliers[u - 1] = u;
            double budget = std::pow(double(k), 4.0) * std::log(double(domain));
            if (double(phf.multipliers.size()) > budget + 1)
                throw construction_error("perfect hash family: certified family exceeds budget");
            return phf;
        }
    }
    throw construction_error("perfect hash family: no prime admits the collision certificate");
}

} // namespace lvlsf
