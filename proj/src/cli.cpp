#include "bern/cli.hpp"

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <mutex>
#include <string>

#include <CLI11.hpp>

#include "bern/bernmod.hpp"
#include "bern/modarith.hpp"
#include "bern/reconstruct.hpp"
#include "bern/threadpool.hpp"
#include "bern/verify.hpp"

namespace bern {

namespace {

enum class Mode { full, single_prime };

struct WorkPlan {
    std::uint64_t k = 0;
    unsigned threads = 1;
    Mode mode = Mode::full;
    std::uint64_t mod_prime = 0;
    bool verify = false;
    bool raw = false;
    int base = 10;
    std::string output;       // empty = stdout
    double progress_secs = 0; // 0 = silent
};

int run_single_prime(const WorkPlan& plan) {
    const std::uint64_t p = plan.mod_prime;
    const std::uint64_t k = plan.k;
    if (p < 5 || p > MontgomeryContext::max_modulus || !is_prime_u64(p)) {
        std::cerr << "bern: --mod requires a prime in [5, 2^62)\n";
        return 1;
    }
    if (k >= 2 && k % 2 == 0 && k % (p - 1) == 0) {
        std::cerr << "bern: p = " << p << " is excluded by von Staudt-Clausen: "
                  << "p-1 divides k, so p divides the denominator of B_k\n";
        return 1;
    }
    std::uint64_t residue = 0;
    if (k % 2 == 1 && k >= 3) {
        residue = 0; // B_k = 0
    } else if (k == 0) {
        residue = 1;
    } else if (k == 1) {
        residue = p - mod_inv(2, p); // -1/2
    } else {
        residue = bern_mod_p(k, p).rp;
    }
    std::string text = plan.base == 16 ? mpz_class(static_cast<unsigned long>(residue)).get_str(16)
                                       : std::to_string(residue);
    if (!plan.output.empty()) {
        std::ofstream out(plan.output);
        if (!out) {
            std::cerr << "bern: cannot open output file " << plan.output << "\n";
            return 2;
        }
        out << text << "\n";
    } else {
        std::cout << text << "\n";
    }
    return 0;
}

int run_full(const WorkPlan& plan) {
    ProgressFn progress;
    std::mutex progress_mu;
    auto last = std::chrono::steady_clock::now();
    if (plan.progress_secs > 0) {
        progress = [&](std::uint64_t done, std::uint64_t total) {
            std::lock_guard<std::mutex> lock(progress_mu);
            auto now = std::chrono::steady_clock::now();
            if (done == total ||
                std::chrono::duration<double>(now - last).count() >= plan.progress_secs) {
                last = now;
                std::cerr << "bern: " << done << "/" << total << " primes done\n";
            }
        };
    }

    ComputeStats stats;
    BernoulliRational value = bernoulli(plan.k, plan.threads, progress, &stats);
    if (plan.progress_secs > 0) {
        std::cerr << "bern: " << stats.prime_count << " primes, modulus "
                  << stats.modulus_bits << " bits, residues " << stats.residue_seconds
                  << " s, reconstruction " << stats.reconstruct_seconds << " s\n";
    }

    if (plan.verify) {
        VerificationReport report = verify_bernoulli(value, plan.k);
        if (!report.ok()) {
            std::cerr << "bern: verification FAILED (magnitude "
                      << (report.magnitude_ok ? "ok" : "bad") << ", ratio "
                      << report.magnitude_ratio << "; spot checks "
                      << (report.spot_ok ? "ok" : "bad") << ")\n";
            return 2;
        }
        if (plan.progress_secs > 0)
            std::cerr << "bern: verification passed (ratio " << report.magnitude_ratio << ")\n";
    }

    std::string text;
    if (plan.raw)
        text = value.num.get_str(plan.base) + "\n" + value.den.get_str(plan.base) + "\n";
    else
        text = value.to_string(plan.base) + "\n";

    if (!plan.output.empty()) {
        std::ofstream out(plan.output);
        if (!out) {
            std::cerr << "bern: cannot open output file " << plan.output << "\n";
            return 2;
        }
        out << text;
    } else {
        std::cout << text;
    }
    return 0;
}

} // namespace

int run(int argc, const char* const* argv) {
    WorkPlan plan;
    plan.threads = default_thread_count();

    CLI::App app{"compute the Bernoulli number B_k as an exact rational"};
    app.add_option("k", plan.k, "index of the Bernoulli number")->required();
    app.add_option("--threads", plan.threads, "worker threads")
        ->envname("BERN_THREADS")
        ->check(CLI::Range(1u, 4096u));
    app.add_option("--mod", plan.mod_prime, "print only B_k modulo this prime");
    app.add_flag("--verify", plan.verify, "run consistency checks on the result");
    app.add_option("--output", plan.output, "write the result to this file");
    app.add_option("--base", plan.base, "output base")->check(CLI::IsMember({10, 16}));
    app.add_flag("--raw", plan.raw, "numerator and denominator on separate lines");
    app.add_option("--progress", plan.progress_secs, "progress report interval in seconds")
        ->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (plan.mod_prime != 0 && plan.verify) {
        std::cerr << "bern: --verify applies to the full computation, not --mod\n";
        return 1;
    }

    try {
        plan.mode = plan.mod_prime != 0 ? Mode::single_prime : Mode::full;
        return plan.mode == Mode::single_prime ? run_single_prime(plan) : run_full(plan);
    } catch (const std::exception& e) {
        std::cerr << "bern: " << e.what() << "\n";
        return 2;
    }
}

} // namespace bern
