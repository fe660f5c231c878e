// Acceptance run: one PASS/FAIL line per criterion.
// Usage: acceptance [criterion numbers...]   (default: all ten)

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "tbp/energy.hpp"
#include "tbp/hessian.hpp"
#include "tbp/search.hpp"
#include "tbp/tumanov.hpp"
#include "test_support.hpp"

using namespace tbp;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

Outcome exact_energies() {
    const auto t = polar_tbp();
    const std::pair<Potential, long> want[] = {
        {Potential::g(3), 51}, {Potential::g(4), 99}, {Potential::g(5), 195}, {Potential::g(6), 387}, {Potential::g10_sharp(), 14361}};
    std::ostringstream os;
    bool ok = true;
    for (const auto& [F, e] : want) {
        const QSqrt3 got = config_energy(t, F);
        ok = ok && got == QSqrt3(Rational(e));
        os << F.name() << "=" << got.to_double() << " ";
    }
    return {ok, os.str()};
}

Outcome coefficient_sums() {
    BigInt best = 0;
    for (int k = 2; k <= 6; ++k) best = std::max(best, m8_global_bound(k));
    const BigInt g10 = m8_global_bound(10);
    const bool ok = best == BigInt("13400293856913653760") && g10 == BigInt("162516942801336639946752000");
    return {ok, "max k<=6: " + best.get_str() + ", k=10: " + g10.get_str()};
}

Outcome hessian_certificates() {
    const std::pair<std::string, long> limits[] = {{"2", 1}, {"3", 1}, {"4", 2}, {"5", 4}, {"6", 12}, {"g10#", 1091}};
    std::ostringstream os;
    bool ok = true;
    for (const auto& [tag, limit] : limits) {
        try {
            const auto c = certify_local_minimum(tag);
            const bool good = c.final_margin > 0 && c.f_bound < limit;
            ok = ok && good;
            os << tag << ": lambda " << c.lambda << " bound " << c.f_bound.get_d() << (good ? "" : " (over limit)") << "; ";
        } catch (const std::exception& e) {
            ok = false;
            os << tag << ": " << e.what() << "; ";
        }
    }
    return {ok, os.str()};
}

Outcome searches() {
    std::ostringstream os;
    bool ok = true;
    {
        const auto r = search(SearchParams{});
        const double ratio = static_cast<double>(r.partition_size) / 5513537.0;
        const bool good = r.status == SearchStatus::success && ratio >= 0.8 && ratio <= 1.2;
        ok = ok && good;
        os << "G3 " << status_name(r.status) << " partition " << r.partition_size << " (" << std::lround(100 * (ratio - 1)) << "% vs 5513537, "
           << std::lround(r.elapsed_seconds) << " s); ";
    }
    // G10#: 100 random depth-3 subregions and the depth-3 block with a corner at the TBP
    const SearchParams base = SearchParams::defaults_for(Potential::g10_sharp());
    const int sc = base.scale_log2;
    const std::int64_t S = std::int64_t{1} << sc, h = S >> 4;
    std::vector<DyadicBlock> regions;
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 100; ++i) {
        DyadicBlock b;
        b.q0 = {static_cast<std::int64_t>(rng() % 32) * 2 * h + h, 3, static_cast<std::int8_t>(sc)};
        for (auto& q : b.squares)
            q = {-2 * S + static_cast<std::int64_t>(rng() % 32) * 2 * h + h, -2 * S + static_cast<std::int64_t>(rng() % 32) * 2 * h + h, 3,
                 static_cast<std::int8_t>(sc)};
        regions.push_back(b);
    }
    DyadicBlock corner;
    corner.q0 = {S + h, 3, static_cast<std::int8_t>(sc)};
    corner.squares = {DyadicSquare{-S / 2 + h, -S + 3 * h, 3, static_cast<std::int8_t>(sc)}, DyadicSquare{h, h, 3, static_cast<std::int8_t>(sc)},
                      DyadicSquare{-S / 2 + h, S - 3 * h, 3, static_cast<std::int8_t>(sc)}};
    regions.push_back(corner);
    int succeeded = 0;
    std::uint64_t blocks = 0, in_b0 = 0;
    for (const auto& b : regions) {
        SearchParams p = base;
        p.subregion = block_code(b);
        const auto r = search(p);
        succeeded += r.status == SearchStatus::success ? 1 : 0;
        blocks += r.partition_size;
        in_b0 += r.counts[static_cast<std::size_t>(Verdict::pass_in_B0)];
    }
    ok = ok && succeeded == static_cast<int>(regions.size()) && in_b0 > 0;
    os << "G10# subregions " << succeeded << "/" << regions.size() << " success, partition " << blocks << ", in_B0 " << in_b0;
    return {ok, os.str()};
}

MachineInterval sampled_energy(const DyadicBlock& b, const Potential& F, std::mt19937_64& rng) {
    Configuration<MachineInterval> c;
    c.x0 = MachineInterval(test_support::sample_point(rng, b.q0));
    for (int i = 0; i < 3; ++i) {
        const auto p = test_support::sample_point(rng, b.squares[static_cast<std::size_t>(i)]);
        c.p[static_cast<std::size_t>(i)] = {MachineInterval(p[0]), MachineInterval(p[1])};
    }
    return config_energy(c, F);
}

Outcome energy_soundness() {
    std::mt19937_64 rng(5);
    std::uint64_t samples = 0, violations = 0;
    for (int k = 2; k <= 6; ++k) {
        const auto F = Potential::g(k);
        for (int n = 0; n < 1000; ++n) {
            const auto b = test_support::random_good_block(rng, 25, 2, 6);
            const auto cells = block_cells<MachineInterval>(b);
            const double bound = (min_vertex_energy(cells, F) - block_error(cells, F).err_total).lo();
            for (int m = 0; m < 1000; ++m, ++samples)
                if (sampled_energy(b, F, rng).hi() < bound) ++violations;
        }
    }
    return {violations == 0, std::to_string(samples) + " samples, " + std::to_string(violations) + " violations"};
}

Outcome polynomial_inequality() {
    std::mt19937_64 rng(6);
    int violations = 0;
    for (int n = 0; n < 100000; ++n) {
        const int k = 2 + static_cast<int>(rng() % 9);
        std::array<Rational, 4> x, l;
        Rational lsum(0);
        for (int i = 0; i < 4; ++i) {
            x[i] = make_rational(static_cast<long>(rng() % 4001), 1000);
            l[i] = make_rational(static_cast<long>(1 + rng() % 1000), 1);
            lsum += l[i];
        }
        std::sort(x.begin(), x.end());
        Rational lhs(0), mean(0);
        for (int i = 0; i < 4; ++i) {
            l[i] /= lsum;
            lhs += l[i] * rpow(x[i], k);
            mean += l[i] * x[i];
        }
        lhs -= rpow(mean, k);
        if (lhs > make_rational(k * (k - 1), 8) * rpow(x[3], k - 2) * (x[3] - x[0]) * (x[3] - x[0])) ++violations;
    }
    return {violations == 0, "100000 tuples, " + std::to_string(violations) + " violations"};
}

Outcome tumanov() {
    std::ostringstream os;
    const auto c1 = verify_coefficient_positivity(1);
    const bool ok1 = c1.ok() && c1.certified_count() == 12;
    os << "case 1: " << c1.certified_count() << "/12 certified (" << c1.wpd_count() << " whole, rest split at 1/2); ";
    const auto c2 = verify_coefficient_positivity(2);
    int pos2 = 0;
    for (const auto& e : c2.endpoints) pos2 += e.positive ? 1 : 0;
    const bool ok2 = c2.ok() && c2.wpd_count() == 30 && pos2 == static_cast<int>(c2.endpoints.size());
    os << "case 2: " << c2.wpd_count() << "/30 WPD, " << pos2 << "/" << c2.endpoints.size() << " endpoints; ";
    const auto c3 = verify_coefficient_positivity(3);
    const bool ok3 = c3.ok() && c3.wpd_count() == 35 && c3.pd_count() == 35;
    os << "case 3: " << c3.wpd_count() << "/35 WPD on whole interval, " << c3.certified_count() << "/35 after bisection, " << c3.pd_count()
       << "/35 PD; ";
    const auto roots = case3_simple_roots();
    std::uint64_t worst = 0;
    for (const auto& i : roots.intervals) worst = std::max(worst, i.result.expansions);
    os << "simple roots: " << (roots.ok() ? "7/7 halted" : "inconclusive") << " (max " << worst << " expansions)";
    return {ok1 && ok2 && ok3 && roots.ok(), os.str()};
}

Outcome psi_at_six() {
    const auto phi = case3_phi_at(6);
    const Rational expected[11] = {make_rational(115060, 1157), make_rational(-3264104, 5785), make_rational(789255, 1157), 0,
                                   make_rational(-415152, 1157), make_rational(830304, 5785), 0, 0, 0, make_rational(-40, 13), 1};
    bool ok = true;
    for (int i = 0; i <= 10; ++i) ok = ok && phi[static_cast<std::size_t>(i)].is_point() && phi[static_cast<std::size_t>(i)].lo() / phi[10].lo() == expected[i];
    return {ok, ok ? "all 11 coefficients exact" : "mismatch"};
}

Outcome interval_kernel() {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> big(-1e6, 1e6), small(-500, 500), unit(0, 1);
    int violations = 0;
    for (int n = 0; n < 250000; ++n)
        for (int op = 0; op < 4; ++op) {
            const double a = op >= 2 ? small(rng) : big(rng), b = a + std::fabs(small(rng));
            double c = small(rng), d = c + std::fabs(small(rng)) * 0.1;
            if (op == 3) {
                const double m = 0.01 + std::fabs(small(rng));
                c = (rng() & 1) ? m : -m - 1.0;
                d = c + 1.0;
            }
            const MachineInterval I(a, b), J(c, d);
            const Rational R(a + (b - a) * unit(rng)), T(c + (d - c) * unit(rng));
            MachineInterval out;
            Rational v;
            switch (op) {
                case 0: out = I + J; v = R + T; break;
                case 1: out = I - J; v = R - T; break;
                case 2: out = I * J; v = R * T; break;
                default: out = I / J; v = R / T; break;
            }
            if (!(Rational(out.lo()) <= v && v <= Rational(out.hi()))) ++violations;
        }
    const double huge = std::ldexp(1.0, 41), mid = std::ldexp(1.0, 11);
    const std::function<void()> crafted[] = {
        [&] { (void)(MachineInterval(huge) + MachineInterval(1)); },
        [&] { (void)(MachineInterval(mid) * MachineInterval(mid)); },
        [&] { (void)(MachineInterval(1) / MachineInterval(mid)); },
        [&] { (void)(MachineInterval(1) / MachineInterval(1.0 / 4096)); },
        [&] { (void)(MachineInterval(1) / MachineInterval(-1, 1)); },
        [&] { (void)MachineInterval(std::ldexp(1.0, 51)); },
        [&] { (void)MachineInterval(2, 1); },
        [&] { (void)MachineInterval(std::nan(""), 1); },
    };
    int fired = 0;
    for (const auto& f : crafted) {
        try {
            f();
        } catch (const RigorAbort&) {
            ++fired;
        }
    }
    const int n_crafted = static_cast<int>(std::size(crafted));
    return {violations == 0 && fired == n_crafted,
            "1000000 checks, " + std::to_string(violations) + " violations; guards " + std::to_string(fired) + "/" + std::to_string(n_crafted)};
}

Outcome log_brackets() {
    const auto L = log_enclosures();
    const bool verified = verify_log_enclosures();
    const Rational limit = Rational(1) / 1000000000;
    std::ostringstream os;
    os << (verified ? "log m enclosed for m = 2,3,4" : "verification failed") << "; widths";
    bool narrow = true;
    for (const auto& l : L) {
        os << ' ' << l.width().get_d();
        narrow = narrow && l.width() < limit;
    }
    const bool consistent = L[2].lo() == 2 * L[0].lo() && (RationalInterval(2) * L[0]).contains(L[2]);
    os << "; L4 " << (L[2] == RationalInterval(2) * L[0] ? "= 2 L2" : consistent ? "inside 2 L2 (upper endpoints differ)" : "inconsistent with L2");
    return {verified && narrow && consistent, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
    std::cout << std::unitbuf;
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"exact TBP energies", exact_energies},
        {"weight-8 coefficient sums", coefficient_sums},
        {"Hessian certificates", hessian_certificates},
        {"G3 search and G10# subregions", searches},
        {"energy bound soundness", energy_soundness},
        {"polynomial inequality", polynomial_inequality},
        {"Tumanov certifications", tumanov},
        {"psi at s = 6", psi_at_six},
        {"interval kernel", interval_kernel},
        {"log enclosures", log_brackets},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::stoi(argv[i]));
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && !only.count(id)) continue;
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS" : "FAIL") << "  " << id << ". " << criteria[i].first << ": " << o.detail << std::endl;
    }
    std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed") << std::endl;
    return failed ? 1 : 0;
}
