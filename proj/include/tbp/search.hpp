#pragma once

/**
 * @file search.hpp
 * @brief Relevance test, near-TBP containment, block grading, and the
 *        depth-first divide-and-conquer driver.
 */

#include <gmpxx.h>

#include <array>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "tbp/energy.hpp"
#include "tbp/geometry.hpp"

namespace tbp {

enum class Verdict : int {
    pass_irrelevant = 0,
    fail_subdivide = 1,
    pass_out_of_domain = 2,
    pass_in_B0 = 3,
    pass_eliminated = 4,
    fail_subdivide_by_energy = 5,
};
inline constexpr int kVerdictCount = 6;

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::pass_irrelevant: return "pass_irrelevant";
        case Verdict::fail_subdivide: return "fail_subdivide";
        case Verdict::pass_out_of_domain: return "pass_out_of_domain";
        case Verdict::pass_in_B0: return "pass_in_B0";
        case Verdict::pass_eliminated: return "pass_eliminated";
        case Verdict::fail_subdivide_by_energy: return "fail_subdivide_by_energy";
    }
    return "?";
}

inline bool is_pass(Verdict v) { return v != Verdict::fail_subdivide && v != Verdict::fail_subdivide_by_energy; }

struct GradeOutcome {
    Verdict verdict;
    int axis = -1;  // only for failures
};

struct SearchParams {
    int scale_log2 = 25;
    int epsilon0_log2 = -15;
    Potential potential = Potential::g(3);
    int thread_count = 1;
    std::optional<std::string> checkpoint_path;
    std::uint64_t checkpoint_every = 1000000;
    bool resume = false;
    std::optional<std::string> subregion;
    std::uint64_t max_blocks = 0;  // 0 = unlimited

    /// Published parameters: (2^25, 2^-15) for G3..G6, (2^30, 2^-18) for G10#.
    static SearchParams defaults_for(const Potential& F) {
        SearchParams p;
        p.potential = F;
        if (F.max_k() >= 10) {
            p.scale_log2 = 30;
            p.epsilon0_log2 = -18;
        }
        return p;
    }

    void validate() const {
        if (scale_log2 < 4 || scale_log2 > 40) throw std::invalid_argument("scale_log2 must lie in [4, 40]");
        if (scale_log2 + epsilon0_log2 < 0) throw std::invalid_argument("S * eps0 must be an integer >= 1");
        if (epsilon0_log2 > -2) throw std::invalid_argument("eps0 too large");
        if (thread_count < 1) throw std::invalid_argument("thread_count must be positive");
        if (!potential.error_machinery_ok()) throw std::invalid_argument("potential needs every k >= 2");
    }
};

// ---------------------------------------------------------------------------
// Steps 1-4: exact integer tests

inline bool is_irrelevant(const DyadicBlock& b) {
    const std::int64_t S = std::int64_t{1} << b.scale_log2();
    const auto& q1 = b.squares[0];
    const auto& q2 = b.squares[1];
    const auto& q3 = b.squares[2];
    return b.q0.hi() <= S || q1.y_lo() >= 0 || q2.y_hi() <= 0 || q2.y_lo() >= q3.y_hi() || 2 * q2.x_hi() <= -S;
}

/// Scaled B0' boxes: integer bounds [lo, hi] per coordinate.
struct NearTbpBox {
    std::int64_t q0_lo, q0_hi;
    std::array<std::int64_t, 2> x1, y1, x2, y2, x3, y3;

    /// S*a* = floor(S*sqrt(3)/2) (or that plus one), brackets shrunk by 1/S so the box lies in B0.
    static NearTbpBox make(int scale_log2, int epsilon0_log2, bool use_floor_plus_one = false) {
        const std::int64_t S = std::int64_t{1} << scale_log2;
        const std::int64_t E = std::int64_t{1} << (scale_log2 + epsilon0_log2);
        const std::int64_t A = scaled_half_sqrt3(scale_log2) + (use_floor_plus_one ? 1 : 0);
        NearTbpBox b;
        b.q0_lo = S - E;
        b.q0_hi = S + E;
        b.x1 = {-S / 2 - E, -S / 2 + E};
        b.y1 = {-A + 1 - E, -A - 1 + E};
        b.x2 = {-E, E};
        b.y2 = {-E, E};
        b.x3 = b.x1;
        b.y3 = {A + 1 - E, A - 1 + E};
        return b;
    }

    static std::int64_t scaled_half_sqrt3(int scale_log2) {
        mpz_class v(3);
        mpz_mul_2exp(v.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(2 * scale_log2 - 2));
        mpz_class r;
        mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
        return r.get_si();
    }

    bool contains(const DyadicBlock& b) const {
        auto in = [](std::int64_t lo, std::int64_t hi, const std::array<std::int64_t, 2>& box) {
            return lo >= box[0] && hi <= box[1];
        };
        const auto& q1 = b.squares[0];
        const auto& q2 = b.squares[1];
        const auto& q3 = b.squares[2];
        return b.q0.lo() >= q0_lo && b.q0.hi() <= q0_hi && in(q1.x_lo(), q1.x_hi(), x1) && in(q1.y_lo(), q1.y_hi(), y1) &&
               in(q2.x_lo(), q2.x_hi(), x2) && in(q2.y_lo(), q2.y_hi(), y2) && in(q3.x_lo(), q3.x_hi(), x3) &&
               in(q3.y_lo(), q3.y_hi(), y3);
    }
};

inline bool contained_in_B0(const DyadicBlock& b, const SearchParams& params) {
    return NearTbpBox::make(params.scale_log2, params.epsilon0_log2).contains(b);
}

/// The five grading steps, in order.
class Grader {
public:
    explicit Grader(const SearchParams& params)
        : potential_(params.potential),
          tbp_(params.potential.tbp_energy()),
          box_(NearTbpBox::make(params.scale_log2, params.epsilon0_log2)) {}

    GradeOutcome grade(const DyadicBlock& b) const {
        if (is_irrelevant(b)) return {Verdict::pass_irrelevant};
        for (int i = 0; i < 3; ++i)
            if (b.squares[static_cast<std::size_t>(i)].depth < 1) return {Verdict::fail_subdivide, i + 1};
        for (const auto& q : b.squares)
            if (!q.is_good()) return {Verdict::pass_out_of_domain};
        if (box_.contains(b)) return {Verdict::pass_in_B0};
        const auto e = eliminate_block<MachineInterval>(b, potential_, tbp_);
        if (e.eliminated) return {Verdict::pass_eliminated};
        return {Verdict::fail_subdivide_by_energy, e.recommendation};
    }

private:
    Potential potential_;
    Rational tbp_;
    NearTbpBox box_;
};

inline GradeOutcome grade(const DyadicBlock& b, const SearchParams& params) { return Grader(params).grade(b); }

/// Children of b along axis (0 = segment, 1..3 = squares).
inline std::vector<DyadicBlock> subdivide_block(const DyadicBlock& b, int axis) {
    std::vector<DyadicBlock> out;
    if (axis == 0) {
        for (const auto& s : subdivide(b.q0)) {
            out.push_back(b);
            out.back().q0 = s;
        }
    } else {
        for (const auto& q : subdivide(b.squares[static_cast<std::size_t>(axis - 1)])) {
            out.push_back(b);
            out.back().squares[static_cast<std::size_t>(axis - 1)] = q;
        }
    }
    return out;
}

inline int block_depth(const DyadicBlock& b) {
    int d = b.q0.depth;
    for (const auto& q : b.squares) d = std::max(d, int(q.depth));
    return d;
}

// ---------------------------------------------------------------------------
// Driver

enum class SearchStatus { success, scale_exhausted, aborted, budget_exhausted };

inline const char* status_name(SearchStatus s) {
    switch (s) {
        case SearchStatus::success: return "success";
        case SearchStatus::scale_exhausted: return "scale_exhausted";
        case SearchStatus::aborted: return "aborted";
        case SearchStatus::budget_exhausted: return "budget_exhausted";
    }
    return "?";
}

struct SearchReport {
    SearchStatus status = SearchStatus::success;
    std::uint64_t partition_size = 0;
    std::array<std::uint64_t, kVerdictCount> counts{};
    int max_depth = -2;
    double elapsed_seconds = 0;
    std::uint64_t blocks_graded = 0;
    std::string message;
};

/// Called for every graded block. Must be thread-safe when thread_count > 1.
using GradeObserver = std::function<void(const DyadicBlock&, const GradeOutcome&)>;

namespace detail {

struct Tally {
    std::array<std::uint64_t, kVerdictCount> counts{};
    int max_depth = -2;
    std::uint64_t graded = 0;

    void add(const DyadicBlock& b, const GradeOutcome& g) {
        ++counts[static_cast<std::size_t>(g.verdict)];
        max_depth = std::max(max_depth, block_depth(b));
        ++graded;
    }
    void merge(const Tally& o) {
        for (int i = 0; i < kVerdictCount; ++i) counts[static_cast<std::size_t>(i)] += o.counts[static_cast<std::size_t>(i)];
        max_depth = std::max(max_depth, o.max_depth);
        graded += o.graded;
    }
};

inline void write_checkpoint(const std::string& path, const std::vector<DyadicBlock>& stack, const Tally& t) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write checkpoint " + tmp);
        out << "# tbp checkpoint 1\n";
        out << "counts";
        for (auto c : t.counts) out << ' ' << c;
        out << "\nmax_depth " << t.max_depth << "\ngraded " << t.graded << "\nfrontier " << stack.size() << "\n";
        for (const auto& b : stack) out << block_code(b) << '\n';
        if (!out) throw std::runtime_error("error writing checkpoint " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

inline void read_checkpoint(const std::string& path, int scale_log2, std::vector<DyadicBlock>& stack, Tally& t) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read checkpoint " + path);
    std::string line, word;
    std::getline(in, line);
    if (line != "# tbp checkpoint 1") throw std::runtime_error("bad checkpoint header in " + path);
    std::size_t n = 0;
    in >> word;
    for (auto& c : t.counts) in >> c;
    in >> word >> t.max_depth >> word >> t.graded >> word >> n;
    std::getline(in, line);
    stack.clear();
    stack.reserve(n);
    while (std::getline(in, line))
        if (!line.empty()) stack.push_back(parse_block_code(line, scale_log2));
    if (stack.size() != n) throw std::runtime_error("truncated checkpoint " + path);
}

}  // namespace detail

class Search {
public:
    explicit Search(SearchParams params) : params_(std::move(params)), grader_(params_) { params_.validate(); }

    void set_observer(GradeObserver obs) { observer_ = std::move(obs); }

    SearchReport run() {
        const auto t0 = std::chrono::steady_clock::now();
        SearchReport rep;
        std::vector<DyadicBlock> stack;
        detail::Tally tally;
        if (params_.resume) {
            if (!params_.checkpoint_path) throw std::invalid_argument("resume requires a checkpoint path");
            detail::read_checkpoint(*params_.checkpoint_path, params_.scale_log2, stack, tally);
        } else if (params_.subregion) {
            stack.push_back(parse_block_code(*params_.subregion, params_.scale_log2));
        } else {
            stack.push_back(DyadicBlock::root(params_.scale_log2));
        }
        try {
            if (params_.thread_count <= 1)
                run_sequential(stack, tally, rep);
            else
                run_parallel(stack, tally, rep);
        } catch (const ScaleExhausted& e) {
            rep.status = SearchStatus::scale_exhausted;
            rep.message = e.what();
        } catch (const RigorAbort& e) {
            rep.status = SearchStatus::aborted;
            rep.message = e.what();
        }
        rep.counts = tally.counts;
        rep.max_depth = tally.max_depth;
        rep.blocks_graded = tally.graded;
        rep.partition_size = 0;
        for (int i = 0; i < kVerdictCount; ++i)
            if (is_pass(static_cast<Verdict>(i))) rep.partition_size += tally.counts[static_cast<std::size_t>(i)];
        rep.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return rep;
    }

private:
    // Grades one block; on failure appends its children (first child on top).
    void step(const DyadicBlock& b, std::vector<DyadicBlock>& stack, detail::Tally& tally) const {
        const auto g = grader_.grade(b);
        if (!is_pass(g.verdict)) {
            auto kids = subdivide_block(b, g.axis);
            stack.insert(stack.end(), kids.rbegin(), kids.rend());
        }
        tally.add(b, g);
        if (observer_) observer_(b, g);
    }

    bool over_budget(const detail::Tally& t) const { return params_.max_blocks && t.graded >= params_.max_blocks; }

    void run_sequential(std::vector<DyadicBlock>& stack, detail::Tally& tally, SearchReport& rep) const {
        std::uint64_t since = 0;
        while (!stack.empty()) {
            if (over_budget(tally)) {
                rep.status = SearchStatus::budget_exhausted;
                break;
            }
            const DyadicBlock b = stack.back();
            stack.pop_back();
            step(b, stack, tally);
            if (params_.checkpoint_path && ++since >= params_.checkpoint_every) {
                detail::write_checkpoint(*params_.checkpoint_path, stack, tally);
                since = 0;
            }
        }
        if (params_.checkpoint_path) detail::write_checkpoint(*params_.checkpoint_path, stack, tally);
    }

    // Workers pull subtree roots from a shared pool and donate the bottom half of
    // their stack when others are idle. Verdicts do not depend on the order.
    void run_parallel(std::vector<DyadicBlock>& seed, detail::Tally& tally, SearchReport& rep) const {
        std::mutex mu;
        std::condition_variable cv;
        std::deque<DyadicBlock> pool(seed.begin(), seed.end());
        seed.clear();
        int idle = 0;
        const int n = params_.thread_count;
        bool stop = false, budget_hit = false;
        std::atomic<std::uint64_t> graded{tally.graded};
        std::exception_ptr failure;
        std::vector<detail::Tally> tallies(static_cast<std::size_t>(n));

        auto worker = [&](int id) {
            std::vector<DyadicBlock> stack;
            auto& mine = tallies[static_cast<std::size_t>(id)];
            try {
                for (;;) {
                    {
                        std::unique_lock lk(mu);
                        ++idle;
                        cv.notify_all();
                        cv.wait(lk, [&] { return stop || !pool.empty() || idle == n; });
                        if (stop || pool.empty()) {
                            stop = true;
                            cv.notify_all();
                            return;
                        }
                        --idle;
                        stack.push_back(pool.front());
                        pool.pop_front();
                    }
                    std::uint64_t local = 0;
                    while (!stack.empty()) {
                        const DyadicBlock b = stack.back();
                        stack.pop_back();
                        step(b, stack, mine);
                        ++graded;
                        if ((++local & 255) == 0) {
                            std::lock_guard lk(mu);
                            if (stop) return;
                            if (params_.max_blocks && graded >= params_.max_blocks) {
                                stop = budget_hit = true;
                                cv.notify_all();
                                return;
                            }
                            if (idle > 0 && pool.empty() && stack.size() > 1) {
                                const std::size_t half = stack.size() / 2;
                                pool.insert(pool.end(), stack.begin(), stack.begin() + static_cast<std::ptrdiff_t>(half));
                                stack.erase(stack.begin(), stack.begin() + static_cast<std::ptrdiff_t>(half));
                                cv.notify_all();
                            }
                        }
                    }
                }
            } catch (...) {
                std::lock_guard lk(mu);
                if (!failure) failure = std::current_exception();
                stop = true;
                cv.notify_all();
            }
        };
        std::vector<std::thread> threads;
        for (int i = 0; i < n; ++i) threads.emplace_back(worker, i);
        for (auto& t : threads) t.join();
        for (const auto& t : tallies) tally.merge(t);
        if (failure) std::rethrow_exception(failure);
        if (budget_hit) rep.status = SearchStatus::budget_exhausted;
    }

    SearchParams params_;
    Grader grader_;
    GradeObserver observer_;
};

inline SearchReport search(const SearchParams& params) { return Search(params).run(); }

}  // namespace tbp
