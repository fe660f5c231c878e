#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <map>
#include <mutex>

#include "tbp/search.hpp"

using namespace tbp;

namespace {

constexpr int kScale = 25;
constexpr std::int64_t S = std::int64_t{1} << kScale;

// Depth-d dyadic cell whose closed range contains x (cells start at root_lo).
std::int64_t cell_center(double x, int d, double root_lo) {
    const double side = std::ldexp(1.0, -d);
    const double lo = root_lo + std::floor((x - root_lo) / side) * side;
    return std::llround(std::ldexp(lo + side / 2, kScale));
}

DyadicSquare square_at(double x, double y, int d) {
    return {cell_center(x, d, -2), cell_center(y, d, -2), static_cast<std::int8_t>(d), kScale};
}

DyadicBlock block_at(double p0, std::array<std::array<double, 2>, 3> p, int d) {
    DyadicBlock b;
    b.q0 = {cell_center(p0, d, 0), static_cast<std::int8_t>(d), kScale};
    for (int i = 0; i < 3; ++i) b.squares[static_cast<std::size_t>(i)] = square_at(p[static_cast<std::size_t>(i)][0], p[static_cast<std::size_t>(i)][1], d);
    return b;
}

const double kA = std::sqrt(3.0) / 2;

// A relevant block next to the TBP; its subtree has about a thousand blocks.
const char* kSmallRegion = "5 34078720 | 5 -15204352 -28835840 | 5 524288 524288 | 5 -16252928 28835840";

// A block of side eps0/2 at the rational TBP: corners at 1, (-1/2, -a*), (0,0), (-1/2, a*).
DyadicBlock b0_block() {
    const std::int64_t A = NearTbpBox::scaled_half_sqrt3(kScale);
    const std::int64_t h = std::int64_t{1} << (kScale - 16 - 1);
    DyadicBlock b;
    b.q0 = {S + h, 16, kScale};
    auto sq = [&](std::int64_t x, std::int64_t y) {
        // the cell of depth 16 whose closed range holds (x, y)
        const std::int64_t side = 2 * h;
        auto c = [&](std::int64_t v) { return v - (((v % side) + side) % side) + h; };
        return DyadicSquare{c(x), c(y), 16, kScale};
    };
    b.squares = {sq(-S / 2, -A), sq(0, 0), sq(-S / 2, A)};
    return b;
}

Rational volume(const DyadicBlock& b) {
    Rational v = b.q0.side();
    for (const auto& q : b.squares) v *= q.side() * q.side();
    return v;
}

std::multimap<std::string, int> record(SearchParams p) {
    std::multimap<std::string, int> out;
    std::mutex mu;
    Search s(std::move(p));
    s.set_observer([&](const DyadicBlock& b, const GradeOutcome& g) {
        std::lock_guard lk(mu);
        out.emplace(block_code(b), static_cast<int>(g.verdict));
    });
    EXPECT_EQ(s.run().status, SearchStatus::success);
    return out;
}

}  // namespace

TEST(Relevance, SegmentBelowOne) {
    DyadicBlock b = block_at(1.5, {{{-0.5, -kA}, {0.1, 0.1}, {-0.5, kA}}}, 2);
    b.q0 = {S / 2, 0, kScale};  // [0,1]
    EXPECT_TRUE(is_irrelevant(b));
}

TEST(Relevance, PolarTbpIsRelevant) {
    for (int d : {2, 5, 10}) EXPECT_FALSE(is_irrelevant(block_at(1.0, {{{-0.5, -kA}, {0, 0}, {-0.5, kA}}}, d)));
}

TEST(Relevance, EquatorialTbpIsIrrelevant) {
    // p0 and one pole at (+-1, 0); the two remaining equator points at (0, +-1/sqrt3)
    const double u = 1 / std::sqrt(3.0);
    for (int d : {4, 8}) {
        EXPECT_TRUE(is_irrelevant(block_at(1.0, {{{0, -u}, {-1, 0}, {0, u}}}, d)));  // p21 < -1/2
        EXPECT_TRUE(is_irrelevant(block_at(1.0, {{{-1, 0}, {0, u}, {0, -u}}}, d)));  // p22 > p32
    }
}

TEST(NearTbp, CubeAtTbpIsInside) {
    const auto b = b0_block();
    SearchParams p;
    EXPECT_TRUE(contained_in_B0(b, p));
    EXPECT_TRUE(NearTbpBox::make(kScale, -15, true).contains(b));
    EXPECT_EQ(NearTbpBox::scaled_half_sqrt3(kScale), static_cast<std::int64_t>(std::floor(std::ldexp(kA, kScale))));
}

TEST(NearTbp, SegmentOutsideFails) {
    DyadicBlock b = b0_block();
    b.q0.scaled_center += std::int64_t{1} << (kScale - 14);  // beyond 1 + eps0
    EXPECT_FALSE(contained_in_B0(b, SearchParams{}));
    DyadicBlock c = b0_block();
    c.squares[1].scaled_center_x += std::int64_t{1} << (kScale - 14);
    EXPECT_FALSE(contained_in_B0(c, SearchParams{}));
}

TEST(NearTbp, BracketsValidForBothChoices) {
    // [A+1-E, A-1+E] lies in [S sqrt3/2 - E, S sqrt3/2 + E] iff (A-1)^2 <= 3S^2/4 <= (A+1)^2
    const std::int64_t E = std::int64_t{1} << (kScale - 15);
    const BigInt three_s2 = BigInt(3) * BigInt(S) * BigInt(S);
    for (bool plus_one : {false, true}) {
        const auto box = NearTbpBox::make(kScale, -15, plus_one);
        const BigInt lo = BigInt(box.y3[0] + E), hi = BigInt(box.y3[1] - E);
        EXPECT_GE(4 * lo * lo, three_s2);
        EXPECT_LE(4 * hi * hi, three_s2);
        EXPECT_EQ(box.y1[0], -box.y3[1]);
        EXPECT_EQ(box.y1[1], -box.y3[0]);
    }
}

TEST(Grade, RootFailsOnFirstSquare) {
    const auto g = grade(DyadicBlock::root(kScale), SearchParams{});
    EXPECT_EQ(g.verdict, Verdict::fail_subdivide);
    EXPECT_EQ(g.axis, 1);
}

TEST(Grade, InsideB0BeforeEnergy) {
    EXPECT_EQ(grade(b0_block(), SearchParams{}).verdict, Verdict::pass_in_B0);
}

TEST(Grade, OutOfDomain) {
    // Q3 is a good-size square above y = 3/2
    DyadicBlock b = block_at(1.2, {{{-0.5, -kA}, {0.1, 0.1}, {-0.5, 1.7}}}, 2);
    ASSERT_FALSE(is_irrelevant(b));
    EXPECT_EQ(grade(b, SearchParams{}).verdict, Verdict::pass_out_of_domain);
}

TEST(Grade, CollidingPointsEliminated) {
    // p1 and p2 nearly coincide, so the energy is far above the TBP value
    const DyadicBlock b = block_at(1.1, {{{0.01, -0.01}, {0.01, 0.01}, {-0.5, kA}}}, 5);
    ASSERT_FALSE(is_irrelevant(b));
    EXPECT_EQ(grade(b, SearchParams{}).verdict, Verdict::pass_eliminated);
}

TEST(Search, SubregionInsideB0) {
    SearchParams p;
    p.subregion = block_code(b0_block());
    const auto r = search(p);
    EXPECT_EQ(r.status, SearchStatus::success);
    EXPECT_EQ(r.partition_size, 1u);
    EXPECT_EQ(r.counts[static_cast<std::size_t>(Verdict::pass_in_B0)], 1u);
}

TEST(Search, PartitionIsSumOfPasses) {
    SearchParams p;
    p.subregion = kSmallRegion;
    const auto r = search(p);
    ASSERT_EQ(r.status, SearchStatus::success);
    std::uint64_t passes = 0, all = 0;
    for (int i = 0; i < kVerdictCount; ++i) {
        all += r.counts[static_cast<std::size_t>(i)];
        if (is_pass(static_cast<Verdict>(i))) passes += r.counts[static_cast<std::size_t>(i)];
    }
    EXPECT_EQ(r.partition_size, passes);
    EXPECT_EQ(r.blocks_graded, all);
    EXPECT_GT(r.partition_size, 500u);
}

TEST(Search, ThreadDeterminism) {
    SearchParams p;
    p.subregion = kSmallRegion;
    const auto seq = record(p);
    const auto again = record(p);
    EXPECT_EQ(seq, again);
    p.thread_count = 4;
    EXPECT_EQ(record(p), seq);
}

TEST(Search, VolumeConservation) {
    SearchParams p;
    p.subregion = kSmallRegion;
    Rational passed(0);
    Search s(p);
    s.set_observer([&](const DyadicBlock& b, const GradeOutcome& g) {
        if (is_pass(g.verdict)) passed += volume(b);
    });
    ASSERT_EQ(s.run().status, SearchStatus::success);
    EXPECT_EQ(passed, volume(parse_block_code(kSmallRegion, kScale)));
}

TEST(Search, CheckpointTilesClaimedRegion) {
    const auto path = (std::filesystem::temp_directory_path() / "tbp_test_tiles.ckpt").string();
    SearchParams p;
    p.subregion = kSmallRegion;
    p.checkpoint_path = path;
    p.max_blocks = 300;
    Rational passed(0);
    Search s(p);
    s.set_observer([&](const DyadicBlock& b, const GradeOutcome& g) {
        if (is_pass(g.verdict)) passed += volume(b);
    });
    ASSERT_EQ(s.run().status, SearchStatus::budget_exhausted);
    std::vector<DyadicBlock> frontier;
    detail::Tally t;
    detail::read_checkpoint(path, kScale, frontier, t);
    Rational pending(0);
    for (const auto& b : frontier) pending += volume(b);
    EXPECT_EQ(passed + pending, volume(parse_block_code(kSmallRegion, kScale)));
    EXPECT_EQ(t.graded, 300u);
    std::filesystem::remove(path);
}

TEST(Search, ResumeMatchesUninterrupted) {
    const auto path = (std::filesystem::temp_directory_path() / "tbp_test_resume.ckpt").string();
    SearchParams p;
    p.subregion = kSmallRegion;
    const auto full = search(p);
    p.checkpoint_path = path;
    p.checkpoint_every = 100;
    p.max_blocks = 450;
    EXPECT_EQ(search(p).status, SearchStatus::budget_exhausted);
    p.max_blocks = 0;
    p.resume = true;
    const auto resumed = search(p);
    EXPECT_EQ(resumed.status, SearchStatus::success);
    EXPECT_EQ(resumed.counts, full.counts);
    EXPECT_EQ(resumed.partition_size, full.partition_size);
    EXPECT_EQ(resumed.max_depth, full.max_depth);
    std::filesystem::remove(path);
}

TEST(Search, EliminationsReplay) {
    SearchParams p;
    p.subregion = kSmallRegion;
    std::vector<std::string> codes;
    Search s(p);
    s.set_observer([&](const DyadicBlock& b, const GradeOutcome& g) {
        if (g.verdict == Verdict::pass_eliminated) codes.push_back(block_code(b));
    });
    s.run();
    ASSERT_FALSE(codes.empty());
    for (const auto& c : codes) EXPECT_EQ(grade(parse_block_code(c, kScale), p).verdict, Verdict::pass_eliminated);
}

TEST(Search, ParamsValidated) {
    SearchParams p;
    p.epsilon0_log2 = -30;
    EXPECT_THROW(search(p), std::invalid_argument);
    SearchParams q;
    q.potential = Potential::g(1);
    EXPECT_THROW(search(q), std::invalid_argument);
    EXPECT_EQ(SearchParams::defaults_for(Potential::g10_sharp()).scale_log2, 30);
    EXPECT_EQ(SearchParams::defaults_for(Potential::g10_sharp()).epsilon0_log2, -18);
}

TEST(Search, G7RunsOutOfScale) {
    // TBP does not minimize G7, so blocks near the true minimizer never clear
    SearchParams p;
    p.potential = Potential::g(7);
    p.scale_log2 = 6;
    p.epsilon0_log2 = -4;
    const auto r = search(p);
    EXPECT_EQ(r.status, SearchStatus::scale_exhausted);
}
