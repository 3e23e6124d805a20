#include <gtest/gtest.h>

#include <sstream>

#include "dyadic/errors.hpp"
#include "dyadic/haar.hpp"
#include "dyadic/io.hpp"
#include "helpers.hpp"

using namespace dyadic;
using dyadic::testing::cube_indicator;
using dyadic::testing::max_abs_diff;
using dyadic::testing::random_function;

namespace {

DyadicCube cube1(int g, std::uint32_t m) { return DyadicCube{g, {m}}; }

}  // namespace

TEST(Tree, AncestorExamples) {
    EXPECT_EQ(*ancestor(cube1(2, 1), 1), cube1(1, 0));
    EXPECT_FALSE(ancestor(DyadicCube::root(1), 1).has_value());
    // [0.625, 0.75) is cube 5 of generation 3.
    const DyadicCube Q = cube1(3, 5);
    EXPECT_DOUBLE_EQ(Q.lower(0), 0.625);
    EXPECT_DOUBLE_EQ(Q.upper(0), 0.75);
    EXPECT_EQ(*ancestor(Q, 3), DyadicCube::root(1));
    EXPECT_EQ(*ancestor(Q, 0), Q);
}

TEST(Tree, AncestorMatchesContainmentSearch) {
    const TreeParams p(2, 4);
    for (int g = 0; g <= 4; ++g)
        for (const auto& Q : cubes_of_generation(p, g))
            for (int k = 0; k <= g; ++k) {
                int found = 0;
                for (const auto& R : cubes_of_generation(p, g - k))
                    if (R.lower(0) <= Q.lower(0) && Q.upper(0) <= R.upper(0) && R.lower(1) <= Q.lower(1) &&
                        Q.upper(1) <= R.upper(1)) {
                        ++found;
                        EXPECT_EQ(*ancestor(Q, k), R);
                    }
                EXPECT_EQ(found, 1);
            }
}

TEST(Tree, DescendantsExamples) {
    const TreeParams p1(1, 3), p2(2, 3);
    const auto halves = descendants(p1, DyadicCube::root(1), 1);
    ASSERT_EQ(halves.size(), 2u);
    EXPECT_DOUBLE_EQ(halves[0].upper(0), 0.5);
    EXPECT_DOUBLE_EQ(halves[1].lower(0), 0.5);
    EXPECT_EQ(descendants(p2, DyadicCube::root(2), 1).size(), 4u);
    EXPECT_EQ(descendants(p2, DyadicCube::root(2), 2).size(), 16u);
    EXPECT_THROW(descendants(p1, cube1(2, 0), 2), DepthExceeded);
}

TEST(Tree, DescendantsPartitionParent) {
    const TreeParams p(2, 5);
    for (int g = 0; g <= 3; ++g)
        for (const auto& Q : cubes_of_generation(p, g)) {
            const auto kids = descendants(p, Q, 2);
            double vol = 0.0;
            for (const auto& c : kids) {
                EXPECT_TRUE(Q.contains(c));
                vol += c.volume();
            }
            EXPECT_NEAR(vol, Q.volume(), 1e-15);
        }
}

TEST(Tree, MortonRoundTrip) {
    for (int n : {1, 2, 3})
        for (int g = 0; g <= 3; ++g) {
            const TreeParams p(n, 3);
            std::vector<bool> seen(p.cubes_at(g), false);
            for (const auto& Q : cubes_of_generation(p, g)) {
                const auto z = morton_code(Q);
                ASSERT_LT(z, seen.size());
                EXPECT_FALSE(seen[z]);
                seen[z] = true;
                EXPECT_EQ(cube_from_morton(n, g, z), Q);
            }
        }
}

TEST(Tree, ValidateCube) {
    const TreeParams p(1, 3);
    EXPECT_NO_THROW(validate_cube(p, cube1(3, 7)));
    EXPECT_THROW(validate_cube(p, cube1(4, 0)), DepthExceeded);
    EXPECT_THROW(validate_cube(p, cube1(2, 4)), InvalidArgument);
    EXPECT_THROW(TreeParams(0, 3), InvalidArgument);
}

TEST(Signature, AddExamples) {
    const auto s = [](std::vector<int> v) { return Signature::from_vector(v); };
    EXPECT_EQ(signature_add(s({0, 1}), s({0, 1})), s({1, 1}));
    EXPECT_EQ(signature_add(s({0, 1}), s({1, 1})), s({0, 1}));
    EXPECT_EQ(signature_add(s({0}), s({0})), s({1}));
    for (unsigned e = 0; e < 8; ++e)
        for (unsigned h = 0; h < 8; ++h)
            EXPECT_EQ(signature_add(Signature{e, 3}, Signature{h, 3}) == Signature::ones(3), e == h);
}

TEST(Haar, FunctionExamples) {
    const TreeParams p(1, 2);
    const auto h0 = haar_function(p, DyadicCube::root(1), Signature{0, 1});
    EXPECT_EQ(h0.values(), (Eigen::VectorXd(4) << 1, 1, -1, -1).finished());
    const auto h1 = haar_function(p, DyadicCube::root(1), Signature::ones(1));
    EXPECT_EQ(h1.values(), Eigen::VectorXd::Ones(4));
    const auto hl = haar_function(p, cube1(1, 0), Signature{0, 1});
    const double r2 = std::sqrt(2.0);
    EXPECT_NEAR(max_abs_diff(hl, StepFunction(p, (Eigen::VectorXd(4) << r2, -r2, 0, 0).finished())), 0.0, 1e-15);
    EXPECT_NEAR(hl.l2_norm(), 1.0, 1e-15);
    EXPECT_THROW(haar_function(p, cube1(2, 0), Signature{0, 1}), DepthExceeded);
    EXPECT_NO_THROW(haar_function(p, cube1(2, 0), Signature::ones(1)));
}

TEST(Haar, OrthonormalExhaustive) {
    for (int n : {1, 2}) {
        const TreeParams p(n, n == 1 ? 4 : 3);
        std::vector<StepFunction> basis;
        for (int g = 0; g < p.J(); ++g)
            for (const auto& Q : cubes_of_generation(p, g))
                for (unsigned e = 0; e < p.ones(); ++e) basis.push_back(haar_function(p, Q, Signature{e, n}));
        ASSERT_EQ(basis.size() + 1, p.cells());
        for (std::size_t a = 0; a < basis.size(); ++a) {
            EXPECT_NEAR(basis[a].integral(), 0.0, 1e-14);
            for (std::size_t b = a; b < basis.size(); ++b)
                EXPECT_NEAR(inner_product(basis[a], basis[b]), a == b ? 1.0 : 0.0, 1e-13);
        }
    }
}

TEST(Haar, AnalyzeExamples) {
    const TreeParams p(1, 2);
    const auto c = analyze(StepFunction::constant(p, 3.5));
    EXPECT_DOUBLE_EQ(c.root_average(), 3.5);
    EXPECT_DOUBLE_EQ(c.coeff_sum_squares(), 0.0);

    const StepFunction f(p, (Eigen::VectorXd(4) << 1, 0, 0, 0).finished());
    const auto e = analyze(f);
    EXPECT_NEAR(e.root_average(), 0.25, 1e-15);
    EXPECT_NEAR(e.coeff(DyadicCube::root(1), Signature{0, 1}), 0.25, 1e-15);
    EXPECT_NEAR(e.coeff(cube1(1, 0), Signature{0, 1}), std::sqrt(2.0) / 4, 1e-15);
    EXPECT_NEAR(e.coeff(cube1(1, 1), Signature{0, 1}), 0.0, 1e-15);
    EXPECT_NEAR(max_abs_diff(synthesize(e), f), 0.0, 1e-15);

    const TreeParams q(2, 3);
    const DyadicCube Q{1, {1, 0}};
    const auto single = analyze(haar_function(q, Q, Signature{2, 2}));
    for (const auto& entry : single.entries())
        EXPECT_NEAR(entry.value, entry.cube == Q && entry.signature == (Signature{2, 2}) ? 1.0 : 0.0, 1e-14);
}

TEST(Haar, CoefficientsAreInnerProducts) {
    for (int n : {1, 2}) {
        const TreeParams p(n, 3);
        const auto f = random_function(p, 11 + n);
        const auto e = analyze(f);
        EXPECT_NEAR(e.root_average(), f.integral(), 1e-14);
        for (const auto& entry : e.entries())
            EXPECT_NEAR(entry.value, inner_product(f, haar_function(p, entry.cube, entry.signature)), 1e-13);
    }
}

TEST(Haar, RoundTripAndParseval) {
    for (int n : {1, 2}) {
        const TreeParams p(n, n == 1 ? 8 : 5);
        double worst = 0.0;
        for (std::uint64_t s = 0; s < 100; ++s) {
            const auto f = random_function(p, s);
            const auto e = analyze(f);
            worst = std::max(worst, max_abs_diff(synthesize(e), f));
            const double lhs = f.l2_norm() * f.l2_norm();
            EXPECT_NEAR(lhs, e.root_average() * e.root_average() + e.coeff_sum_squares(), 1e-12 * lhs);
        }
        EXPECT_LE(worst, 1e-12);
        EXPECT_EQ(synthesize(HaarExpansion(p)).values(), Eigen::VectorXd::Zero(p.cells()));
    }
}

TEST(Haar, AverageExamples) {
    const TreeParams p(1, 3);
    EXPECT_DOUBLE_EQ(average(StepFunction::constant(p, -2.0), cube1(2, 3)), -2.0);
    EXPECT_NEAR(average(haar_function(p, DyadicCube::root(1), Signature{0, 1}), cube1(1, 0)), 1.0, 1e-15);
}

TEST(Haar, AverageMatchesIndicatorIntegral) {
    const TreeParams p(2, 4);
    const auto f = random_function(p, 5);
    const auto pyr = average_pyramid(f);
    for (int g = 0; g <= 4; ++g)
        for (const auto& Q : cubes_of_generation(p, g)) {
            const double direct = inner_product(f, cube_indicator(p, Q)) / Q.volume();
            EXPECT_NEAR(average(f, Q), direct, 1e-13);
            EXPECT_NEAR(pyramid_at(p, pyr, Q), direct, 1e-13);
        }
}

TEST(StepFunction, MultiplyExamples) {
    const TreeParams p(2, 3);
    const auto f = random_function(p, 1);
    EXPECT_EQ(multiply(f, StepFunction::constant(p, 1.0)).values(), f.values());
    const auto ind = StepFunction::indicator(p, DyadicCube{1, {0, 0}});
    EXPECT_EQ(multiply(ind, ind).values(), ind.values());
    EXPECT_EQ(ind.values(), cube_indicator(p, DyadicCube{1, {0, 0}}).values());
    EXPECT_THROW(multiply(f, StepFunction(TreeParams(2, 2))), ParamsMismatch);
}

TEST(StepFunction, HaarProductRule) {
    for (int n : {1, 2}) {
        const TreeParams p(n, 4);
        for (int g = 0; g < 4; ++g)
            for (const auto& Q : cubes_of_generation(p, g))
                for (unsigned e = 0; e < p.ones(); ++e)
                    for (unsigned h = 0; h < p.ones(); ++h) {
                        const auto lhs =
                            multiply(haar_function(p, Q, Signature{e, n}), haar_function(p, Q, Signature{h, n}));
                        const auto rhs = (1.0 / std::sqrt(Q.volume())) *
                                         haar_function(p, Q, signature_add(Signature{e, n}, Signature{h, n}));
                        EXPECT_LE(max_abs_diff(lhs, rhs), 1e-12);
                    }
    }
}

TEST(Io, JsonAndCsvRoundTrip) {
    const TreeParams p(2, 3);
    const auto f = random_function(p, 9);
    const auto j = to_json(f);
    EXPECT_EQ(j.at("n"), 2);
    EXPECT_EQ(j.at("J"), 3);
    EXPECT_EQ(step_function_from_json(j).values(), f.values());
    std::stringstream ss;
    write_csv(ss, f);
    EXPECT_EQ(read_csv(ss, p).values(), f.values());
}

TEST(Io, FormatDoubleRoundTrips) {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 12345.678, 1e22})
        EXPECT_EQ(std::stod(format_double(v)), v);
}
