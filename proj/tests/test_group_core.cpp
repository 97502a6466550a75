#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace endotriv;
using fixtures::make;

TEST(EnumerateGroup, SmallClosures)
{
    EXPECT_EQ(enumerate_group(2, {{1, 0}}).order(), 2u);
    EXPECT_EQ(enumerate_group(3, {{1, 0, 2}, {1, 2, 0}}).order(), 6u);
    auto d8 = enumerate_group(4, {{1, 2, 3, 0}, {0, 3, 2, 1}});
    EXPECT_EQ(d8.order(), 8u);
    EXPECT_FALSE(d8.is_abelian());
}

TEST(EnumerateGroup, IdentityFirstAndClosed)
{
    auto g = builtin::frobenius20();
    EXPECT_EQ(g.element(0), identity_perm(5));
    for (std::size_t k = 0; k < g.generators().size(); ++k)
        EXPECT_TRUE(g.index_of(g.generators()[k]).has_value());
    for (std::size_t a = 0; a < g.order(); ++a) {
        EXPECT_EQ(g.mul(a, g.inv(a)), PermGroup::identity());
        for (std::size_t b = 0; b < g.order(); ++b)
            EXPECT_EQ(g.element(g.mul(a, b)), compose(g.element(a), g.element(b)));
    }
    EXPECT_TRUE(std::is_sorted(g.elements().begin(), g.elements().end()));
}

TEST(EnumerateGroup, OrderCap)
{
    EXPECT_THROW(enumerate_group(7, {{1, 2, 3, 4, 5, 6, 0}, {1, 0, 2, 3, 4, 5, 6}}), BudgetExceeded);
    EXPECT_NO_THROW(enumerate_group(7, {{1, 2, 3, 4, 5, 6, 0}, {1, 0, 2, 3, 4, 5, 6}}, GroupLimits{5040}));
}

TEST(GroupFile, ParsesAndRejects)
{
    std::istringstream ok("# S3\n3\n1 0 2\n\n1 2 0\n");
    EXPECT_EQ(parse_group(ok).order(), 6u);
    std::istringstream bad_perm("3\n0 0 1\n");
    EXPECT_THROW(parse_group(bad_perm), ValidationError);
    std::istringstream bad_len("3\n0 1\n");
    EXPECT_THROW(parse_group(bad_len), ValidationError);
    std::istringstream bad_tok("3\n0 x 1\n");
    EXPECT_THROW(parse_group(bad_tok), ValidationError);
    std::istringstream empty("# nothing\n");
    EXPECT_THROW(parse_group(empty), ValidationError);
    EXPECT_THROW(read_group_file("/nonexistent/file.grp"), ValidationError);
}

TEST(Builtins, Orders)
{
    EXPECT_EQ(builtin::from_spec("cyclic:9").order(), 9u);
    EXPECT_EQ(builtin::from_spec("dihedral:8").order(), 8u);
    EXPECT_EQ(builtin::from_spec("quaternion:8").order(), 8u);
    EXPECT_EQ(builtin::from_spec("elemab:3,2").order(), 9u);
    EXPECT_EQ(builtin::from_spec("klein").order(), 4u);
    EXPECT_EQ(builtin::from_spec("s3").order(), 6u);
    EXPECT_EQ(builtin::from_spec("frobenius:20").order(), 20u);
    EXPECT_THROW(builtin::from_spec("cyclic:x"), ValidationError);
    EXPECT_THROW(builtin::from_spec("mystery"), ValidationError);
}

TEST(Lattice, CyclicFour)
{
    SubgroupLattice lat(builtin::cyclic(4));
    EXPECT_EQ(lat.size(), 3u);
    EXPECT_EQ(lat.class_count(), 3u);
    std::vector<std::size_t> orders;
    for (std::size_t i = 0; i < lat.size(); ++i)
        orders.push_back(lat.subgroup(i).order());
    EXPECT_EQ(orders, (std::vector<std::size_t>{1, 2, 4}));
}

TEST(Lattice, KleinFour)
{
    SubgroupLattice lat(builtin::klein_four());
    EXPECT_EQ(lat.size(), 5u);
    EXPECT_EQ(lat.class_count(), 5u);
}

TEST(Lattice, S3)
{
    SubgroupLattice lat(builtin::symmetric3());
    EXPECT_EQ(lat.size(), 6u);
    ASSERT_EQ(lat.class_count(), 4u);
    std::vector<std::size_t> sizes, orders;
    for (std::size_t c = 0; c < 4; ++c) {
        sizes.push_back(lat.class_members(c).size());
        orders.push_back(lat.subgroup(lat.class_rep(c)).order());
    }
    EXPECT_EQ(sizes, (std::vector<std::size_t>{1, 3, 1, 1}));
    EXPECT_EQ(orders, (std::vector<std::size_t>{1, 2, 3, 6}));
}

TEST(Lattice, SubgroupCap)
{
    EXPECT_THROW(SubgroupLattice(builtin::dihedral(8), LatticeLimits{5}), BudgetExceeded);
}

TEST(PSubposet, Examples)
{
    SubgroupLattice s3(builtin::symmetric3());
    auto p3 = s3.p_subposet(3);
    ASSERT_EQ(p3.size(), 2u);
    EXPECT_EQ(s3.subgroup(s3.class_rep(p3.classes[1])).order(), 3u);
    auto p2 = s3.p_subposet(2);
    ASSERT_EQ(p2.size(), 2u);
    EXPECT_EQ(s3.subgroup(s3.class_rep(p2.classes[1])).order(), 2u);
    SubgroupLattice c4(builtin::cyclic(4));
    EXPECT_EQ(c4.p_subposet(2).size(), 3u);
    EXPECT_THROW(c4.p_subposet(4), ValidationError);
}

TEST(Quotient, Examples)
{
    SubgroupLattice c4(builtin::cyclic(4));
    EXPECT_EQ(quotient(c4, c4.whole(), 1).order(), 2u);

    SubgroupLattice s3(builtin::symmetric3());
    auto c3 = *s3.find_members(s3.subgroup(s3.class_rep(2)).members);
    EXPECT_EQ(quotient(s3, s3.whole(), c3).order(), 2u);
    // a non-normal C2
    EXPECT_THROW(quotient(s3, s3.whole(), s3.class_rep(1)), ValidationError);

    SubgroupLattice q8(builtin::quaternion8());
    std::size_t z = 1; // the unique subgroup of order 2
    ASSERT_EQ(q8.subgroup(z).order(), 2u);
    auto q = quotient(q8, q8.whole(), z);
    EXPECT_EQ(q.order(), 4u);
    EXPECT_EQ(iso_type_small(q), IsoType::elementary_abelian(2, 2));
}

TEST(IsoType, Examples)
{
    EXPECT_EQ(iso_type_small(builtin::cyclic(4)), IsoType::cyclic(4));
    EXPECT_EQ(iso_type_small(builtin::klein_four()), IsoType::elementary_abelian(2, 2));
    EXPECT_EQ(iso_type_small(builtin::quaternion8()), IsoType::quaternion8());
    EXPECT_EQ(iso_type_small(builtin::dihedral(8)).kind, IsoType::Kind::other);
    EXPECT_EQ(iso_type_small(builtin::elementary_abelian(3, 2)), IsoType::elementary_abelian(3, 2));
}

TEST(HomToUnits, Examples)
{
    EXPECT_EQ(hom_to_units_order(builtin::symmetric3(), 3).torsion, int_vector({2}));
    EXPECT_TRUE(hom_to_units_order(builtin::cyclic(4), 2).is_trivial());
    EXPECT_TRUE(hom_to_units_order(builtin::symmetric3(), 2).is_trivial());
    EXPECT_EQ(hom_to_units_order(builtin::frobenius20(), 5).torsion, int_vector({4}));
    EXPECT_EQ(abelianization(builtin::elementary_abelian(3, 2)).torsion, int_vector({3, 3}));
    EXPECT_EQ(abelianization(builtin::quaternion8()).torsion, int_vector({2, 2}));
}

class LatticeProperties : public ::testing::TestWithParam<std::pair<std::string, std::uint64_t>> {};

TEST_P(LatticeProperties, OrbitStabilizer)
{
    auto f = make(GetParam().first, GetParam().second);
    const auto& lat = f.lattice();
    const auto n = lat.group().order();
    for (std::size_t s = 0; s < lat.size(); ++s) {
        EXPECT_EQ(n % lat.subgroup(s).order(), 0u);
        EXPECT_EQ(lat.class_members(lat.class_of(s)).size() * lat.subgroup(lat.normalizer(s)).order(), n);
    }
    EXPECT_EQ(lat.class_members(lat.class_of(lat.trivial())).size(), 1u);
    EXPECT_EQ(lat.class_members(lat.class_of(lat.whole())).size(), 1u);
}

TEST_P(LatticeProperties, SubconjugacyIsAPartialOrder)
{
    auto f = make(GetParam().first, GetParam().second);
    const auto& lat = f.lattice();
    const auto c = lat.class_count();
    for (std::size_t a = 0; a < c; ++a) {
        EXPECT_TRUE(lat.subconjugate(a, a));
        for (std::size_t b = 0; b < c; ++b) {
            if (lat.subconjugate(a, b)) {
                EXPECT_EQ(lat.subgroup(lat.class_rep(b)).order() % lat.subgroup(lat.class_rep(a)).order(), 0u);
                if (lat.subconjugate(b, a))
                    EXPECT_EQ(a, b);
            }
            for (std::size_t d = 0; d < c; ++d)
                if (lat.subconjugate(a, b) && lat.subconjugate(b, d))
                    EXPECT_TRUE(lat.subconjugate(a, d));
        }
    }
}

TEST_P(LatticeProperties, SylowClassIsUnique)
{
    auto f = make(GetParam().first, GetParam().second);
    const auto& lat = f.lattice();
    const auto n = lat.group().order();
    for (std::uint64_t p = 2; p <= n; ++p) {
        if (!is_prime(p) || n % p != 0)
            continue;
        auto poset = lat.p_subposet(p);
        std::vector<std::size_t> maximal;
        for (std::size_t i = 0; i < poset.size(); ++i) {
            bool is_max = true;
            for (std::size_t j = 0; j < poset.size(); ++j)
                if (j != i && poset.leq[i][j])
                    is_max = false;
            if (is_max)
                maximal.push_back(i);
        }
        ASSERT_EQ(maximal.size(), 1u) << "p=" << p;
        std::size_t pp = 1;
        for (std::size_t m = n; m % p == 0; m /= p)
            pp *= p;
        EXPECT_EQ(lat.subgroup(lat.class_rep(poset.classes[maximal[0]])).order(), pp);
    }
}

TEST_P(LatticeProperties, QuotientMultiplicationWellDefined)
{
    auto f = make(GetParam().first, GetParam().second);
    const auto& lat = f.lattice();
    const auto& g = lat.group();
    std::mt19937_64 rng(1234);
    for (std::size_t n = 0; n < lat.size(); ++n) {
        if (!lat.is_normal_in(n, lat.whole()))
            continue;
        auto q = quotient(lat, lat.whole(), n);
        EXPECT_EQ(q.order() * lat.subgroup(n).order(), g.order());
        for (int trial = 0; trial < 100; ++trial) {
            std::uniform_int_distribution<std::size_t> pick(0, q.order() - 1);
            const auto a = pick(rng), b = pick(rng);
            std::uniform_int_distribution<std::size_t> member(0, lat.subgroup(n).order() - 1);
            const auto x = q.cosets()[a][member(rng)];
            const auto y = q.cosets()[b][member(rng)];
            EXPECT_EQ(q.coset_of(g.mul(x, y)), q.coset_mul(a, b));
        }
        // realized group agrees with the coset table
        for (std::size_t a = 0; a < q.order(); ++a)
            for (std::size_t b = 0; b < q.order(); ++b)
                EXPECT_EQ(q.coset_of_element(q.group().mul(q.element_of_coset(a), q.element_of_coset(b))),
                          q.coset_mul(a, b));
    }
}

INSTANTIATE_TEST_SUITE_P(Fixtures, LatticeProperties, ::testing::ValuesIn(fixtures::all_groups()),
                         [](const auto& info) { return info.param.first + "_p" + std::to_string(info.param.second); });
