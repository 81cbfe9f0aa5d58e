#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "ttsl/tensor.hpp"

using namespace ttsl;
using testutil::max_abs_diff;

TEST_CASE("vectorize is the identity relabeling") {
    Vector data(4);
    data << 1, 2, 3, 4;
    DenseTensor t({2, 2}, data);
    CHECK(vectorize(t) == data);

    DenseTensor s({1}, Vector::Constant(1, 7.5));
    CHECK(vectorize(s)(0, 0) == 7.5);
}

TEST_CASE("flat index places entry (1,2) of a 2x3 tensor at position 5") {
    DenseTensor t({2, 3});
    CHECK(t.flat_index({1, 2}) == 5);
    // full bijection
    std::vector<bool> seen(6, false);
    for (Index i = 0; i < 2; ++i)
        for (Index j = 0; j < 3; ++j) {
            const Index f = t.flat_index({i, j});
            CHECK(!seen[static_cast<size_t>(f)]);
            seen[static_cast<size_t>(f)] = true;
        }
}

TEST_CASE("mode_unfold column index runs over remaining modes, earliest fastest") {
    std::mt19937_64 rng(1);
    DenseTensor t = testutil::random_core(2, 3, 4, rng);
    const Matrix m = mode_unfold(t, 3);
    REQUIRE(m.rows() == 4);
    REQUIRE(m.cols() == 6);
    for (Index i1 = 0; i1 < 2; ++i1)
        for (Index i2 = 0; i2 < 3; ++i2)
            for (Index i3 = 0; i3 < 4; ++i3)
                CHECK(m(i3, i1 + 2 * i2) == t({i1, i2, i3}));

    Vector v(5);
    v << 1, 2, 3, 4, 5;
    const Matrix col = mode_unfold(DenseTensor({5}, v), 1);
    CHECK(col.rows() == 5);
    CHECK(col.cols() == 1);
    CHECK(Vector(col.col(0)) == v);

    CHECK_THROWS_AS(mode_unfold(t, 0), DataError);
    CHECK_THROWS_AS(mode_unfold(t, 4), DataError);
}

TEST_CASE("mode unfold/refold round-trips bitwise on random shapes") {
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<Index> dim(1, 4);
    std::uniform_int_distribution<int> order(1, 4);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Index> shape;
        const int n = order(rng);
        for (int i = 0; i < n; ++i) shape.push_back(dim(rng));
        DenseTensor t(shape);
        std::normal_distribution<double> dist;
        for (Index i = 0; i < t.size(); ++i) t.data()[i] = dist(rng);
        for (int mode = 1; mode <= n; ++mode) {
            const DenseTensor back = mode_refold(mode_unfold(t, mode), shape, mode);
            CHECK(back.data() == t.data());
        }
    }
}

TEST_CASE("left_unfold of a (1,2,1) core is the 2x1 column") {
    Vector data(2);
    data << 3, 4;
    const Matrix m = left_unfold(DenseTensor({1, 2, 1}, data));
    REQUIRE(m.rows() == 2);
    REQUIRE(m.cols() == 1);
    CHECK(m(0, 0) == 3);
    CHECK(m(1, 0) == 4);
}

TEST_CASE("left_unfold equals transposed mode-3 unfolding") {
    std::mt19937_64 rng(3);
    const DenseTensor t = testutil::random_core(2, 2, 2, rng);
    CHECK(max_abs_diff(left_unfold(t), mode_unfold(t, 3).transpose()) == 0.0);
    CHECK(left_unfold(left_refold(left_unfold(t), 2, 2, 2)) == left_unfold(t));
}

TEST_CASE("right_unfold layout and entry multiset") {
    Vector data(2);
    data << 5, 6;
    const Matrix r = right_unfold(DenseTensor({1, 2, 1}, data));
    REQUIRE(r.rows() == 1);
    REQUIRE(r.cols() == 2);
    CHECK(r(0, 0) == 5);
    CHECK(r(0, 1) == 6);

    std::mt19937_64 rng(4);
    const DenseTensor t = testutil::random_core(2, 1, 2, rng);
    CHECK(max_abs_diff(right_unfold(t), mode_unfold(t, 1)) == 0.0);

    const DenseTensor u = testutil::random_core(2, 3, 2, rng);
    Vector le = Vector(Eigen::Map<const Vector>(left_unfold(u).data(), u.size()));
    Vector re = Vector(Eigen::Map<const Vector>(right_unfold(u).data(), u.size()));
    std::sort(le.begin(), le.end());
    std::sort(re.begin(), re.end());
    CHECK(le == re);
}

TEST_CASE("left_refold validates dimensions") {
    CHECK_THROWS_AS(left_refold(Matrix::Zero(5, 2), 2, 2, 2), DataError);
}

TEST_CASE("connect product of two rank-1 cores is the Kronecker expansion") {
    Vector u_data(2), v_data(2);
    u_data << 2, 3;   // [a, b]
    v_data << 5, 7;   // [c, d]
    const DenseTensor w =
        connect_product(DenseTensor({1, 2, 1}, u_data), DenseTensor({1, 2, 1}, v_data));
    REQUIRE(w.shape() == std::vector<Index>{1, 4, 1});
    Vector expect(4);
    expect << 2 * 5, 3 * 5, 2 * 7, 3 * 7;  // [ac, bc, ad, bd]
    CHECK(w.data() == expect);
}

TEST_CASE("connect product against an identity left factor") {
    Vector id(4);
    id << 1, 0, 0, 1;  // left unfolding = I_2, shape (1,2,2)
    const DenseTensor u({1, 2, 2}, id);
    std::mt19937_64 rng(5);
    const DenseTensor v = testutil::random_core(2, 1, 1, rng);
    const DenseTensor w = connect_product(u, v);
    const Matrix lw = left_unfold(w);
    // L(w) = (I_1 kron I_2) L(v) = L(v)
    CHECK(max_abs_diff(lw, left_unfold(v)) == 0.0);
}

TEST_CASE("connect product rank mismatch throws") {
    std::mt19937_64 rng(6);
    CHECK_THROWS_AS(
        connect_product(testutil::random_core(1, 2, 2, rng), testutil::random_core(3, 2, 1, rng)),
        DataError);
}

TEST_CASE("connect product is associative to 1e-12") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<Index> dim(1, 4), rank(1, 3);
    for (int trial = 0; trial < 30; ++trial) {
        const Index r1 = rank(rng), r2 = rank(rng);
        const DenseTensor u = testutil::random_core(1, dim(rng), r1, rng);
        const DenseTensor v = testutil::random_core(r1, dim(rng), r2, rng);
        const DenseTensor w = testutil::random_core(r2, dim(rng), rank(rng), rng);
        const DenseTensor lhs = connect_product(connect_product(u, v), w);
        const DenseTensor rhs = connect_product(u, connect_product(v, w));
        const double scale = std::max(1.0, lhs.data().norm());
        CHECK((lhs.data() - rhs.data()).norm() / scale <= 1e-12);
    }
}

TEST_CASE("Kronecker identity: L(uv) = (I kron L(u)) L(v) exactly") {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<Index> dim(1, 4), rank(1, 3);
    for (int trial = 0; trial < 30; ++trial) {
        const Index r1 = rank(rng), iv = dim(rng);
        const DenseTensor u = testutil::random_core(1, dim(rng), r1, rng);
        const DenseTensor v = testutil::random_core(r1, iv, rank(rng), rng);
        const Matrix lu = left_unfold(u);
        Matrix kron = Matrix::Zero(iv * lu.rows(), iv * lu.cols());
        for (Index b = 0; b < iv; ++b)
            kron.block(b * lu.rows(), b * lu.cols(), lu.rows(), lu.cols()) = lu;
        CHECK(max_abs_diff(left_unfold(connect_product(u, v)), kron * left_unfold(v)) == 0.0);
    }
}

TEST_CASE("rank-1 chain reproduces the brute-force outer product vector") {
    std::mt19937_64 rng(9);
    const std::vector<Index> dims{2, 3, 2};
    std::vector<DenseTensor> cores;
    std::vector<Vector> factors;
    for (Index d : dims) {
        const DenseTensor c = testutil::random_core(1, d, 1, rng);
        cores.push_back(c);
        factors.push_back(c.data());
    }
    const Matrix u = left_unfold(connect_product(cores));
    // brute force: entry (i1,i2,i3) = f1(i1) f2(i2) f3(i3), first index fastest
    Index flat = 0;
    for (Index i3 = 0; i3 < dims[2]; ++i3)
        for (Index i2 = 0; i2 < dims[1]; ++i2)
            for (Index i1 = 0; i1 < dims[0]; ++i1, ++flat)
                CHECK(u(flat, 0) ==
                      doctest::Approx(factors[0][i1] * factors[1][i2] * factors[2][i3])
                          .epsilon(1e-14));
}

TEST_CASE("fold_leading_modes examples") {
    Vector col(4);
    col << 1, 2, 3, 4;  // [a,b,c,d]

    SUBCASE("k = n is the identity") {
        const Matrix m = fold_leading_modes(col, {2, 2}, 1, 2);
        CHECK(m.rows() == 4);
        CHECK(m.cols() == 1);
        CHECK(Vector(m.col(0)) == col);
    }
    SUBCASE("dims [2,2], r=1, k=1 gives [[a,c],[b,d]]") {
        const Matrix m = fold_leading_modes(col, {2, 2}, 1, 1);
        REQUIRE(m.rows() == 2);
        REQUIRE(m.cols() == 2);
        CHECK(m(0, 0) == 1);
        CHECK(m(1, 0) == 2);
        CHECK(m(0, 1) == 3);
        CHECK(m(1, 1) == 4);
    }
    SUBCASE("row count mismatch throws") {
        CHECK_THROWS_AS(fold_leading_modes(col, {3, 2}, 1, 1), DataError);
    }
}
