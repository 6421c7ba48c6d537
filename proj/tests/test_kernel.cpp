#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "kabc/kernel.hpp"
#include "kabc/rng.hpp"

#if KABC_HAVE_EIGEN
#include <Eigen/Dense>
#endif

using kabc::evaluate;
using kabc::KernelFamily;
using kabc::KernelSpec;

namespace {

std::vector<double> random_point(kabc::rng::Xoshiro256ss& stream, std::size_t d) {
    std::vector<double> x(d);
    for (double& coord : x) coord = -3.0 + 6.0 * stream.uniform01();
    return x;
}

const KernelSpec kGauss1d{KernelFamily::gaussian_rbf, 1.0, 1};

}  // namespace

TEST_CASE("gaussian rbf point values") {
    std::vector<double> zero{0.0};
    std::vector<double> one{1.0};
    CHECK(evaluate(kGauss1d, zero, zero) == 1.0);
    CHECK(evaluate(kGauss1d, zero, one) ==
          doctest::Approx(0.36787944117144233).epsilon(1e-12));
}

TEST_CASE("laplacian point values") {
    KernelSpec kernel{KernelFamily::laplacian, 2.0, 2};
    std::vector<double> x{0.0, 0.0};
    std::vector<double> y{3.0, 4.0};  // distance 5, exponent -2.5
    CHECK(evaluate(kernel, x, y) == doctest::Approx(0.0820849986238988).epsilon(1e-12));
    CHECK(evaluate(kernel, x, x) == 1.0);
}

TEST_CASE("kernel bounds are (1, 1) and range <= 2 sup") {
    for (KernelFamily family : {KernelFamily::gaussian_rbf, KernelFamily::laplacian}) {
        KernelSpec kernel{family, 0.5, 3};
        kabc::KernelBounds bounds = kabc::kernel_bounds(kernel);
        CHECK(bounds.sup == 1.0);
        CHECK(bounds.range == 1.0);
        CHECK(bounds.range <= 2.0 * bounds.sup);
    }
}

TEST_CASE("symmetry, translation invariance, boundedness on random points") {
    kabc::rng::Xoshiro256ss stream(11);
    for (KernelFamily family : {KernelFamily::gaussian_rbf, KernelFamily::laplacian}) {
        for (std::size_t d : {1u, 2u, 5u}) {
            KernelSpec kernel{family, 0.8, d};
            for (int rep = 0; rep < 200; ++rep) {
                auto x = random_point(stream, d);
                auto y = random_point(stream, d);
                auto t = random_point(stream, d);
                double g_xy = evaluate(kernel, x, y);
                CHECK(g_xy == evaluate(kernel, y, x));
                CHECK(g_xy > 0.0);
                CHECK(g_xy <= 1.0);

                std::vector<double> xs(d), ys(d);
                for (std::size_t k = 0; k < d; ++k) {
                    xs[k] = x[k] + t[k];
                    ys[k] = y[k] + t[k];
                }
                CHECK(evaluate(kernel, xs, ys) == doctest::Approx(g_xy).epsilon(1e-12));
            }
        }
    }
}

#if KABC_HAVE_EIGEN
TEST_CASE("gram matrices of random points are positive semidefinite") {
    kabc::rng::Xoshiro256ss stream(23);
    for (KernelFamily family : {KernelFamily::gaussian_rbf, KernelFamily::laplacian}) {
        KernelSpec kernel{family, 1.3, 2};
        for (int rep = 0; rep < 20; ++rep) {
            std::size_t n = 2 + static_cast<std::size_t>(stream.uniform01() * 15);
            std::vector<std::vector<double>> points;
            for (std::size_t i = 0; i < n; ++i) points.push_back(random_point(stream, 2));
            Eigen::MatrixXd gram(n, n);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    gram(i, j) = evaluate(kernel, points[i], points[j]);
                }
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
            CHECK(solver.eigenvalues().minCoeff() >= -1e-9);
        }
    }
}
#endif

TEST_CASE("kernel validation and evaluate preconditions") {
    CHECK_THROWS_AS((KernelSpec{KernelFamily::gaussian_rbf, 0.0, 1}.validate()),
                    std::invalid_argument);
    CHECK_THROWS_AS((KernelSpec{KernelFamily::gaussian_rbf, -1.0, 1}.validate()),
                    std::invalid_argument);
    CHECK_THROWS_AS((KernelSpec{KernelFamily::gaussian_rbf, 1.0, 0}.validate()),
                    std::invalid_argument);

    std::vector<double> x{0.0};
    std::vector<double> y{0.0, 1.0};
    CHECK_THROWS_AS(evaluate(kGauss1d, x, y), std::invalid_argument);
}

TEST_CASE("family names round-trip") {
    CHECK(kabc::family_name(KernelFamily::gaussian_rbf) == "gaussian-rbf");
    CHECK(kabc::family_name(KernelFamily::laplacian) == "laplacian");
    CHECK(kabc::family_from_name("gaussian-rbf") == KernelFamily::gaussian_rbf);
    CHECK(kabc::family_from_name("laplacian") == KernelFamily::laplacian);
    CHECK_FALSE(kabc::family_from_name("cauchy").has_value());
}
