#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "kabc/environment.hpp"

#include "oracles.hpp"

using kabc::ArmSpec;
using kabc::DiscreteArm;
using kabc::Environment;
using kabc::KernelFamily;
using kabc::KernelSpec;
using kabc::OracleValue;
using kabc::TruncatedGaussianArm;

namespace {

const KernelSpec kGauss1d{KernelFamily::gaussian_rbf, 1.0, 1};

ArmSpec point_mass(double x) { return DiscreteArm{{{x}}, {1.0}}; }

ArmSpec uniform01() { return DiscreteArm{{{0.0}, {1.0}}, {0.5, 0.5}}; }

DiscreteArm random_discrete(kabc::rng::Xoshiro256ss& stream, std::size_t d) {
    DiscreteArm arm;
    std::size_t m = 1 + static_cast<std::size_t>(stream.uniform01() * 4);
    double total = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
        std::vector<double> point(d);
        for (double& c : point) c = -2.0 + 4.0 * stream.uniform01();
        arm.support.push_back(std::move(point));
        arm.probabilities.push_back(0.05 + stream.uniform01());
        total += arm.probabilities.back();
    }
    for (double& p : arm.probabilities) p /= total;
    // normalization leaves the sum 1 only up to rounding; patch the largest
    double drift = 1.0;
    for (double p : arm.probabilities) drift -= p;
    arm.probabilities.front() += drift;
    return arm;
}

}  // namespace

TEST_CASE("construction validates arms against the kernel") {
    CHECK_THROWS_AS(Environment({point_mass(0.0)}, kGauss1d), std::invalid_argument);

    CHECK_THROWS_AS(Environment({DiscreteArm{{{0.0}}, {0.9}}, point_mass(1.0)}, kGauss1d),
                    std::invalid_argument);  // probabilities sum to 0.9
    CHECK_THROWS_AS(
        Environment({DiscreteArm{{{0.0}, {1.0}}, {1.5, -0.5}}, point_mass(1.0)}, kGauss1d),
        std::invalid_argument);  // negative probability
    CHECK_THROWS_AS(
        Environment({DiscreteArm{{{0.0}, {0.0}}, {0.5, 0.5}}, point_mass(1.0)}, kGauss1d),
        std::invalid_argument);  // duplicate support points
    CHECK_THROWS_AS(
        Environment({DiscreteArm{{{0.0, 0.0}}, {1.0}}, point_mass(1.0)}, kGauss1d),
        std::invalid_argument);  // point dimension 2 vs kernel dimension 1

    CHECK_THROWS_AS(
        Environment({TruncatedGaussianArm{{0.0}, 0.0, 1.0}, point_mass(0.0)}, kGauss1d),
        std::invalid_argument);  // zero scale
    CHECK_THROWS_AS(
        Environment({TruncatedGaussianArm{{0.0}, 1.0, -1.0}, point_mass(0.0)}, kGauss1d),
        std::invalid_argument);  // negative radius
}

TEST_CASE("ground-truth partition groups structurally equal arms") {
    Environment env({point_mass(0.0), point_mass(0.0), point_mass(1.0)}, kGauss1d);
    CHECK(env.true_partition() == kabc::Partition({{0, 1}, {2}}, 3));
    CHECK(env.num_clusters() == 2);

    // Equality is structural: the same distribution written with permuted
    // support points counts as a different arm spec.
    Environment permuted({DiscreteArm{{{0.0}, {1.0}}, {0.5, 0.5}},
                          DiscreteArm{{{1.0}, {0.0}}, {0.5, 0.5}}},
                         kGauss1d);
    CHECK(permuted.num_clusters() == 2);
}

TEST_CASE("degenerate sampling and determinism") {
    Environment env({point_mass(0.25), point_mass(1.0)}, kGauss1d);
    kabc::rng::Xoshiro256ss stream(3);
    kabc::SampleBatch batch = env.sample(0, 3, stream);
    CHECK(batch.n == 3);
    CHECK(batch.points == std::vector<double>{0.25, 0.25, 0.25});

    kabc::rng::Xoshiro256ss a(17);
    kabc::rng::Xoshiro256ss b(17);
    CHECK(env.sample(1, 5, a).points == env.sample(1, 5, b).points);

    CHECK_THROWS_AS(env.sample(2, 1, stream), std::invalid_argument);
    CHECK_THROWS_AS(env.sample(0, 0, stream), std::invalid_argument);
}

TEST_CASE("uniform arm obeys the law of large numbers") {
    Environment env({uniform01(), point_mass(0.0)}, kGauss1d);
    kabc::rng::Xoshiro256ss stream(101);
    kabc::SampleBatch batch = env.sample(0, 100000, stream);
    double mean = 0.0;
    for (double x : batch.points) mean += x;
    mean /= static_cast<double>(batch.n);
    CHECK(std::abs(mean - 0.5) < 0.01);  // sd of mean ~ 0.0016
}

TEST_CASE("truncated gaussian respects the radius") {
    KernelSpec kernel{KernelFamily::gaussian_rbf, 1.0, 2};
    TruncatedGaussianArm arm{{1.0, -1.0}, 1.0, 2.0};
    Environment env({arm, arm}, kernel);
    kabc::rng::Xoshiro256ss stream(7);
    kabc::SampleBatch batch = env.sample(0, 10000, stream);
    for (std::size_t t = 0; t < batch.n; ++t) {
        auto p = batch.point(t);
        double dx = p[0] - 1.0;
        double dy = p[1] + 1.0;
        REQUIRE(dx * dx + dy * dy <= 4.0 + 1e-12);
    }
}

TEST_CASE("sample audit counter counts every draw") {
    Environment env({point_mass(0.0), uniform01()}, kGauss1d);
    kabc::reset_samples_drawn();
    kabc::rng::Xoshiro256ss stream(1);
    env.sample(0, 10, stream);
    env.sample(1, 25, stream);
    CHECK(kabc::samples_drawn() == 35);
    kabc::reset_samples_drawn();
    CHECK(kabc::samples_drawn() == 0);
}

TEST_CASE("true mmd of separated point masses") {
    Environment env({point_mass(0.0), point_mass(1.0)}, kGauss1d);
    OracleValue mmd = env.true_mmd(0, 1);
    CHECK(mmd.exact);
    CHECK(mmd.std_error == 0.0);
    CHECK(mmd.value == doctest::Approx(1.1243847729568004).epsilon(1e-12));
    CHECK(env.true_mmd(1, 0).value == mmd.value);
    CHECK_THROWS_AS(env.true_mmd(0, 0), std::invalid_argument);
}

TEST_CASE("true mmd of a mixed pair") {
    Environment env({uniform01(), point_mass(0.0)}, kGauss1d);
    // sqrt(0.25 (2 + 2 e^-1) + 1 - (1 + e^-1)) = sqrt((1 - e^-1)/2)
    CHECK(env.true_mmd(0, 1).value == doctest::Approx(0.5621923864784002).epsilon(1e-12));
}

TEST_CASE("true mmd matches the brute-force double sum on random arms") {
    kabc::rng::Xoshiro256ss stream(31);
    for (KernelFamily family : {KernelFamily::gaussian_rbf, KernelFamily::laplacian}) {
        KernelSpec kernel{family, 1.2, 2};
        for (int rep = 0; rep < 40; ++rep) {
            DiscreteArm a = random_discrete(stream, 2);
            DiscreteArm b = random_discrete(stream, 2);
            Environment env({a, b}, kernel);
            double reference = oracle::true_mmd_discrete(kernel, a, b);
            CHECK(env.true_mmd(0, 1).value == doctest::Approx(reference).epsilon(1e-12));
        }
    }
}

TEST_CASE("true mmd is zero exactly for same-block arms and positive otherwise") {
    Environment env({point_mass(0.0), point_mass(0.0), uniform01()}, kGauss1d);
    CHECK(env.true_mmd(0, 1).value == 0.0);
    CHECK(env.true_mmd(0, 2).value > 0.0);
    CHECK(env.true_mmd(1, 2).value > 0.0);
}

TEST_CASE("true mmd satisfies the triangle inequality on random triples") {
    kabc::rng::Xoshiro256ss stream(57);
    KernelSpec kernel{KernelFamily::gaussian_rbf, 0.9, 1};
    for (int rep = 0; rep < 30; ++rep) {
        Environment env(
            {random_discrete(stream, 1), random_discrete(stream, 1), random_discrete(stream, 1)},
            kernel);
        double ab = env.true_mmd(0, 1).value;
        double bc = env.true_mmd(1, 2).value;
        double ac = env.true_mmd(0, 2).value;
        CHECK(ac <= ab + bc + 1e-9);
    }
}

TEST_CASE("true variance closed forms") {
    Environment env({point_mass(0.0), uniform01()}, kGauss1d);
    CHECK(env.true_variance(0).value == 0.0);
    CHECK(env.true_variance(1).value ==
          doctest::Approx(0.31606027941427883).epsilon(1e-12));
    CHECK_THROWS_AS(env.true_variance(2), std::invalid_argument);
}

TEST_CASE("true variance stays within [0, sup]") {
    kabc::rng::Xoshiro256ss stream(63);
    KernelSpec kernel{KernelFamily::laplacian, 0.7, 1};
    for (int rep = 0; rep < 40; ++rep) {
        Environment env({random_discrete(stream, 1), random_discrete(stream, 1)}, kernel);
        double v = env.true_variance(0).value;
        CHECK(v >= 0.0);
        CHECK(v <= kabc::kernel_bounds(kernel).sup);
    }
}

TEST_CASE("signal-to-noise ratio of the three point masses") {
    Environment env({point_mass(0.0), point_mass(0.0), point_mass(1.0)}, kGauss1d);
    OracleValue snr = env.signal_to_noise();
    CHECK(snr.exact);
    // zero variances force the supremum-normalized term 2 |mu_i - mu_j|
    CHECK(snr.value == doctest::Approx(2.2487695459136008).epsilon(1e-12));
}

TEST_CASE("signal-to-noise picks the variance-normalized term when smaller") {
    // uniform{0,1} vs point mass: mmd^2 = (1 - e^-1)/2 = V*(uniform), so the
    // first term is exactly 1 and the second is ~1.124
    Environment env({uniform01(), point_mass(0.0)}, kGauss1d);
    CHECK(env.signal_to_noise().value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("signal-to-noise requires a separated pair") {
    Environment env({point_mass(0.0), point_mass(0.0)}, kGauss1d);
    CHECK_THROWS_WITH_AS(env.signal_to_noise(), "no separated pair; s_* undefined",
                         std::invalid_argument);
}

TEST_CASE("duplicating an arm leaves the signal-to-noise ratio unchanged") {
    Environment base({point_mass(0.0), point_mass(0.0), point_mass(1.0)}, kGauss1d);
    Environment wider(
        {point_mass(0.0), point_mass(0.0), point_mass(1.0), point_mass(0.0)}, kGauss1d);
    CHECK(base.signal_to_noise().value == wider.signal_to_noise().value);
}

TEST_CASE("monte carlo oracles for truncated gaussians") {
    TruncatedGaussianArm near{{0.0}, 1.0, 2.0};
    TruncatedGaussianArm far{{3.0}, 1.0, 2.0};
    Environment env({near, near, far}, kGauss1d);

    OracleValue same = env.true_mmd(0, 1);
    CHECK_FALSE(same.exact);
    CHECK(same.std_error > 0.0);
    CHECK(same.value < 0.05);  // zero up to estimator noise

    OracleValue apart = env.true_mmd(0, 2);
    CHECK_FALSE(apart.exact);
    CHECK(apart.value > 0.3);

    OracleValue variance = env.true_variance(0);
    CHECK_FALSE(variance.exact);
    CHECK(variance.value > 0.0);
    CHECK(variance.value <= 1.0 + 8.0 * variance.std_error);

    OracleValue snr = env.signal_to_noise();
    CHECK_FALSE(snr.exact);
    CHECK(snr.value > 0.0);
}
