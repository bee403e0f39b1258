#include <catch2/catch_amalgamated.hpp>

#include "dynsketch/field.hpp"

using namespace dynsketch;

TEST_CASE("choose_prime returns the smallest prime above the target") {
    CHECK(choose_prime(1, 0.5).prime == 5);      // smallest prime >= 4
    CHECK(choose_prime(10, 0.01).prime == 2003);  // 2000..2002 are composite
    CHECK(choose_prime(100, 0.5).prime == 401);
}

TEST_CASE("choose_prime is deterministic and validates its arguments") {
    CHECK(choose_prime(37, 0.123).prime == choose_prime(37, 0.123).prime);
    CHECK_THROWS_AS(choose_prime(0, 0.5), Error);
    CHECK_THROWS_AS(choose_prime(5, 0.0), Error);
    CHECK_THROWS_AS(choose_prime(5, 1.0), Error);
    CHECK_THROWS_AS(choose_prime(UINT64_MAX / 2, 1e-9), Error);
}

namespace {

bool prime_by_trial_division(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("primality test on known values") {
    CHECK(is_prime(2));
    CHECK(is_prime(3));
    CHECK(is_prime(401));
    CHECK(is_prime(2003));
    CHECK(is_prime(std::uint64_t{1} << 61) == false);
    CHECK(is_prime(2305843009213693951ull));  // 2^61 - 1
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(2000));
    CHECK_FALSE(is_prime(3215031751ull));  // strong pseudoprime to bases 2,3,5,7
}

TEST_CASE("primality agrees with trial division") {
    for (std::uint64_t n = 0; n <= 5000; ++n) CHECK(is_prime(n) == prime_by_trial_division(n));
    // the 2000..2003 window behind the (n=10, delta=0.01) prime choice
    CHECK_FALSE(prime_by_trial_division(2000));
    CHECK_FALSE(prime_by_trial_division(2001));
    CHECK_FALSE(prime_by_trial_division(2002));
    CHECK(prime_by_trial_division(2003));
}

TEST_CASE("modular inverse identities") {
    CHECK(invmod(1, 7) == 1);
    CHECK(invmod(3, 7) == 5);
    CHECK_THROWS_AS(invmod(0, 7), ZeroInverseError);

    Rng rng(42);
    for (int i = 0; i < 1000; ++i) {
        std::uint64_t a = 1 + rng.uniform_below(2002);
        CHECK(mulmod(a, invmod(a, 2003), 2003) == 1);
    }
}

TEST_CASE("field spec validation") {
    FieldSpec good{2003, 7};
    CHECK_NOTHROW(good.validate());
    FieldSpec bad{2000, 7};
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("bounded draws stay in range and are seed-deterministic") {
    Rng a(123), b(123);
    for (int i = 0; i < 200; ++i) {
        std::uint64_t bound = 1 + (static_cast<std::uint64_t>(i) * 977) % 5000;
        std::uint64_t x = a.uniform_below(bound);
        CHECK(x < bound);
        CHECK(x == b.uniform_below(bound));
    }
}
