use num_bigint::BigUint;
use num_traits::Zero;

/// Four-square decomposition `k = a₁² + a₂² + a₃² + a₄²`.
///
/// Returns the lexicographically smallest solution with `a₁ ≤ a₂ ≤ a₃ ≤ a₄`.
/// The search is exhaustive in `a₃`, so it is meant for the moderate values
/// that stabilizing a characteristic class produces, not for cryptographic sizes.
pub fn four_squares(k: &BigUint) -> [BigUint; 4] {
    let mut a1 = BigUint::zero();
    // 4·a1² ≤ k, 3·a2² ≤ k − a1², 2·a3² ≤ rest
    while &a1 * &a1 * 4u32 <= *k {
        let r1 = k - &a1 * &a1;
        let mut a2 = a1.clone();
        while &a2 * &a2 * 3u32 <= r1 {
            let r2 = &r1 - &a2 * &a2;
            let mut a3 = a2.clone();
            while &a3 * &a3 * 2u32 <= r2 {
                let r3 = &r2 - &a3 * &a3;
                let a4 = r3.sqrt();
                if &a4 * &a4 == r3 {
                    return [a1, a2, a3, a4];
                }
                a3 += 1u32;
            }
            a2 += 1u32;
        }
        a1 += 1u32;
    }
    unreachable!("every nonnegative integer is a sum of four squares")
}
