//! Closed-form homotopy types of `VR(C_n, k)`.
//!
//! For `0 <= k < n/2` let `ℓ = ⌊k / (n - 2k)⌋`, the largest `ℓ` with
//! `ℓn/(2ℓ+1) <= k`. If `k(2ℓ+1) = ℓn` the complex is a wedge of
//! `n - 2k - 1` spheres of dimension `2ℓ`; otherwise it is `S^{2ℓ+1}`.
//! For `k >= n/2` it is a full simplex.

use super::{BettiProfile, Coefficients};

/// Expected Betti numbers of `VR(C_n, k)`, unreduced.
pub fn expected_cycle_profile(n: u32, k: u32) -> BettiProfile {
    let (n64, k64) = (n as u64, k as u64);
    if 2 * k64 >= n64 {
        return BettiProfile::from_betti(Coefficients::Gf2, vec![1]);
    }
    let ell = k64 / (n64 - 2 * k64);
    let mut betti;
    if k64 * (2 * ell + 1) == ell * n64 {
        let dim = (2 * ell) as usize;
        let count = n64 - 2 * k64 - 1;
        betti = vec![0; dim + 1];
        betti[0] = 1;
        betti[dim] += count;
    } else {
        let dim = (2 * ell + 1) as usize;
        betti = vec![0; dim + 1];
        betti[0] = 1;
        betti[dim] = 1;
    }
    while betti.len() > 1 && betti.last() == Some(&0) {
        betti.pop();
    }
    BettiProfile::from_betti(Coefficients::Gf2, betti)
}
