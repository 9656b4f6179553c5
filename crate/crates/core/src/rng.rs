//! Counter-based pseudo-randomness.
//!
//! Every random quantity in the crate is a pure function of a `(seed, stream,
//! index)` triple hashed through the SplitMix64 finalizer. There is no mutable
//! generator state, so values do not depend on generation order or thread
//! schedule, and they are identical on every platform with IEEE-754 doubles.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function applied to `z + gamma`.
#[inline]
pub fn splitmix64(z: u64) -> u64 {
    let mut z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// 64 well-mixed bits derived from `(seed, stream, index)`.
#[inline]
pub fn hash3(seed: u64, stream: u64, index: u64) -> u64 {
    let h = splitmix64(seed);
    let h = splitmix64(h ^ stream);
    splitmix64(h ^ index)
}

/// Maps the top 53 bits to a double in `[0, 1)`.
#[inline]
pub fn unit_f64(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform draw in `[0, 1)`.
#[inline]
pub fn uniform(seed: u64, stream: u64, index: u64) -> f64 {
    unit_f64(hash3(seed, stream, index))
}

/// Standard normal draw via Box-Muller, consuming uniforms `2*index` and `2*index + 1`.
pub fn standard_normal(seed: u64, stream: u64, index: u64) -> f64 {
    // 1 - u lies in (0, 1], so the log is finite.
    let u1 = 1.0 - uniform(seed, stream, index.wrapping_mul(2));
    let u2 = uniform(seed, stream, index.wrapping_mul(2).wrapping_add(1));
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Random sign in `{-1, +1}`.
#[inline]
pub fn sign(seed: u64, stream: u64, index: u64) -> f64 {
    if hash3(seed, stream, index) >> 63 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_in_range_and_deterministic() {
        for i in 0..10_000 {
            let u = uniform(7, 3, i);
            assert!((0.0..1.0).contains(&u));
            assert_eq!(u.to_bits(), uniform(7, 3, i).to_bits());
        }
        assert_ne!(uniform(7, 3, 0), uniform(8, 3, 0));
        assert_ne!(uniform(7, 3, 0), uniform(7, 4, 0));
    }

    #[test]
    fn normal_moments() {
        let n = 200_000u64;
        let (mut s1, mut s2) = (0.0, 0.0);
        for i in 0..n {
            let z = standard_normal(11, 0, i);
            assert!(z.is_finite());
            s1 += z;
            s2 += z * z;
        }
        let mean = s1 / n as f64;
        let var = s2 / n as f64 - mean * mean;
        // standard errors: 1/sqrt(n) for the mean, sqrt(2/n) for the variance
        assert!(mean.abs() < 5.0 / (n as f64).sqrt(), "mean {mean}");
        assert!(
            (var - 1.0).abs() < 5.0 * (2.0 / n as f64).sqrt(),
            "var {var}"
        );
    }

    #[test]
    fn signs_balanced() {
        let pos = (0..100_000).filter(|&i| sign(1, 2, i) > 0.0).count();
        assert!((pos as i64 - 50_000).abs() < 1_000);
    }
}
