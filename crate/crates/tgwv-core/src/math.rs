//! Scalar math helpers that work with or without `std`.
//!
//! With the `std` feature enabled the intrinsic float methods are used;
//! without it the `libm` implementations stand in. The two backends may
//! differ in the last ulp, which every test tolerance in this crate absorbs.

macro_rules! float_fn {
    ($name:ident, $method:ident, $libm:path) => {
        #[cfg(feature = "std")]
        #[inline]
        pub(crate) fn $name(x: f64) -> f64 {
            x.$method()
        }

        #[cfg(not(feature = "std"))]
        #[inline]
        pub(crate) fn $name(x: f64) -> f64 {
            $libm(x)
        }
    };
}

float_fn!(abs, abs, libm::fabs);
float_fn!(sqrt, sqrt, libm::sqrt);
float_fn!(ln, ln, libm::log);
float_fn!(log10, log10, libm::log10);
float_fn!(sin, sin, libm::sin);
float_fn!(cos, cos, libm::cos);

/// Median with the mean-of-the-two-middle-values rule for even counts.
/// Reorders `values`. Panics on an empty slice.
pub(crate) fn median_in_place(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty(), "median of an empty slice");
    let n = values.len();
    let (below, mid, _) = values.select_nth_unstable_by(n / 2, f64::total_cmp);
    if n % 2 == 1 {
        *mid
    } else {
        // `below` holds the n/2 elements that sort before `mid`, so its
        // maximum is the lower of the two middle values.
        let lower = below.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lower + *mid) / 2.0
    }
}

/// SplitMix64 finalizer. Bijective, so distinct inputs give distinct
/// outputs; used to decorrelate sequentially derived seeds.
pub(crate) fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_odd_count() {
        let mut v = [0.3, 0.1, 0.9];
        assert_eq!(median_in_place(&mut v), 0.3);
    }

    #[test]
    fn median_even_count_averages_middle_pair() {
        let mut v = [0.0, 1.0];
        assert_eq!(median_in_place(&mut v), 0.5);
        let mut v = [4.0, 1.0, 3.0, 2.0];
        assert_eq!(median_in_place(&mut v), 2.5);
    }

    #[test]
    fn median_single_element() {
        let mut v = [7.0];
        assert_eq!(median_in_place(&mut v), 7.0);
    }

    #[test]
    fn mix64_matches_reference_and_separates_neighbors() {
        // First output of a SplitMix64 stream seeded with 0.
        assert_eq!(mix64(0), 0xE220_A839_7B1D_CDAF);
        // Adjacent inputs must land far apart.
        assert_ne!(mix64(1), mix64(0));
        assert_ne!(mix64(1) ^ mix64(0), 1);
    }
}
