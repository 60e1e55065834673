//! Adams number `rho(n)` (one more than the maximal number of pointwise
//! independent vector fields on `S^{n-1}`) and the Ferus number.

/// `n = odd_part * 2^(4d + c)` with `rho = 8d + 2^c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct AdamsDecomposition {
    pub n: u64,
    pub odd_part: u64,
    pub d: u32,
    pub c: u32,
    pub rho: u64,
}

/// Panics if `n == 0`.
pub fn adams_rho(n: u64) -> AdamsDecomposition {
    assert!(n >= 1, "Adams number is defined for n >= 1");
    let v = n.trailing_zeros();
    let (d, c) = (v / 4, v % 4);
    AdamsDecomposition { n, odd_part: n >> v, d, c, rho: 8 * d as u64 + (1u64 << c) }
}

/// `F(l) = max { s in [0, l-1] : s < rho(l - s) }`. `s = 0` always
/// qualifies, so `F(l) >= 0`.
pub fn ferus_number(l: u64) -> u64 {
    assert!(l >= 2, "Ferus number is defined for l >= 2");
    (0..l).rev().find(|&s| s < adams_rho(l - s).rho).unwrap_or(0)
}

/// Ferus inequality `p <= rho(n) - 1`.
pub fn ferus_check(p: u64, n: u64) -> bool {
    p + 1 <= adams_rho(n).rho
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_adams_numbers() {
        let r = adams_rho(1);
        assert_eq!((r.d, r.c, r.rho), (0, 0, 1));
        let r = adams_rho(8);
        assert_eq!((r.d, r.c, r.rho), (0, 3, 8));
        let r = adams_rho(16);
        assert_eq!((r.d, r.c, r.rho), (1, 0, 9));
        // Classical values: rho(2) = 2, rho(4) = 4, rho(12) = 4, rho(32) = 10.
        assert_eq!(adams_rho(2).rho, 2);
        assert_eq!(adams_rho(4).rho, 4);
        assert_eq!(adams_rho(12).rho, 4);
        assert_eq!(adams_rho(32).rho, 10);
    }

    #[test]
    fn ferus_examples() {
        assert_eq!(ferus_number(2), 0);
        assert_eq!(ferus_number(3), 1);
        assert_eq!(ferus_number(9), 1);
    }

    #[test]
    fn ferus_inequality() {
        assert!(ferus_check(1, 2));
        assert!(ferus_check(8, 16));
        assert!(!ferus_check(9, 16));
        for n in (1..100).step_by(2) {
            assert!(!ferus_check(1, n));
        }
    }
}
