//! Bessel functions of the first kind of integer order and the zeros needed
//! for cylinder eigenmodes.
//!
//! `J_m(x)` uses the ascending power series for `|x| < 12` and Miller's
//! backward recurrence, normalized with `J_0 + 2·Σ J_2k = 1`, beyond that.

use crate::error::{ModelError, Result};

pub const MAX_ORDER: u32 = 4;
pub const MAX_ROOT_INDEX: u32 = 5;

const SERIES_LIMIT: f64 = 12.0;
const SERIES_CUTOFF: f64 = 1e-17;

// j'_{m,n}, n = 1..=5 (trivial zero of J'_0 excluded); refined by Newton.
const PRIME_ZERO_SEEDS: [[f64; 5]; 5] = [
    [3.832, 7.016, 10.173, 13.324, 16.471],
    [1.841, 5.331, 8.536, 11.706, 14.864],
    [3.054, 6.706, 9.969, 13.170, 16.348],
    [4.201, 8.015, 11.346, 14.586, 17.789],
    [5.318, 9.282, 12.682, 15.964, 19.196],
];

// j_{m,n}, n = 1..=5.
const ZERO_SEEDS: [[f64; 5]; 5] = [
    [2.405, 5.520, 8.654, 11.792, 14.931],
    [3.832, 7.016, 10.173, 13.324, 16.471],
    [5.136, 8.417, 11.620, 14.796, 17.960],
    [6.380, 9.761, 13.015, 16.223, 19.409],
    [7.588, 11.065, 14.373, 17.616, 20.827],
];

fn check_indices(m: u32, n: u32) -> Result<()> {
    if m > MAX_ORDER || n == 0 || n > MAX_ROOT_INDEX {
        return Err(ModelError::Range(format!(
            "Bessel zero index (m={m}, n={n}) outside 0<=m<={MAX_ORDER}, 1<=n<={MAX_ROOT_INDEX}"
        )));
    }
    Ok(())
}

fn series(m: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for k in 1..=m {
        term *= half / k as f64;
    }
    let q = half * half;
    let mut sum = term;
    let mut k = 1.0;
    loop {
        term *= -q / (k * (k + m as f64));
        sum += term;
        if term.abs() < SERIES_CUTOFF && k > half {
            break;
        }
        k += 1.0;
    }
    sum
}

fn miller(m: u32, x: f64) -> f64 {
    let ax = x.abs();
    let top = (ax.max(m as f64) + 30.0 + (40.0 * ax).sqrt()) as u32;
    let top = top + top % 2;

    let mut next = 0.0; // J_{k+1}
    let mut cur = 1e-300; // J_k
    let mut norm = 0.0;
    let mut wanted = 0.0;
    for k in (1..=top).rev() {
        let prev = 2.0 * k as f64 / ax * cur - next;
        next = cur;
        cur = prev;
        if k - 1 == m {
            wanted = cur;
        }
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            wanted *= 1e-250;
        }
    }
    norm += cur;
    let value = wanted / norm;
    if x < 0.0 && m % 2 == 1 {
        -value
    } else {
        value
    }
}

/// `J_m(x)`.
pub fn bessel_j(m: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if m == 0 { 1.0 } else { 0.0 };
    }
    if x.abs() < SERIES_LIMIT {
        series(m, x)
    } else {
        miller(m, x)
    }
}

/// `J'_m(x)`.
pub fn bessel_j_prime(m: u32, x: f64) -> f64 {
    if m == 0 {
        -bessel_j(1, x)
    } else {
        0.5 * (bessel_j(m - 1, x) - bessel_j(m + 1, x))
    }
}

// From Bessel's equation.
fn bessel_j_second(m: u32, x: f64) -> f64 {
    let mf = m as f64;
    -bessel_j_prime(m, x) / x - (1.0 - mf * mf / (x * x)) * bessel_j(m, x)
}

fn newton(seed: f64, f: impl Fn(f64) -> f64, df: impl Fn(f64) -> f64) -> Result<f64> {
    let mut x = seed;
    for _ in 0..50 {
        let step = f(x) / df(x);
        x -= step;
        if step.abs() <= 1e-13 * x.abs() {
            // one more step to land on the rounding floor
            return Ok(x - f(x) / df(x));
        }
    }
    Err(ModelError::Convergence {
        routine: "Bessel zero Newton refinement",
        iterations: 50,
    })
}

/// n-th positive zero of `J'_m`, excluding the trivial zero of `J'_0` at 0.
pub fn bessel_prime_zero(m: u32, n: u32) -> Result<f64> {
    check_indices(m, n)?;
    let seed = PRIME_ZERO_SEEDS[m as usize][n as usize - 1];
    newton(seed, |x| bessel_j_prime(m, x), |x| bessel_j_second(m, x))
}

/// n-th positive zero of `J_m`.
pub fn bessel_zero(m: u32, n: u32) -> Result<f64> {
    check_indices(m, n)?;
    let seed = ZERO_SEEDS[m as usize][n as usize - 1];
    newton(seed, |x| bessel_j(m, x), |x| bessel_j_prime(m, x))
}

#[cfg(test)]
mod tests {
    use super::*;

    // scipy.special.jv reference values
    #[test]
    fn function_values() {
        let cases = [
            (0, 1.0, 0.765_197_686_557_966_6),
            (1, 1.0, 0.440_050_585_744_933_5),
            (0, 5.0, -0.177_596_771_314_338_3),
            (2, 10.0, 0.254_630_313_685_120_6),
            (4, 3.0, 0.132_034_183_924_612_2),
            (0, 15.0, -0.014_224_472_826_780_745),
            (3, 20.0, -0.098_901_394_560_449_58),
            (1, -2.0, -0.576_724_807_756_873_4),
        ];
        for (m, x, want) in cases {
            let got = bessel_j(m, x);
            assert!(
                (got - want).abs() < 1e-13,
                "J_{m}({x}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn series_and_recurrence_agree_near_switch() {
        for m in 0..=5 {
            for x in [9.0, 10.5, 11.9] {
                assert!((series(m, x) - miller(m, x)).abs() < 1e-12, "m={m} x={x}");
            }
        }
    }

    #[test]
    fn tabulated_prime_zeros() {
        assert!((bessel_prime_zero(0, 1).unwrap() - 3.831_705_970_2).abs() < 1e-10);
        assert!((bessel_prime_zero(1, 1).unwrap() - 1.841_183_781_3).abs() < 1e-10);
        assert!((bessel_prime_zero(4, 5).unwrap() - 19.196_028_8).abs() < 1e-7);
        assert!((bessel_zero(0, 1).unwrap() - 2.404_825_557_7).abs() < 1e-10);
    }

    #[test]
    fn sign_change_brackets_prime_zero() {
        let z = bessel_prime_zero(0, 1).unwrap();
        let d = 1e-9;
        assert!(bessel_j_prime(0, z - d) * bessel_j_prime(0, z + d) < 0.0);
    }

    #[test]
    fn all_table_residuals() {
        for m in 0..=MAX_ORDER {
            for n in 1..=MAX_ROOT_INDEX {
                let zp = bessel_prime_zero(m, n).unwrap();
                assert!(bessel_j_prime(m, zp).abs() < 1e-12, "J'_{m} at {zp}");
                let z = bessel_zero(m, n).unwrap();
                assert!(bessel_j(m, z).abs() < 1e-12, "J_{m} at {z}");
            }
        }
    }

    #[test]
    fn zeros_interlace() {
        for m in 0..=MAX_ORDER {
            for n in 1..MAX_ROOT_INDEX {
                let jp = bessel_prime_zero(m, n).unwrap();
                let jp_next = bessel_prime_zero(m, n + 1).unwrap();
                let j = bessel_zero(m, n).unwrap();
                if m == 0 {
                    // trivial J'_0 root excluded, so the index shifts by one
                    assert!(j < jp && jp < bessel_zero(0, n + 1).unwrap());
                } else {
                    assert!(jp < j && j < jp_next);
                }
            }
        }
    }

    #[test]
    fn out_of_range_indices() {
        assert!(matches!(bessel_prime_zero(5, 1), Err(ModelError::Range(_))));
        assert!(matches!(bessel_prime_zero(0, 0), Err(ModelError::Range(_))));
        assert!(matches!(bessel_zero(0, 6), Err(ModelError::Range(_))));
    }
}
