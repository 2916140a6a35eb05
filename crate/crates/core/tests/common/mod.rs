//! Test-only oracles that share no code with the library's evaluation paths.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

/// Exact rational partial sum of `Σ Π(a+k)/Π(b+k) z^k/k!`, truncated once the
/// tail is provably below `2^-200` of the largest term.
pub fn exact_pfq(num: &[f64], den: &[f64], z: f64) -> f64 {
    let q = |x: f64| BigRational::from_f64(x).expect("finite");
    let num: Vec<BigRational> = num.iter().map(|&x| q(x)).collect();
    let den: Vec<BigRational> = den.iter().map(|&x| q(x)).collect();
    let zq = q(z);
    let scale: f64 = num.iter().chain(&den).map(|p| p.abs().to_f64().unwrap()).sum::<f64>() + 2.0 * z.abs();
    let eps = BigRational::new(BigInt::from(1), BigInt::from(2).pow(200u32));

    let mut term = BigRational::from_integer(BigInt::from(1));
    let mut sum = term.clone();
    let mut max_term = term.clone();
    for k in 0..100_000u32 {
        let kq = BigRational::from_integer(BigInt::from(k));
        let mut ratio = zq.clone() / BigRational::from_integer(BigInt::from(k + 1));
        for a in &num {
            ratio *= a + &kq;
        }
        for b in &den {
            ratio /= b + &kq;
        }
        if ratio.is_zero() {
            break;
        }
        term *= ratio;
        sum += &term;
        if term.abs() > max_term {
            max_term = term.abs();
        }
        if (k as f64) > scale + 2.0 && term.abs() < &max_term * &eps {
            break;
        }
    }
    sum.to_f64().unwrap()
}

/// Exact-rational oracle for ₁F₁(a; b; z) by its direct series.
pub fn oracle_hyp1f1(a: f64, b: f64, z: f64) -> f64 {
    exact_pfq(&[a], &[b], z)
}

/// Exact-rational oracle for ₂F₂({1,1}; {3/2,2}; z).
pub fn oracle_hyp2f2(z: f64) -> f64 {
    exact_pfq(&[1.0, 1.0], &[1.5, 2.0], z)
}

/// Bisection on a bracketing interval, to machine precision.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    assert!(flo * f(hi) <= 0.0, "root not bracketed");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
