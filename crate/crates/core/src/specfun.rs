//! Gamma, Kummer ₁F₁ and the fixed-parameter ₂F₂ used by the Majorana decay factor.
//!
//! Both hypergeometric evaluators sum their power series in double-double
//! arithmetic. The Pochhammer ratios are formed exactly, so the only
//! rounding that survives cancellation in alternating series is at the
//! ~1e-32 level relative to the largest term.

use crate::error::{Error, Result};

/// Truncation policy for the hypergeometric series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            max_terms: 10_000,
        }
    }
}

impl SeriesControl {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0) || !rel_tol.is_finite() {
            return Err(Error::OutOfRange {
                name: "rel_tol",
                value: rel_tol,
                range: "(0, inf)",
            });
        }
        if max_terms == 0 {
            return Err(Error::OutOfRange {
                name: "max_terms",
                value: 0.0,
                range: ">= 1",
            });
        }
        Ok(Self { rel_tol, max_terms })
    }
}

/// A series value plus a flag raised when cancellation ate more digits than `rel_tol` allows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub precision_loss: bool,
    /// Largest |term| met during summation.
    pub max_term: f64,
}

/// Unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct DoubleDouble {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    fn sum(a: f64, b: f64) -> Self {
        let (hi, lo) = two_sum(a, b);
        Self { hi, lo }
    }

    fn add(self, o: Self) -> Self {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Self { hi, lo }
    }

    fn mul(self, o: Self) -> Self {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Self { hi, lo }
    }

    fn div(self, o: Self) -> Self {
        let q1 = self.hi / o.hi;
        let r = self.add(o.mul(Self::from_f64(-q1)));
        let q2 = r.hi / o.hi;
        let r = r.add(o.mul(Self::from_f64(-q2)));
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo }.add(Self::from_f64(q3))
    }

    fn abs(self) -> f64 {
        (self.hi + self.lo).abs()
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

fn is_non_positive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

const LANCZOS_G: f64 = 7.0;
// published digits kept verbatim
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(z) for real `z`, Lanczos approximation with reflection below ½.
pub fn gamma_fn(z: f64) -> Result<f64> {
    if is_non_positive_integer(z) {
        return Err(Error::PoleAtNonPositiveInteger(z));
    }
    if z < 0.5 {
        let pi = std::f64::consts::PI;
        return Ok(pi / ((pi * z).sin() * gamma_fn(1.0 - z)?));
    }
    // exact factorials keep integer arguments bit-exact
    if z == z.floor() && z <= 23.0 {
        return Ok((1..z as u64).map(|k| k as f64).product());
    }
    let x = z - 1.0;
    let t = x + LANCZOS_G + 0.5;
    let mut acc = LANCZOS_COEFFS[0];
    for (k, &coef) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += coef / (x + k as f64);
    }
    let sqrt_two_pi = (2.0 * std::f64::consts::PI).sqrt();
    // split the power to avoid overflow for large z
    let half = t.powf((x + 0.5) / 2.0);
    Ok(sqrt_two_pi * half * (half * (-t).exp()) * acc)
}

/// Sums `Σ_k Π(num + k) / Π(den + k) · z^k / k!` in double-double.
fn pfq_series(num: &[DoubleDouble], den: &[DoubleDouble], z: f64, ctl: SeriesControl) -> Result<SeriesValue> {
    let zdd = DoubleDouble::from_f64(z);
    let mut term = DoubleDouble::from_f64(1.0);
    let mut sum = DoubleDouble::from_f64(1.0);
    let mut max_term = 1.0f64;
    let param_scale: f64 = num.iter().chain(den).map(|p| p.abs()).sum();

    for k in 0..ctl.max_terms {
        let kf = DoubleDouble::from_f64(k as f64);
        let mut ratio_num = zdd;
        for &a in num {
            ratio_num = ratio_num.mul(a.add(kf));
        }
        let mut ratio_den = DoubleDouble::from_f64(k as f64 + 1.0);
        for &b in den {
            ratio_den = ratio_den.mul(b.add(kf));
        }
        if ratio_num.hi == 0.0 {
            // terminating series
            return Ok(finish(sum, max_term, ctl));
        }
        let ratio = ratio_num.div(ratio_den);
        term = term.mul(ratio);
        sum = sum.add(term);
        let t_abs = term.abs();
        max_term = max_term.max(t_abs);

        let next_ratio = ratio.abs();
        let past_peak = (k as f64) > param_scale && next_ratio < 0.5;
        if past_peak {
            // geometric bound on the tail once successive ratios stay below ½
            let tail = t_abs;
            if tail <= 1e-3 * ctl.rel_tol * sum.abs() || tail <= 1e-32 * max_term || t_abs == 0.0 {
                return Ok(finish(sum, max_term, ctl));
            }
        }
    }
    Err(Error::SeriesDivergence(ctl.max_terms))
}

fn finish(sum: DoubleDouble, max_term: f64, ctl: SeriesControl) -> SeriesValue {
    let value = sum.to_f64();
    SeriesValue {
        value,
        precision_loss: max_term > value.abs() / ctl.rel_tol,
        max_term,
    }
}

/// Kummer's confluent hypergeometric function ₁F₁(a; b; z).
///
/// For `z < −1` the argument is reflected with ₁F₁(a;b;z) = e^z ₁F₁(b−a;b;−z).
pub fn hyp1f1(a: f64, b: f64, z: f64, ctl: SeriesControl) -> Result<f64> {
    if is_non_positive_integer(b) {
        return Err(Error::PoleAtNonPositiveInteger(b));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    let bdd = DoubleDouble::from_f64(b);
    if z < -1.0 {
        let b_minus_a = DoubleDouble::sum(b, -a);
        let s = pfq_series(&[b_minus_a], &[bdd], -z, ctl)?;
        Ok(z.exp() * s.value)
    } else {
        Ok(pfq_series(&[DoubleDouble::from_f64(a)], &[bdd], z, ctl)?.value)
    }
}

/// ₂F₂({1,1}; {3/2,2}; z).
pub fn hyp2f2_11_3half_2(z: f64, ctl: SeriesControl) -> Result<SeriesValue> {
    if z == 0.0 {
        return Ok(SeriesValue {
            value: 1.0,
            precision_loss: false,
            max_term: 1.0,
        });
    }
    let one = DoubleDouble::from_f64(1.0);
    let den = [DoubleDouble::from_f64(1.5), DoubleDouble::from_f64(2.0)];
    pfq_series(&[one, one], &den, z, ctl)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn gamma_known_values() {
        assert_eq!(gamma_fn(5.0).unwrap(), 24.0);
        let sqrt_pi = std::f64::consts::PI.sqrt();
        assert_relative_eq!(gamma_fn(0.5).unwrap(), sqrt_pi, max_relative = 1e-14);
        assert_relative_eq!(gamma_fn(2.5).unwrap(), 1.5 * 0.5 * sqrt_pi, max_relative = 1e-14);
        // recurrence route
        assert_relative_eq!(
            gamma_fn(2.5).unwrap(),
            1.5 * gamma_fn(1.5).unwrap(),
            max_relative = 1e-14
        );
        assert_relative_eq!(gamma_fn(-0.5).unwrap(), -2.0 * sqrt_pi, max_relative = 1e-14);
    }

    #[test]
    fn gamma_poles() {
        for z in [0.0, -1.0, -7.0] {
            assert!(matches!(gamma_fn(z), Err(Error::PoleAtNonPositiveInteger(_))));
        }
    }

    #[test]
    fn gamma_factorials_to_thirty() {
        let mut fact = 1.0f64;
        for n in 1..=30u32 {
            if n > 1 {
                fact *= (n - 1) as f64;
            }
            assert_relative_eq!(gamma_fn(n as f64).unwrap(), fact, max_relative = 1e-12);
        }
    }

    #[test]
    fn hyp1f1_trivial_cases() {
        let ctl = SeriesControl::default();
        assert_eq!(hyp1f1(0.3, 1.7, 0.0, ctl).unwrap(), 1.0);
        assert_relative_eq!(
            hyp1f1(1.0, 1.0, -2.0, ctl).unwrap(),
            (-2.0f64).exp(),
            max_relative = 1e-14
        );
        assert_relative_eq!(hyp1f1(1.0, 1.0, 0.7, ctl).unwrap(), 0.7f64.exp(), max_relative = 1e-14);
        assert_relative_eq!(
            hyp1f1(1.0, 1.0, -0.5, ctl).unwrap(),
            (-0.5f64).exp(),
            max_relative = 1e-14
        );
        assert!(hyp1f1(1.0, -2.0, 1.0, ctl).is_err());
    }

    #[test]
    fn hyp1f1_erf_identity() {
        // ₁F₁(½; 3/2; −x²) = √π erf(x) / (2x); erf(1) rounded to f64
        let erf1 = 0.842_700_792_949_714_9;
        let expected = std::f64::consts::PI.sqrt() * erf1 / 2.0;
        let got = hyp1f1(0.5, 1.5, -1.0, SeriesControl::default()).unwrap();
        assert_relative_eq!(got, expected, max_relative = 1e-14);
    }

    #[test]
    fn hyp2f2_leading_terms() {
        let ctl = SeriesControl::default();
        assert_eq!(hyp2f2_11_3half_2(0.0, ctl).unwrap().value, 1.0);
        let z = 1e-8;
        let v = hyp2f2_11_3half_2(z, ctl).unwrap().value;
        assert!((v - (1.0 + z / 3.0)).abs() <= 1e-15);
    }

    #[test]
    fn hyp2f2_flags_precision_loss_far_out() {
        let ctl = SeriesControl::default();
        assert!(!hyp2f2_11_3half_2(-20.0, ctl).unwrap().precision_loss);
        assert!(hyp2f2_11_3half_2(-100.0, ctl).unwrap().precision_loss);
    }

    #[test]
    fn series_divergence_reported() {
        let ctl = SeriesControl::new(1e-12, 3).unwrap();
        assert!(matches!(hyp1f1(1.0, 0.5, 3.0, ctl), Err(Error::SeriesDivergence(3))));
        assert!(SeriesControl::new(0.0, 10).is_err());
        assert!(SeriesControl::new(1e-12, 0).is_err());
    }

    proptest! {
        #[test]
        fn gamma_recurrence(z in 0.1f64..20.0) {
            let lhs = gamma_fn(z + 1.0).unwrap();
            let rhs = z * gamma_fn(z).unwrap();
            prop_assert!(((lhs - rhs) / lhs).abs() <= 1e-11);
        }

        #[test]
        fn hyp1f1_contiguous(a in 0.5f64..3.0, b in 0.5f64..3.0, z in -5.0f64..5.0) {
            let ctl = SeriesControl::default();
            let lhs = hyp1f1(a, b, z, ctl).unwrap() - hyp1f1(a - 1.0, b, z, ctl).unwrap();
            let rhs = z / b * hyp1f1(a, b + 1.0, z, ctl).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-9, "{} vs {}", lhs, rhs);
        }
    }
}
