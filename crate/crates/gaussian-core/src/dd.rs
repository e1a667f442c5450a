//! Division and exponential for double-double values.
//!
//! `twofloat` supplies accurate addition, multiplication and square root,
//! but its dd/dd division and `exp` lose the low word. These replacements
//! are built only on the accurate primitives.

use twofloat::TwoFloat;

pub type Dd = TwoFloat;

const LN2_HI: f64 = std::f64::consts::LN_2;
const LN2_LO: f64 = 2.319_046_813_846_299_6e-17;

#[inline]
pub fn dd(x: f64) -> Dd {
    TwoFloat::from(x)
}

/// `a / b` to full double-double accuracy (three-step long division).
pub fn div(a: Dd, b: Dd) -> Dd {
    let bh = b.hi();
    let q1 = a.hi() / bh;
    let r = a - b * q1;
    let q2 = r.hi() / bh;
    let r = r - b * q2;
    let q3 = r.hi() / bh;
    (dd(q1) + q2) + q3
}

pub fn recip(b: Dd) -> Dd {
    div(dd(1.0), b)
}

/// `e^x` by argument reduction `x = k ln 2 + r`, `r/512` Taylor, nine squarings.
pub fn exp(x: Dd) -> Dd {
    let xh = x.hi();
    if xh < -745.0 {
        return dd(0.0);
    }
    if xh > 709.0 {
        return dd(f64::INFINITY);
    }
    let k = (xh / LN2_HI).round();
    let ln2 = dd(LN2_HI) + LN2_LO;
    let r = (x - ln2 * k) * (1.0 / 512.0);
    let mut term = dd(1.0);
    let mut sum = dd(1.0);
    for i in 1..=12 {
        term = div(term * r, dd(i as f64));
        sum += term;
    }
    for _ in 0..9 {
        sum = sum * sum;
    }
    sum * 2f64.powi(k as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_keeps_low_word() {
        let r = div(dd(1.0), dd(3.0));
        assert!(f64::from(r * 3.0 - 1.0).abs() < 1e-31);
        let a = dd(1.0002) + dd(3e-20);
        let b = dd(0.7) + dd(1e-18);
        let q = div(a, b);
        assert!(f64::from(q * b - a).abs() < 1e-31);
    }

    #[test]
    fn exp_matches_f64_and_is_multiplicative() {
        for x in [-30.0, -1.0, -1e-3, 0.0, 0.5, 3.0] {
            let e = exp(dd(x));
            assert!((f64::from(e) - f64::exp(x)).abs() <= 2e-16 * f64::exp(x));
        }
        let a = exp(dd(-0.25));
        let b = exp(dd(-0.75));
        let c = exp(dd(-1.0));
        let err = f64::from(a * b - c).abs();
        assert!(err < 1e-29, "{err:e}");
    }
}
