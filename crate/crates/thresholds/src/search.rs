//! Derivative-free maximization and crossing search.

use argmin::core::{CostFunction, Error as ArgminError, Executor, State};
use argmin::solver::neldermead::NelderMead;

/// Bisection stops once the bracket is this narrow.
pub const CROSSING_TOL: f64 = 1e-4;

struct Negated<'a, F> {
    f: &'a F,
}

impl<F, E> CostFunction for Negated<'_, F>
where
    F: Fn(&[f64]) -> Result<f64, E>,
    E: std::error::Error + Send + Sync + 'static,
{
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, p: &Self::Param) -> Result<f64, ArgminError> {
        Ok(-(self.f)(p)?)
    }
}

/// Nelder–Mead maximization started from the simplex `start`, `start + step·e_i`.
/// Returns the best point and value seen.
pub fn simplex_maximize<F, E>(
    f: &F,
    start: &[f64],
    step: &[f64],
    iterations: u64,
    tolerance: f64,
) -> Result<(Vec<f64>, f64), E>
where
    F: Fn(&[f64]) -> Result<f64, E>,
    E: std::error::Error + Send + Sync + 'static,
{
    let mut simplex = vec![start.to_vec()];
    for (i, s) in step.iter().enumerate() {
        let mut p = start.to_vec();
        p[i] += s;
        simplex.push(p);
    }
    let solver = NelderMead::new(simplex).with_sd_tolerance(tolerance).expect("positive tolerance");
    let run = Executor::new(Negated { f }, solver).configure(|s| s.max_iters(iterations)).run();
    match run {
        Ok(res) => {
            let state = res.state();
            let best = state.get_best_param().cloned().unwrap_or_else(|| start.to_vec());
            Ok((best, -state.get_best_cost()))
        }
        Err(err) => match err.downcast::<E>() {
            Ok(e) => Err(e),
            Err(other) => panic!("simplex search failed: {other}"),
        },
    }
}

/// Maximum of `f` on `[lo, hi]`: uniform grid of `points`, then a simplex
/// refinement from the best grid point, kept inside the interval.
pub fn maximize_scalar<F, E>(f: F, lo: f64, hi: f64, points: usize, tolerance: f64) -> Result<(f64, f64), E>
where
    F: Fn(f64) -> Result<f64, E>,
    E: std::error::Error + Send + Sync + 'static,
{
    assert!(points >= 2 && hi > lo);
    let h = (hi - lo) / (points - 1) as f64;
    let mut best = (lo, f(lo)?);
    for i in 1..points {
        let x = lo + i as f64 * h;
        let v = f(x)?;
        if v > best.1 {
            best = (x, v);
        }
    }
    let clamped = |p: &[f64]| f(p[0].clamp(lo, hi));
    let step = if best.0 + 0.5 * h <= hi { 0.5 * h } else { -0.5 * h };
    let (x, v) = simplex_maximize(&clamped, &[best.0], &[step], 200, tolerance)?;
    if v >= best.1 {
        Ok((x[0].clamp(lo, hi), v))
    } else {
        Ok(best)
    }
}

/// First parameter in `[lo, hi]` where `curve − threshold` changes sign.
///
/// The range is scanned on `scan` uniform steps; the first bracketing step
/// is bisected to [`CROSSING_TOL`]. `None` when no sign change is seen.
pub fn find_crossing<C, T, E>(curve: C, threshold: T, lo: f64, hi: f64, scan: usize) -> Result<Option<f64>, E>
where
    C: Fn(f64) -> Result<f64, E>,
    T: Fn(f64) -> Result<f64, E>,
{
    let gap = |x: f64| -> Result<f64, E> { Ok(curve(x)? - threshold(x)?) };
    let mut a = lo;
    let mut fa = gap(a)?;
    if fa == 0.0 {
        return Ok(Some(a));
    }
    for i in 1..=scan.max(1) {
        let b = lo + (hi - lo) * i as f64 / scan.max(1) as f64;
        let fb = gap(b)?;
        if fb == 0.0 {
            return Ok(Some(b));
        }
        if fa.signum() != fb.signum() {
            let (mut x0, mut x1) = (a, b);
            while x1 - x0 > CROSSING_TOL {
                let mid = 0.5 * (x0 + x1);
                let fm = gap(mid)?;
                if fm == 0.0 {
                    return Ok(Some(mid));
                }
                if fm.signum() == fa.signum() {
                    x0 = mid;
                } else {
                    x1 = mid;
                }
            }
            return Ok(Some(0.5 * (x0 + x1)));
        }
        a = b;
        fa = fb;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::convert::Infallible;

    #[derive(Debug, thiserror::Error)]
    #[error("bad point")]
    struct Bad;

    #[test]
    fn crossing_of_a_line() {
        let c = find_crossing(|x| Ok::<_, Infallible>(x), |_| Ok(0.3), 0.0, 1.0, 10).unwrap().unwrap();
        assert!((c - 0.3).abs() <= CROSSING_TOL);
        let none = find_crossing(|_| Ok::<_, Infallible>(0.1), |_| Ok(0.2), 0.0, 1.0, 10).unwrap();
        assert_eq!(none, None);
    }

    #[test]
    fn scalar_maximum() {
        let (x, v) = maximize_scalar(|x: f64| Ok::<_, Bad>(-(x - 0.7).powi(2) + 2.0), 0.0, 3.0, 31, 1e-14).unwrap();
        assert!((x - 0.7).abs() < 1e-5 && (v - 2.0).abs() < 1e-10);
        let (x, _) = maximize_scalar(|x: f64| Ok::<_, Bad>(x), 0.0, 1.0, 11, 1e-12).unwrap();
        assert_eq!(x, 1.0);
    }

    #[test]
    fn errors_come_back_typed() {
        let f = |p: &[f64]| if p[0] > 0.5 { Err(Bad) } else { Ok(p[0]) };
        assert!(simplex_maximize(&f, &[0.0], &[0.1], 100, 1e-10).is_err());
    }
}
