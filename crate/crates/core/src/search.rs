//! Deterministic, derivative-free 1-D minimisation.

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section minimisation of `f` on `[lo, hi]` for a fixed number of
/// interval reductions. Returns the best point seen and its value; the two
/// endpoints are not probed.
pub fn golden_section<F>(mut f: F, mut lo: f64, mut hi: f64, iterations: usize) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iterations {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Runs golden-section until the bracket is narrower than `tol`.
pub fn golden_section_tol<F>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let width = (hi - lo).abs();
    let iterations = if width <= tol {
        0
    } else {
        ((tol / width).ln() / INV_PHI.ln()).ceil() as usize
    };
    golden_section(f, lo, hi, iterations)
}

/// Scans `[lo, hi]` at `step`, then refines the best interior sample with
/// golden-section down to `tol`.
///
/// Fails when the coarse minimum sits on either end of the scan, i.e. the
/// minimiser is not bracketed inside the interval.
pub fn bracket_and_refine<F>(mut f: F, lo: f64, hi: f64, step: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let n = ((hi - lo) / step).floor() as usize;
    if n < 2 {
        return Err(Error::BracketExhausted { lo, hi });
    }
    let at = |k: usize| if k == n { hi } else { lo + step * k as f64 };
    let mut best = (0usize, f(at(0)));
    for k in 1..=n {
        let v = f(at(k));
        if v < best.1 {
            best = (k, v);
        }
    }
    if best.0 == 0 || best.0 == n {
        return Err(Error::BracketExhausted { lo, hi });
    }
    let (x, _) = golden_section_tol(&mut f, at(best.0 - 1), at(best.0 + 1), tol);
    Ok(x)
}
