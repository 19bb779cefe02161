//! Simpson-rule integration: a fixed composite rule and an adaptive variant
//! that works for real and complex integrands.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Values the adaptive rule can integrate.
pub trait Integrand: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl Integrand for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Integrand for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Composite Simpson rule on `nodes` equally spaced points (odd, ≥ 3).
pub fn simpson<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, nodes: usize) -> f64 {
    assert!(nodes >= 3 && nodes % 2 == 1, "Simpson needs an odd node count >= 3");
    let n = nodes - 1;
    let h = (hi - lo) / n as f64;
    let mut odd = 0.0;
    let mut even = 0.0;
    for i in 1..n {
        let v = f(lo + i as f64 * h);
        if i % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    h / 3.0 * (f(lo) + f(hi) + 4.0 * odd + 2.0 * even)
}

/// Composite Simpson over already-tabulated values on a uniform grid.
pub fn simpson_samples(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    assert!(n >= 3 && n % 2 == 1, "Simpson needs an odd sample count >= 3");
    let mut acc = values[0] + values[n - 1];
    for (i, v) in values.iter().enumerate().take(n - 1).skip(1) {
        acc += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    acc * h / 3.0
}

#[derive(Debug, Clone, Copy)]
pub struct AdaptiveSimpson {
    /// Absolute error target for the whole interval.
    pub abs_tol: f64,
    /// Number of equal panels to seed the recursion with. Oscillatory
    /// integrands need enough panels that no panel looks falsely converged.
    pub initial_panels: usize,
    pub max_depth: u32,
}

impl Default for AdaptiveSimpson {
    fn default() -> Self {
        AdaptiveSimpson {
            abs_tol: 1e-12,
            initial_panels: 16,
            max_depth: 48,
        }
    }
}

struct Panel<T> {
    a: f64,
    b: f64,
    fa: T,
    fm: T,
    fb: T,
    whole: T,
}

impl AdaptiveSimpson {
    pub fn with_tol(abs_tol: f64) -> Self {
        AdaptiveSimpson {
            abs_tol,
            ..Default::default()
        }
    }

    pub fn panels(mut self, n: usize) -> Self {
        self.initial_panels = n.max(1);
        self
    }

    pub fn integrate<T, F>(&self, mut f: F, lo: f64, hi: f64) -> Result<T>
    where
        T: Integrand,
        F: FnMut(f64) -> T,
    {
        if lo == hi {
            return Ok(T::zero());
        }
        let n = self.initial_panels;
        let width = (hi - lo) / n as f64;
        let tol = self.abs_tol / n as f64;
        let mut total = T::zero();
        let mut fa = f(lo);
        for i in 0..n {
            let a = lo + i as f64 * width;
            let b = if i + 1 == n { hi } else { lo + (i + 1) as f64 * width };
            let fb = f(b);
            let m = 0.5 * (a + b);
            let fm = f(m);
            let whole = (fa + fm * 4.0 + fb) * ((b - a) / 6.0);
            let panel = Panel {
                a,
                b,
                fa,
                fm,
                fb,
                whole,
            };
            total = total + self.refine(&mut f, panel, tol, self.max_depth)?;
            fa = fb;
        }
        Ok(total)
    }

    fn refine<T, F>(&self, f: &mut F, p: Panel<T>, tol: f64, depth: u32) -> Result<T>
    where
        T: Integrand,
        F: FnMut(f64) -> T,
    {
        let m = 0.5 * (p.a + p.b);
        let lm = 0.5 * (p.a + m);
        let rm = 0.5 * (m + p.b);
        let flm = f(lm);
        let frm = f(rm);
        let left = (p.fa + flm * 4.0 + p.fm) * ((m - p.a) / 6.0);
        let right = (p.fm + frm * 4.0 + p.fb) * ((p.b - m) / 6.0);
        let delta = left + right - p.whole;
        if delta.magnitude() <= 15.0 * tol {
            return Ok(left + right + delta * (1.0 / 15.0));
        }
        if depth == 0 || m <= p.a || m >= p.b {
            return Err(Error::Quadrature { lo: p.a, hi: p.b });
        }
        let l = Panel {
            a: p.a,
            b: m,
            fa: p.fa,
            fm: flm,
            fb: p.fm,
            whole: left,
        };
        let r = Panel {
            a: m,
            b: p.b,
            fa: p.fm,
            fm: frm,
            fb: p.fb,
            whole: right,
        };
        Ok(self.refine(f, l, 0.5 * tol, depth - 1)? + self.refine(f, r, 0.5 * tol, depth - 1)?)
    }
}
