//! Adaptive Gauss–Kronrod (7/15) quadrature with an evaluation budget.
//!
//! Nested integrals share one [`Budget`] so that the total number of kernel
//! calls across all levels is bounded.

// Tabulated coefficients are kept exactly as published.
#![allow(clippy::excessive_precision)]

use std::cell::Cell;

use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights at XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Default cap on kernel evaluations for one top-level integral.
pub const DEFAULT_BUDGET: usize = 10_000_000;

/// Shared counter of kernel evaluations.
#[derive(Debug)]
pub struct Budget {
    limit: usize,
    used: Cell<usize>,
}

impl Budget {
    pub fn new(limit: usize) -> Self {
        Self { limit, used: Cell::new(0) }
    }

    pub fn used(&self) -> usize {
        self.used.get()
    }

    pub fn remaining(&self) -> usize {
        self.limit.saturating_sub(self.used.get())
    }

    fn charge(&self, n: usize) -> bool {
        let next = self.used.get() + n;
        self.used.set(next);
        next <= self.limit
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

#[derive(Clone, Copy, Debug)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK[..7].iter().zip(&WGK[..7]).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kron += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment { a, b, value: kron * half, error: ((kron - gauss) * half).abs() }
}

/// Adaptive integral of `f` over [a, b].
///
/// Converges when the summed error estimate drops below
/// `max(abs_tol, rel_tol·|I|)`. Exhausting the budget returns
/// [`Error::Convergence`] with the last two running estimates.
pub fn integrate<F>(mut f: F, a: f64, b: f64, rel_tol: f64, abs_tol: f64, budget: &Budget) -> Result<Estimate>
where
    F: FnMut(f64) -> f64,
{
    if a == b {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    if !budget.charge(15) {
        return Err(Error::Convergence { previous: f64::NAN, last: f64::NAN });
    }
    let mut segments = vec![kronrod(&mut f, a, b)];
    let mut previous = f64::NAN;
    loop {
        let value: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        if error <= abs_tol.max(rel_tol * value.abs()) {
            return Ok(Estimate { value, error });
        }
        let (worst, _) = segments.iter().enumerate().max_by(|x, y| x.1.error.total_cmp(&y.1.error)).expect("non-empty");
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.a + seg.b);
        if !budget.charge(30) || mid <= seg.a || mid >= seg.b {
            return Err(Error::Convergence { previous, last: value });
        }
        segments.push(kronrod(&mut f, seg.a, mid));
        segments.push(kronrod(&mut f, mid, seg.b));
        previous = value;
    }
}

/// Integral over [a, b] split at the interior `breaks` (kinks of the integrand).
pub fn integrate_with_breaks<F>(
    mut f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    rel_tol: f64,
    abs_tol: f64,
    budget: &Budget,
) -> Result<Estimate>
where
    F: FnMut(f64) -> f64,
{
    let mut points = vec![a];
    points.extend(breaks.iter().copied().filter(|&p| p > a && p < b));
    points.push(b);
    points.sort_by(f64::total_cmp);
    let n = (points.len() - 1) as f64;
    let mut total = Estimate { value: 0.0, error: 0.0 };
    for w in points.windows(2) {
        let part = integrate(&mut f, w[0], w[1], rel_tol, abs_tol / n, budget)?;
        total.value += part.value;
        total.error += part.error;
    }
    Ok(total)
}
