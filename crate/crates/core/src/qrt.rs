//! Floating-point iteration of the QRT map `δ = η ∘ ξ` directly on the
//! kernel curve `Q(x, y) = 0`. Independent of the exact pipeline; used to
//! cross-check finite orders numerically.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::elliptic::MAX_TORSION_ORDER;
use crate::error::{Error, Result};
use crate::rational::to_f64;
use crate::walk::{KernelCoefficients, Quadratic};

pub const POLE_TOLERANCE: f64 = 1e-12;
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;
pub const RETURN_TOLERANCE: f64 = 1e-6;
pub const DEFAULT_SEEDS: usize = 16;
const SEED_RANGE: f64 = 2.0;
/// Seeds closer than this (relative) to a branch point or pole are redrawn.
const BRANCH_AVOIDANCE: f64 = 1e-3;
const MAX_DRAWS: usize = 32;

type Quad = [Complex64; 3];

fn to_quad(q: &Quadratic) -> Quad {
    std::array::from_fn(|k| Complex64::new(to_f64(&q[k]), 0.0))
}

fn eval(q: &Quad, t: Complex64) -> Complex64 {
    (q[0] * t + q[1]) * t + q[2]
}

/// Kernel coefficients in floating point.
#[derive(Debug, Clone)]
pub struct FloatKernel {
    a: Quad,
    b: Quad,
    c: Quad,
    a_tilde: Quad,
    b_tilde: Quad,
}

impl FloatKernel {
    pub fn new(k: &KernelCoefficients) -> Self {
        FloatKernel {
            a: to_quad(&k.a),
            b: to_quad(&k.b),
            c: to_quad(&k.c),
            a_tilde: to_quad(&k.a_tilde),
            b_tilde: to_quad(&k.b_tilde),
        }
    }

    /// `|Q(x, y)|` relative to the sum of the magnitudes of its three terms.
    pub fn residual(&self, s: &QrtState) -> f64 {
        let terms = [eval(&self.a, s.x) * s.y * s.y, eval(&self.b, s.x) * s.y, eval(&self.c, s.x)];
        let scale: f64 = terms.iter().map(|t| t.norm()).sum();
        let q: Complex64 = terms.iter().sum();
        if scale == 0.0 {
            0.0
        } else {
            q.norm() / scale
        }
    }
}

/// A point `(x, y)` of the complex kernel curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QrtState {
    pub x: Complex64,
    pub y: Complex64,
}

impl QrtState {
    fn distance(&self, other: &QrtState) -> f64 {
        let scale = 1.0 + other.x.norm() + other.y.norm();
        ((self.x - other.x).norm() + (self.y - other.y).norm()) / scale
    }
}

/// `ξ(x, y) = (x, -b(x)/a(x) - y)`: swap the two roots in `y`.
pub fn vertical_switch(s: &QrtState, k: &FloatKernel) -> Result<QrtState> {
    let den = eval(&k.a, s.x);
    if den.norm() < POLE_TOLERANCE {
        return Err(Error::NearPole(den.norm()));
    }
    Ok(QrtState {
        x: s.x,
        y: -eval(&k.b, s.x) / den - s.y,
    })
}

/// `η(x, y) = (-b̃(y)/ã(y) - x, y)`: swap the two roots in `x`.
pub fn horizontal_switch(s: &QrtState, k: &FloatKernel) -> Result<QrtState> {
    let den = eval(&k.a_tilde, s.y);
    if den.norm() < POLE_TOLERANCE {
        return Err(Error::NearPole(den.norm()));
    }
    Ok(QrtState {
        x: -eval(&k.b_tilde, s.y) / den - s.x,
        y: s.y,
    })
}

/// One application of `δ = η ∘ ξ`.
pub fn qrt_step(s: &QrtState, k: &FloatKernel) -> Result<QrtState> {
    horizontal_switch(&vertical_switch(s, k)?, k)
}

/// A point on the curve above `x0`, or `None` if `x0` is too close to a
/// branch point or a pole of the switches.
pub fn seed_state(x0: f64, k: &FloatKernel) -> Option<QrtState> {
    let x = Complex64::new(x0, 0.0);
    let (a, b, c) = (eval(&k.a, x), eval(&k.b, x), eval(&k.c, x));
    let scale = a.norm() + b.norm() + c.norm();
    if a.norm() < BRANCH_AVOIDANCE * scale {
        return None;
    }
    let disc = b * b - 4.0 * a * c;
    if disc.norm() < BRANCH_AVOIDANCE * scale * scale {
        return None;
    }
    let y = (-b + disc.sqrt()) / (2.0 * a);
    let s = QrtState { x, y };
    // the second switch must be defined at the start too
    let den = eval(&k.a_tilde, y);
    if den.norm() < BRANCH_AVOIDANCE * (1.0 + y.norm() * y.norm()) {
        return None;
    }
    Some(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrbitClosure {
    /// Smallest `n` with `δⁿ(s) = s`, agreed on by at least 2/3 of the seeds.
    Order(u32),
    /// At least 2/3 of the seeds never returned within the step budget.
    NoClosure,
    /// No outcome reached the 2/3 quorum.
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitEstimate {
    pub closure: OrbitClosure,
    pub seeds_used: usize,
    pub seeds_agreeing: usize,
    /// Largest relative residual `|Q(x, y)|` met along the agreeing orbits.
    pub residual: f64,
}

/// Outcome of one seed: first return time (if any) and worst residual.
fn run_seed(k: &FloatKernel, rng: &mut ChaCha8Rng, max_n: u32) -> Option<(Option<u32>, f64)> {
    let start = (0..MAX_DRAWS).find_map(|_| seed_state(rng.gen_range(-SEED_RANGE..=SEED_RANGE), k))?;
    let mut residual = k.residual(&start);
    let mut s = start;
    for n in 1..=max_n {
        s = qrt_step(&s, k).ok()?;
        residual = residual.max(k.residual(&s));
        if s.distance(&start) < RETURN_TOLERANCE {
            return Some((Some(n), residual));
        }
    }
    Some((None, residual))
}

/// Estimates the order of `δ` from `seeds` random starting points.
///
/// Each seed gets its own ChaCha stream derived from `rng_seed`, so the result
/// is reproducible and independent of evaluation order.
pub fn estimate_orbit_order(k: &KernelCoefficients, seeds: usize, max_n: u32, rng_seed: u64) -> Result<OrbitEstimate> {
    let fk = FloatKernel::new(k);
    let max_n = max_n.min(MAX_TORSION_ORDER);
    let outcomes: Vec<(Option<u32>, f64)> = (0..seeds)
        .filter_map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
            rng.set_stream(i as u64);
            run_seed(&fk, &mut rng, max_n)
        })
        .collect();
    if outcomes.is_empty() {
        return Err(Error::AllSeedsDegenerate);
    }

    let mut tally: Vec<(Option<u32>, usize)> = Vec::new();
    for (o, _) in &outcomes {
        match tally.iter_mut().find(|(t, _)| t == o) {
            Some((_, c)) => *c += 1,
            None => tally.push((*o, 1)),
        }
    }
    let (best, count) = tally.into_iter().max_by_key(|&(o, c)| (c, std::cmp::Reverse(o))).unwrap();
    let used = outcomes.len();
    let closure = if 3 * count >= 2 * used {
        best.map_or(OrbitClosure::NoClosure, OrbitClosure::Order)
    } else {
        OrbitClosure::Inconclusive
    };
    let residual = outcomes
        .iter()
        .filter(|(o, _)| *o == best)
        .map(|&(_, r)| r)
        .fold(0.0, f64::max);
    Ok(OrbitEstimate {
        closure,
        seeds_used: used,
        seeds_agreeing: count,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::{compass_example, kernel_coefficients, WeightMatrix};

    fn kernel(counts: [[i64; 3]; 3]) -> KernelCoefficients {
        kernel_coefficients(&WeightMatrix::from_counts(counts).unwrap()).unwrap()
    }

    #[test]
    fn switches_are_involutions() {
        let k = FloatKernel::new(&kernel([[1, 2, 1], [3, 1, 1], [1, 1, 2]]));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut s = (0..MAX_DRAWS)
            .find_map(|_| seed_state(rng.gen_range(-2.0..2.0), &k))
            .unwrap();
        for _ in 0..10 {
            assert!(k.residual(&s) < RESIDUAL_TOLERANCE);
            let back = vertical_switch(&vertical_switch(&s, &k).unwrap(), &k).unwrap();
            assert!(back.distance(&s) < RESIDUAL_TOLERANCE);
            let back = horizontal_switch(&horizontal_switch(&s, &k).unwrap(), &k).unwrap();
            assert!(back.distance(&s) < RESIDUAL_TOLERANCE);
            s = qrt_step(&s, &k).unwrap();
        }
    }

    #[test]
    fn order_two_instance_returns_after_two_steps() {
        let k = FloatKernel::new(&kernel_coefficients(&compass_example()).unwrap());
        let s = seed_state(0.7, &k).unwrap();
        let back = qrt_step(&qrt_step(&s, &k).unwrap(), &k).unwrap();
        assert!(back.distance(&s) < RETURN_TOLERANCE);
    }

    #[test]
    fn compass_orbit_closes_at_two() {
        let est = estimate_orbit_order(&kernel_coefficients(&compass_example()).unwrap(), 16, 12, 1).unwrap();
        assert_eq!(est.closure, OrbitClosure::Order(2));
        assert!(est.residual < RESIDUAL_TOLERANCE);
    }

    #[test]
    fn known_orders_close() {
        for (grid, n) in [
            ([[0, 0, 1], [1, 0, 0], [0, 2, 0]], 3),
            ([[0, 0, 1], [1, 0, 2], [2, 0, 0]], 4),
            ([[0, 1, 1], [1, 0, 2], [1, 2, 1]], 5),
        ] {
            let est = estimate_orbit_order(&kernel(grid), DEFAULT_SEEDS, 12, 3).unwrap();
            assert_eq!(est.closure, OrbitClosure::Order(n), "{grid:?}");
        }
    }

    #[test]
    fn infinite_order_never_closes() {
        let est = estimate_orbit_order(&kernel([[0, 0, 1], [1, 0, 0], [0, 1, 1]]), DEFAULT_SEEDS, 12, 5).unwrap();
        assert_eq!(est.closure, OrbitClosure::NoClosure);
    }

    #[test]
    fn pole_is_reported() {
        let k = FloatKernel::new(&kernel_coefficients(&compass_example()).unwrap());
        // a(x) = x/4 vanishes at x = 0
        let s = QrtState {
            x: Complex64::new(0.0, 0.0),
            y: Complex64::new(1.0, 0.0),
        };
        assert!(matches!(vertical_switch(&s, &k), Err(Error::NearPole(_))));
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let k = kernel([[1, 2, 1], [3, 1, 1], [1, 1, 2]]);
        assert_eq!(
            estimate_orbit_order(&k, 8, 12, 42).unwrap(),
            estimate_orbit_order(&k, 8, 12, 42).unwrap()
        );
    }
}
