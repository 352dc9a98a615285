//! Exact classification of the group of a weighted nearest-neighbour walk in
//! the quarter plane.
//!
//! A rational weight matrix determines a biquadratic kernel, whose partial
//! discriminants give a Weierstrass curve `y^2 = 4x^3 - g2 x - g3` over the
//! rationals together with a rational point `Ω3`. The QRT map of the kernel
//! acts on that curve as translation by `Ω3`, so the group generated by the
//! two involutions has order `2·ord(Ω3)`, finite only when `Ω3` is torsion,
//! which caps it at 24.

pub mod classify;
pub mod elliptic;
pub mod error;
pub mod matrix;
pub mod poly;
pub mod qrt;
pub mod rational;
pub mod report;
pub mod scan;
pub mod walk;


pub use classify::{classify, Degeneracy, GroupOrderResult, Verdict, WalkCurve};
pub use elliptic::{TorsionOrder, TorsionVerdict};
pub use error::{Error, Result};
pub use rational::Rational;
pub use walk::{parse_weights, CurvePoint, WeierstrassCurve, WeightMatrix};
