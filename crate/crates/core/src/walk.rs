//! From a weight matrix to the Weierstrass curve and its rational base point.
//!
//! The walk's kernel is
//!
//! ```text
//! Q(x, y) = xy (sum p(i,j) x^i y^j - 1)
//!         = a(x) y^2 + b(x) y + c(x)
//!         = ã(y) x^2 + b̃(y) x + c̃(y)
//! ```
//!
//! Its two partial discriminants are quartics sharing the same Eisenstein
//! invariants `D`, `E`; the associated curve is `y^2 = 4x^3 - g2 x - g3` with
//! `g2 = D`, `g3 = -E`, and the QRT map acts on it as translation by the
//! rational point returned by [`base_point`].

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::{self, Mat3};
use crate::poly::Poly;
use crate::rational::{format_rational, int, parse_rational, pow, rat, Rational};

/// Coefficients of a quadratic, highest degree first.
pub type Quadratic = [Rational; 3];
/// Coefficients of a quartic, highest degree first.
pub type Quartic = [Rational; 5];

/// Row/column order of the grid: index 0 is step `+1`, 1 is `0`, 2 is `-1`.
pub const STEPS: [i8; 3] = [1, 0, -1];

fn slot(step: i8) -> usize {
    match step {
        1 => 0,
        0 => 1,
        -1 => 2,
        _ => panic!("step {step} outside -1..=1"),
    }
}

/// The nine transition weights `p(i, j)`, rows `i = 1, 0, -1` and columns
/// `j = 1, 0, -1`. The centre holds the raw stay weight `p(0,0)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightMatrix {
    grid: [[Rational; 3]; 3],
}

impl WeightMatrix {
    /// Validates a grid of weights, optionally rescaling it to sum 1 first.
    pub fn new(mut grid: [[Rational; 3]; 3], normalize: bool) -> Result<Self> {
        for (r, row) in grid.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                if v.is_negative() {
                    return Err(Error::NegativeWeight {
                        i: STEPS[r],
                        j: STEPS[c],
                        value: format_rational(v),
                    });
                }
            }
        }
        let sum: Rational = grid.iter().flatten().sum();
        if normalize && !sum.is_zero() {
            for v in grid.iter_mut().flatten() {
                *v /= &sum;
            }
        } else if !sum.is_one() {
            return Err(Error::SumNotOne {
                sum: format_rational(&sum),
            });
        }
        if grid[1][1].is_one() {
            return Err(Error::AllMassAtOrigin);
        }
        Ok(WeightMatrix { grid })
    }

    /// Builds a walk from integer step counts, normalized to sum 1.
    pub fn from_counts(counts: [[i64; 3]; 3]) -> Result<Self> {
        Self::new(counts.map(|row| row.map(int)), true)
    }

    pub fn p(&self, i: i8, j: i8) -> &Rational {
        &self.grid[slot(i)][slot(j)]
    }

    pub fn grid(&self) -> &[[Rational; 3]; 3] {
        &self.grid
    }

    /// The matrix ℙ: the grid with `p(0,0) - 1` in the centre.
    pub fn shifted_matrix(&self) -> Mat3 {
        let mut m = self.grid.clone();
        m[1][1] -= Rational::one();
        m
    }

    pub fn det_p(&self) -> Rational {
        matrix::det(&self.shifted_matrix())
    }
}

/// Parses a 3×3 grid of rational strings into a validated [`WeightMatrix`].
pub fn parse_weights<S: AsRef<str>>(raw: &[[S; 3]; 3], normalize: bool) -> Result<WeightMatrix> {
    let mut grid: [[Rational; 3]; 3] = Default::default();
    for (r, row) in raw.iter().enumerate() {
        for (c, s) in row.iter().enumerate() {
            grid[r][c] = parse_rational(s.as_ref())?;
        }
    }
    WeightMatrix::new(grid, normalize)
}

/// `a, b, c` in `x` and `ã, b̃, c̃` in `y`, each highest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelCoefficients {
    pub a: Quadratic,
    pub b: Quadratic,
    pub c: Quadratic,
    pub a_tilde: Quadratic,
    pub b_tilde: Quadratic,
    pub c_tilde: Quadratic,
}

impl KernelCoefficients {
    /// Reads the coefficients off the weights without any validity check.
    pub fn raw(w: &WeightMatrix) -> Self {
        let m = w.shifted_matrix();
        let col = |c: usize| [m[0][c].clone(), m[1][c].clone(), m[2][c].clone()];
        KernelCoefficients {
            a: col(0),
            b: col(1),
            c: col(2),
            a_tilde: m[0].clone(),
            b_tilde: m[1].clone(),
            c_tilde: m[2].clone(),
        }
    }
}

/// Kernel coefficients, rejecting kernels that are not quadratic in both variables.
pub fn kernel_coefficients(w: &WeightMatrix) -> Result<KernelCoefficients> {
    let k = KernelCoefficients::raw(w);
    let vanishes = |q: &Quadratic| q.iter().all(Zero::is_zero);
    for (q, name) in [
        (&k.a, "a(x)"),
        (&k.c, "c(x)"),
        (&k.a_tilde, "ã(y)"),
        (&k.c_tilde, "c̃(y)"),
    ] {
        if vanishes(q) {
            return Err(Error::NotBiquadratic(name));
        }
    }
    Ok(k)
}

fn discriminant_of(a: &Quadratic, b: &Quadratic, c: &Quadratic) -> Quartic {
    let (a, b, c) = (Poly::from_descending(a), Poly::from_descending(b), Poly::from_descending(c));
    let d = &(&b * &b) - &(&a * &c).scale(&int(4));
    let v = d.to_descending(5);
    std::array::from_fn(|k| v[k].clone())
}

/// Returns `(Δ1(y), Δ2(x))` with `Δ1 = b̃² - 4ãc̃` and `Δ2 = b² - 4ac`.
pub fn partial_discriminants(k: &KernelCoefficients) -> (Quartic, Quartic) {
    (
        discriminant_of(&k.a_tilde, &k.b_tilde, &k.c_tilde),
        discriminant_of(&k.a, &k.b, &k.c),
    )
}

/// Eisenstein invariants `(D, E)` of `f = a x^4 + 4b x^3 + 6c x^2 + 4d x + e`,
/// given the plain coefficients of `f` highest degree first.
pub fn eisenstein_invariants(f: &Quartic) -> (Rational, Rational) {
    let a = &f[0];
    let b = &f[1] / int(4);
    let c = &f[2] / int(6);
    let d = &f[3] / int(4);
    let e = &f[4];

    let big_d = a * e + int(3) * &c * &c - int(4) * &b * &d;
    let big_e = a * &d * &d + &b * &b * e - a * &c * e - int(2) * &b * &c * &d + &c * &c * &c;
    (big_d, big_e)
}

/// Everything derived from the kernel: coefficients, partial discriminants and
/// the Eisenstein invariants of `Δ2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelData {
    pub coefficients: KernelCoefficients,
    pub delta1: Quartic,
    pub delta2: Quartic,
    pub d: Rational,
    pub e: Rational,
}

impl KernelData {
    pub fn new(coefficients: KernelCoefficients) -> Self {
        let (delta1, delta2) = partial_discriminants(&coefficients);
        let (d, e) = eisenstein_invariants(&delta2);
        KernelData {
            coefficients,
            delta1,
            delta2,
            d,
            e,
        }
    }

    pub fn from_weights(w: &WeightMatrix) -> Result<Self> {
        Ok(Self::new(kernel_coefficients(w)?))
    }
}

/// `y^2 = 4x^3 - g2 x - g3` over the rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeierstrassCurve {
    pub g2: Rational,
    pub g3: Rational,
    /// `g2^3 - 27 g3^2`
    pub disc: Rational,
}

impl WeierstrassCurve {
    pub fn new(g2: Rational, g3: Rational) -> Self {
        let disc = pow(&g2, 3) - int(27) * &g3 * &g3;
        WeierstrassCurve { g2, g3, disc }
    }

    pub fn is_singular(&self) -> bool {
        self.disc.is_zero()
    }

    /// Right-hand side `4x^3 - g2 x - g3`.
    pub fn rhs(&self, x: &Rational) -> Rational {
        int(4) * pow(x, 3) - &self.g2 * x - &self.g3
    }

    pub fn contains(&self, p: &CurvePoint) -> bool {
        match p {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => y * y == self.rhs(x),
        }
    }
}

/// The curve `g2 = D(Δ2)`, `g3 = -E(Δ2)`, after checking that `Δ1` yields the
/// same invariants.
pub fn curve_from_kernel(k: &KernelData) -> Result<WeierstrassCurve> {
    let (d1, e1) = eisenstein_invariants(&k.delta1);
    if d1 != k.d {
        return Err(Error::InvariantMismatch { which: "D" });
    }
    if e1 != k.e {
        return Err(Error::InvariantMismatch { which: "E" });
    }
    Ok(WeierstrassCurve::new(k.d.clone(), -k.e.clone()))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CurvePoint {
    Infinity,
    Affine { x: Rational, y: Rational },
}

impl CurvePoint {
    pub fn affine(x: Rational, y: Rational) -> Self {
        CurvePoint::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    pub fn coords(&self) -> Option<(&Rational, &Rational)> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine { x, y } => Some((x, y)),
        }
    }
}

fn base_x_with_centre(w: &WeightMatrix, centre: &Rational) -> Rational {
    let p = |i, j| w.p(i, j);
    (centre * centre - int(4) * p(0, -1) * p(0, 1) - int(4) * p(-1, 0) * p(1, 0)
        + int(8) * p(-1, 1) * p(1, -1)
        + int(8) * p(-1, -1) * p(1, 1))
        / int(12)
}

/// The image `Ω3 = (X, Y)` of the point at infinity under the QRT translation.
///
/// `X` squares the centre entry of ℙ, i.e. `p(0,0) - 1`. Squaring the raw
/// `p(0,0)` instead (see [`base_point_x_raw_centre`]) gives a point that is off
/// the curve for every genus-1 walk.
pub fn base_point(w: &WeightMatrix) -> CurvePoint {
    let centre = w.p(0, 0) - Rational::one();
    CurvePoint::affine(base_x_with_centre(w, &centre), -w.det_p())
}

/// `X` evaluated with the raw stay weight `p(0,0)` squared. Kept for reports.
pub fn base_point_x_raw_centre(w: &WeightMatrix) -> Rational {
    base_x_with_centre(w, w.p(0, 0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GenusReason {
    SingularCurve,
    Delta1RepeatedRoot,
    Delta2RepeatedRoot,
}

impl GenusReason {
    pub fn tag(self) -> &'static str {
        match self {
            GenusReason::SingularCurve => "singular-curve",
            GenusReason::Delta1RepeatedRoot => "delta1-repeated-root",
            GenusReason::Delta2RepeatedRoot => "delta2-repeated-root",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GenusVerdict {
    One,
    ZeroDegenerate(GenusReason),
}

/// Genus 1 requires a nonsingular curve and squarefree partial discriminants.
pub fn genus_gate(curve: &WeierstrassCurve, delta1: &Quartic, delta2: &Quartic) -> GenusVerdict {
    if curve.is_singular() {
        return GenusVerdict::ZeroDegenerate(GenusReason::SingularCurve);
    }
    if !Poly::from_descending(delta2).is_squarefree() {
        return GenusVerdict::ZeroDegenerate(GenusReason::Delta2RepeatedRoot);
    }
    if !Poly::from_descending(delta1).is_squarefree() {
        return GenusVerdict::ZeroDegenerate(GenusReason::Delta1RepeatedRoot);
    }
    GenusVerdict::One
}

/// The compass walk used throughout the tests: E 1/2, N 1/4, W 1/8, S 1/8.
pub fn compass_example() -> WeightMatrix {
    let z = || int(0);
    WeightMatrix::new(
        [
            [z(), rat(1, 2), z()],
            [rat(1, 4), z(), rat(1, 8)],
            [z(), rat(1, 8), z()],
        ],
        false,
    )
    .expect("valid compass walk")
}
