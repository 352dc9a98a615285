//! Exact group law on `y^2 = 4x^3 - g2 x - g3`, division polynomials in both
//! normalizations, and torsion orders of rational points.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{int, pow, Rational};
use crate::walk::{CurvePoint, WeierstrassCurve};

/// Largest order a rational torsion point can have.
pub const MAX_TORSION_ORDER: u32 = 12;

/// `y^2 = x^3 + a x + b`, related to `y^2 = 4x^3 - g2 x - g3` by
/// `a = -g2/4`, `b = -g3/4` and `y_short = y/2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortCurve {
    pub a: Rational,
    pub b: Rational,
}

impl ShortCurve {
    pub fn from_weierstrass(c: &WeierstrassCurve) -> Self {
        ShortCurve {
            a: -&c.g2 / int(4),
            b: -&c.g3 / int(4),
        }
    }

    pub fn is_singular(&self) -> bool {
        (int(4) * pow(&self.a, 3) + int(27) * &self.b * &self.b).is_zero()
    }

    pub fn contains(&self, x: &Rational, y: &Rational) -> bool {
        y * y == pow(x, 3) + &self.a * x + &self.b
    }
}

/// Maps a point of the Weierstrass curve to short-curve coordinates.
pub fn to_short(p: &CurvePoint) -> CurvePoint {
    match p {
        CurvePoint::Infinity => CurvePoint::Infinity,
        CurvePoint::Affine { x, y } => CurvePoint::affine(x.clone(), y / int(2)),
    }
}

fn from_short(p: CurvePoint) -> CurvePoint {
    match p {
        CurvePoint::Infinity => CurvePoint::Infinity,
        CurvePoint::Affine { x, y } => CurvePoint::affine(x, y * int(2)),
    }
}

pub fn point_neg(p: &CurvePoint) -> CurvePoint {
    match p {
        CurvePoint::Infinity => CurvePoint::Infinity,
        CurvePoint::Affine { x, y } => CurvePoint::affine(x.clone(), -y),
    }
}

fn check_on(c: &WeierstrassCurve, p: &CurvePoint) -> Result<()> {
    if c.contains(p) {
        return Ok(());
    }
    let (x, y) = p.coords().expect("infinity is always on the curve");
    Err(Error::NotOnCurve {
        x: x.to_string(),
        y: y.to_string(),
    })
}

/// Chord-tangent addition, carried out in short-curve coordinates.
pub fn point_add(p: &CurvePoint, q: &CurvePoint, c: &WeierstrassCurve) -> Result<CurvePoint> {
    if c.is_singular() {
        return Err(Error::SingularCurve);
    }
    check_on(c, p)?;
    check_on(c, q)?;
    let a = -&c.g2 / int(4);
    let (ps, qs) = (to_short(p), to_short(q));
    let ((x1, y1), (x2, y2)) = match (ps.coords(), qs.coords()) {
        (None, _) => return Ok(q.clone()),
        (_, None) => return Ok(p.clone()),
        (Some(u), Some(v)) => (u, v),
    };
    let slope = if x1 == x2 {
        if (y1 + y2).is_zero() {
            return Ok(CurvePoint::Infinity);
        }
        // doubling; y1 == y2 != 0 here
        (int(3) * x1 * x1 + &a) / (int(2) * y1)
    } else {
        (y2 - y1) / (x2 - x1)
    };
    let x3 = &slope * &slope - x1 - x2;
    let y3 = &slope * (x1 - &x3) - y1;
    Ok(from_short(CurvePoint::affine(x3, y3)))
}

/// `n·P` by repeated addition; `n = 0` gives the identity.
pub fn scalar_multiple(n: u32, p: &CurvePoint, c: &WeierstrassCurve) -> Result<CurvePoint> {
    let mut acc = CurvePoint::Infinity;
    for _ in 0..n {
        acc = point_add(&acc, p, c)?;
    }
    Ok(acc)
}

/// Memoized evaluation of the division-polynomial recursion at one point,
/// seeded with the values of the first five members.
///
/// Both normalizations share the recursion
/// `f(2m+1) = f(m+2) f(m)^3 - f(m-1) f(m+1)^3` and
/// `f(2m) = f(m) (f(m+2) f(m-1)^2 - f(m-2) f(m+1)^2) / f(2)`.
#[derive(Debug, Clone)]
struct DivisionSequence {
    values: Vec<Option<Rational>>,
}

impl DivisionSequence {
    fn new(base: [Rational; 5]) -> Self {
        DivisionSequence {
            values: base.into_iter().map(Some).collect(),
        }
    }

    fn get(&mut self, n: usize) -> Result<Rational> {
        if n >= self.values.len() {
            self.values.resize(n + 1, None);
        }
        if let Some(v) = &self.values[n] {
            return Ok(v.clone());
        }
        let v = if n % 2 == 1 {
            let m = (n - 1) / 2;
            let (f0, f1, f2, f3) = (self.get(m + 2)?, self.get(m)?, self.get(m - 1)?, self.get(m + 1)?);
            f0 * pow(&f1, 3) - f2 * pow(&f3, 3)
        } else {
            let m = n / 2;
            let two = self.get(2)?;
            if two.is_zero() {
                return Err(Error::DivisionByZeroY);
            }
            let fm = self.get(m)?;
            let inner = self.get(m + 2)? * pow(&self.get(m - 1)?, 2) - self.get(m - 2)? * pow(&self.get(m + 1)?, 2);
            fm * inner / two
        };
        self.values[n] = Some(v.clone());
        Ok(v)
    }
}

fn check_index(n: u32) -> Result<usize> {
    if (1..=MAX_TORSION_ORDER).contains(&n) {
        Ok(n as usize)
    } else {
        Err(Error::OutOfMazurRange(n))
    }
}

/// Textbook division polynomials `ψn` of a short curve, evaluated at `(x, y)`.
#[derive(Debug, Clone)]
pub struct ShortDivision {
    seq: DivisionSequence,
}

impl ShortDivision {
    pub fn new(s: &ShortCurve, x: &Rational, y: &Rational) -> Self {
        let (a, b) = (&s.a, &s.b);
        let psi3 = int(3) * pow(x, 4) + int(6) * a * x * x + int(12) * b * x - a * a;
        let psi4 = int(4)
            * y
            * (pow(x, 6) + int(5) * a * pow(x, 4) + int(20) * b * pow(x, 3)
                - int(5) * a * a * x * x
                - int(4) * a * b * x
                - int(8) * b * b
                - pow(a, 3));
        ShortDivision {
            seq: DivisionSequence::new([Rational::zero(), Rational::one(), int(2) * y, psi3, psi4]),
        }
    }

    pub fn value(&mut self, n: u32) -> Result<Rational> {
        self.seq.get(check_index(n)?)
    }
}

/// `ψn(P)` on the short curve.
pub fn short_division_value(n: u32, s: &ShortCurve, x: &Rational, y: &Rational) -> Result<Rational> {
    ShortDivision::new(s, x, y).value(n)
}

/// Closed form of `Ψ3` in `g2`, `g3`: `48x^4 - 24 g2 x^2 - 48 g3 x - g2^2`.
pub fn psi3_closed_form(c: &WeierstrassCurve, x: &Rational) -> Rational {
    let (g2, g3) = (&c.g2, &c.g3);
    int(48) * pow(x, 4) - int(24) * g2 * x * x - int(48) * g3 * x - g2 * g2
}

/// The sextic factor of `Ψ4 = y · sextic(x)`.
pub fn psi4_sextic(g2: &Rational, g3: &Rational, x: &Rational) -> Rational {
    int(64) * pow(x, 6) - int(80) * g2 * pow(x, 4) - int(320) * g3 * pow(x, 3) - int(20) * g2 * g2 * x * x
        - int(16) * g2 * g3 * x
        + pow(g2, 3)
        - int(32) * g3 * g3
}

/// Division polynomials `Ψn` of `y^2 = 4x^3 - g2 x - g3`, evaluated at `(x, y)`.
///
/// `Ψ1 = 1`, `Ψ2 = y` and the closed forms for `Ψ3`, `Ψ4` are kept as stated.
/// Those two closed forms are 16 and 32 times the textbook `ψ3`, `ψ4` under
/// the change of variables, which the recursion does not tolerate: seeded
/// with them it stops vanishing at 5-torsion. Indices from 5 on are
/// therefore produced by the recursion seeded with `Ψ3/16` and `Ψ4/32`.
#[derive(Debug, Clone)]
pub struct WeierstrassDivision {
    psi3: Rational,
    psi4: Rational,
    seq: DivisionSequence,
}

impl WeierstrassDivision {
    pub fn new(c: &WeierstrassCurve, x: &Rational, y: &Rational) -> Self {
        let psi3 = psi3_closed_form(c, x);
        let psi4 = y * psi4_sextic(&c.g2, &c.g3, x);
        let seq = DivisionSequence::new([
            Rational::zero(),
            Rational::one(),
            y.clone(),
            &psi3 / int(16),
            &psi4 / int(32),
        ]);
        WeierstrassDivision { psi3, psi4, seq }
    }

    pub fn value(&mut self, n: u32) -> Result<Rational> {
        match check_index(n)? {
            3 => Ok(self.psi3.clone()),
            4 => Ok(self.psi4.clone()),
            k => self.seq.get(k),
        }
    }
}

/// `Ψn(P)` on the Weierstrass curve.
pub fn division_value(n: u32, c: &WeierstrassCurve, x: &Rational, y: &Rational) -> Result<Rational> {
    WeierstrassDivision::new(c, x, y).value(n)
}

/// `Ψn(P)` from the recursion seeded literally with the closed forms of `Ψ3`
/// and `Ψ4`. Only used to log how far the literal recursion strays.
pub fn division_value_literal(n: u32, c: &WeierstrassCurve, x: &Rational, y: &Rational) -> Result<Rational> {
    let psi3 = psi3_closed_form(c, x);
    let psi4 = y * psi4_sextic(&c.g2, &c.g3, x);
    DivisionSequence::new([Rational::zero(), Rational::one(), y.clone(), psi3, psi4]).get(check_index(n)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TorsionOrder {
    Finite(u32),
    Infinite,
}

impl TorsionOrder {
    pub fn finite(self) -> Option<u32> {
        match self {
            TorsionOrder::Finite(n) => Some(n),
            TorsionOrder::Infinite => None,
        }
    }

    fn from_option(o: Option<u32>) -> Self {
        o.map_or(TorsionOrder::Infinite, TorsionOrder::Finite)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Evidence {
    RepeatedAddition,
    DivisionPolynomial,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TorsionVerdict {
    pub order: TorsionOrder,
    pub evidence: Evidence,
}

/// Smallest `n <= 12` with `n·P = O`, by repeated addition.
pub fn order_by_addition(p: &CurvePoint, c: &WeierstrassCurve) -> Result<Option<u32>> {
    let mut acc = p.clone();
    for n in 1..=MAX_TORSION_ORDER {
        if acc.is_infinity() {
            return Ok(Some(n));
        }
        if n < MAX_TORSION_ORDER {
            acc = point_add(&acc, p, c)?;
        }
    }
    Ok(None)
}

/// Order of an affine point from the vanishing of `Ψn`, for `n <= 12`.
///
/// `Ψn(P) = 0` only certifies that the order divides `n`, so the order is the
/// least divisor `d` of the first vanishing index with `Ψd(P) = 0`.
pub fn order_by_division(x: &Rational, y: &Rational, c: &WeierstrassCurve) -> Result<Option<u32>> {
    if y.is_zero() {
        return Ok(Some(2));
    }
    let mut div = WeierstrassDivision::new(c, x, y);
    for n in 2..=MAX_TORSION_ORDER {
        if div.value(n)?.is_zero() {
            for d in (2..n).filter(|d| n % d == 0) {
                if div.value(d)?.is_zero() {
                    return Ok(Some(d));
                }
            }
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Torsion order of `P`, computed by repeated addition and cross-checked
/// against the division polynomials.
pub fn torsion_order(p: &CurvePoint, c: &WeierstrassCurve) -> Result<TorsionVerdict> {
    if c.is_singular() {
        return Err(Error::SingularCurve);
    }
    check_on(c, p)?;
    let addition = order_by_addition(p, c)?;
    let (order, evidence) = match p.coords() {
        None => (addition, Evidence::RepeatedAddition),
        Some((x, y)) => {
            let division = order_by_division(x, y, c)?;
            if division != addition {
                return Err(Error::MethodDisagreement { division, addition });
            }
            (addition, Evidence::Both)
        }
    };
    if let Some(n @ 11) = order {
        return Err(Error::MazurViolation(n));
    }
    Ok(TorsionVerdict {
        order: TorsionOrder::from_option(order),
        evidence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    // y^2 = 4x^3 + 1, i.e. g2 = 0, g3 = -1, with the 3-torsion point (0, 1).
    fn cube_curve() -> WeierstrassCurve {
        WeierstrassCurve::new(int(0), int(-1))
    }

    fn pt(x: Rational, y: Rational) -> CurvePoint {
        CurvePoint::affine(x, y)
    }

    #[test]
    fn negation() {
        assert_eq!(point_neg(&CurvePoint::Infinity), CurvePoint::Infinity);
        assert_eq!(point_neg(&pt(int(0), int(1))), pt(int(0), int(-1)));
    }

    #[test]
    fn identity_and_inverse() {
        let c = cube_curve();
        let p = pt(int(0), int(1));
        assert_eq!(point_add(&p, &CurvePoint::Infinity, &c).unwrap(), p);
        assert_eq!(point_add(&CurvePoint::Infinity, &p, &c).unwrap(), p);
        assert_eq!(point_add(&p, &point_neg(&p), &c).unwrap(), CurvePoint::Infinity);
    }

    #[test]
    fn doubling_three_torsion_point() {
        let c = cube_curve();
        let p = pt(int(0), int(1));
        let two_p = point_add(&p, &p, &c).unwrap();
        assert!(c.contains(&two_p));
        assert_eq!(two_p, point_neg(&p));
        assert_eq!(scalar_multiple(3, &p, &c).unwrap(), CurvePoint::Infinity);
        assert_eq!(scalar_multiple(1, &p, &c).unwrap(), p);
    }

    #[test]
    fn two_torsion_doubles_to_identity() {
        // 4x^3 - x = x(2x - 1)(2x + 1): roots 0, ±1/2
        let c = WeierstrassCurve::new(int(1), int(0));
        for x in [int(0), rat(1, 2), rat(-1, 2)] {
            let p = pt(x, int(0));
            assert_eq!(scalar_multiple(2, &p, &c).unwrap(), CurvePoint::Infinity);
            let v = torsion_order(&p, &c).unwrap();
            assert_eq!(v.order, TorsionOrder::Finite(2));
        }
    }

    #[test]
    fn off_curve_point_is_rejected() {
        let c = cube_curve();
        let bad = pt(int(1), int(1));
        assert!(matches!(point_add(&bad, &bad, &c), Err(Error::NotOnCurve { .. })));
        assert!(matches!(torsion_order(&bad, &c), Err(Error::NotOnCurve { .. })));
    }

    #[test]
    fn singular_curve_has_no_group_law() {
        let c = WeierstrassCurve::new(int(0), int(0));
        let o = CurvePoint::Infinity;
        assert_eq!(point_add(&o, &o, &c), Err(Error::SingularCurve));
    }

    #[test]
    fn short_division_base_cases() {
        let s = ShortCurve { a: int(0), b: rat(1, 4) };
        let (x, y) = (int(0), rat(1, 2));
        assert!(s.contains(&x, &y));
        assert_eq!(short_division_value(1, &s, &x, &y).unwrap(), int(1));
        assert_eq!(short_division_value(2, &s, &x, &y).unwrap(), int(1));
        assert_eq!(short_division_value(3, &s, &x, &y).unwrap(), int(0));
        assert_eq!(short_division_value(6, &s, &x, &y).unwrap(), int(0));
        assert!(!short_division_value(4, &s, &x, &y).unwrap().is_zero());
    }

    #[test]
    fn weierstrass_division_base_cases() {
        let c = cube_curve();
        let (x, y) = (int(0), int(1));
        assert_eq!(division_value(2, &c, &x, &y).unwrap(), y);
        assert_eq!(division_value(3, &c, &x, &y).unwrap(), int(0));
        let c2 = WeierstrassCurve::new(int(1), int(0));
        assert_eq!(division_value(4, &c2, &rat(1, 2), &int(0)).unwrap(), int(0));
        assert_eq!(division_value(6, &c2, &rat(1, 2), &int(0)), Err(Error::DivisionByZeroY));
        assert_eq!(division_value(13, &c, &x, &y), Err(Error::OutOfMazurRange(13)));
    }

    #[test]
    fn closed_form_quartic_and_sextic_are_scaled_textbook_forms() {
        // sample points: (0, 1) on the cube curve, and 2P on a generic curve
        let c = WeierstrassCurve::new(rat(19, 768), rat(-5, 6912));
        let s = ShortCurve::from_weierstrass(&c);
        for x in [int(0), rat(5, 96), rat(-7, 3), rat(11, 2)] {
            let y = rat(3, 5); // the closed forms are polynomial identities; y need not be on the curve
            let ys = &y / int(2);
            let sd3 = ShortDivision::new(&s, &x, &ys).value(3).unwrap();
            let sd4 = ShortDivision::new(&s, &x, &ys).value(4).unwrap();
            assert_eq!(psi3_closed_form(&c, &x), int(16) * sd3);
            assert_eq!(&y * psi4_sextic(&c.g2, &c.g3, &x), int(32) * sd4);
        }
    }

    #[test]
    fn three_torsion_orders() {
        let c = cube_curve();
        let v = torsion_order(&pt(int(0), int(1)), &c).unwrap();
        assert_eq!(v.order, TorsionOrder::Finite(3));
        assert_eq!(v.evidence, Evidence::Both);
        let o = torsion_order(&CurvePoint::Infinity, &c).unwrap();
        assert_eq!(o.order, TorsionOrder::Finite(1));
        assert_eq!(o.evidence, Evidence::RepeatedAddition);
    }

    #[test]
    fn point_of_infinite_order() {
        // y^2 = 4x^3 - 4x + 4 is the short curve y^2 = x^3 - x + 1, where (1, 1)
        // generates the Mordell-Weil group (rank 1, trivial torsion).
        let c = WeierstrassCurve::new(int(4), int(-4));
        let p = pt(int(1), int(2));
        assert_eq!(torsion_order(&p, &c).unwrap().order, TorsionOrder::Infinite);
    }
}
