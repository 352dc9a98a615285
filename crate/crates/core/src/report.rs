//! Serializable view of a classification. Every rational is rendered as a
//! canonical `p/q` (or `p`) string.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::classify::{Criteria, Degeneracy, GroupOrderResult, Verdict};
use crate::elliptic::TorsionOrder;
use crate::qrt::{OrbitClosure, OrbitEstimate};
use crate::rational::{format_rational, Rational};
use crate::walk::{GenusReason, GenusVerdict};

fn s(q: &Rational) -> String {
    format_rational(q)
}

fn v(qs: &[Rational]) -> Vec<String> {
    qs.iter().map(s).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelReport {
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub c: Vec<String>,
    pub a_tilde: Vec<String>,
    pub b_tilde: Vec<String>,
    pub c_tilde: Vec<String>,
}

/// Integer order or the string `"infinite"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OrderField {
    Finite(u32),
    Infinite(InfiniteTag),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InfiniteTag {
    Infinite,
}

impl OrderField {
    const INFINITE: OrderField = OrderField::Infinite(InfiniteTag::Infinite);

    fn render(&self) -> String {
        match self {
            OrderField::Finite(n) => n.to_string(),
            OrderField::Infinite(_) => "infinite".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriteriaReport {
    pub order4_det_p_zero: bool,
    pub order6_psi3_zero: bool,
    pub order6_det_de: String,
    pub order6_det_de_zero: bool,
    pub order6_det_hessian: String,
    pub order6_det_hessian_zero: bool,
    pub order8_psi4_zero: bool,
    pub order8_sextic_de: String,
    pub order8_sextic_de_zero: bool,
    pub order8_sextic_curve: String,
    pub order8_sextic_curve_zero: bool,
    pub yellowbook_order6_det: String,
    pub yellowbook_order6_zero: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub yellowbook_order8_det: Option<String>,
    pub group_order_criteria: Vec<u32>,
    pub literal_recursion_order: Option<u32>,
}

impl From<&Criteria> for CriteriaReport {
    fn from(c: &Criteria) -> Self {
        use num_traits::Zero;
        CriteriaReport {
            order4_det_p_zero: c.order4,
            order6_psi3_zero: c.order6,
            order6_det_de: s(&c.order6_det_de),
            order6_det_de_zero: c.order6_det_de.is_zero(),
            order6_det_hessian: s(&c.order6_det_hessian),
            order6_det_hessian_zero: c.order6_det_hessian.is_zero(),
            order8_psi4_zero: c.order8,
            order8_sextic_de: s(&c.order8_sextic_de),
            order8_sextic_de_zero: c.order8_sextic_de.is_zero(),
            order8_sextic_curve: s(&c.order8_sextic_curve),
            order8_sextic_curve_zero: c.order8_sextic_curve.is_zero(),
            yellowbook_order6_det: s(&c.yellowbook_order6),
            yellowbook_order6_zero: c.yellowbook_order6.is_zero(),
            yellowbook_order8_det: c.yellowbook_order8.as_ref().map(s),
            group_order_criteria: c.group_order_criteria.clone(),
            literal_recursion_order: c.literal_recursion_order,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    /// `"n"`, `"none"` or `"inconclusive"`.
    pub closure: String,
    pub seeds_used: usize,
    pub seeds_agreeing: usize,
    pub residual: f64,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub weights: [[String; 3]; 3],
    pub kernel: KernelReport,
    pub delta1: Vec<String>,
    pub delta2: Vec<String>,
    #[serde(rename = "D")]
    pub d: String,
    #[serde(rename = "E")]
    pub e: String,
    pub g2: String,
    pub g3: String,
    pub disc: String,
    #[serde(rename = "detP")]
    pub det_p: String,
    #[serde(rename = "X")]
    pub x: String,
    #[serde(rename = "Y")]
    pub y: String,
    /// `X` with the raw stay weight squared; differs from `X` unless `p(0,0) = 1/2`.
    #[serde(rename = "X_raw_centre")]
    pub x_raw_centre: String,
    /// `"one"`, `"zero-degenerate"`, or absent when the kernel is not biquadratic.
    pub genus: Option<String>,
    pub genus_reason: Option<String>,
    pub on_curve: Option<bool>,
    /// `"finite"`, `"infinite"` or `"degenerate"`.
    pub verdict: String,
    pub degenerate_reason: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega3_order: Option<OrderField>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_order: Option<OrderField>,
    pub criteria: Option<CriteriaReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

fn genus_reason(r: GenusReason) -> String {
    r.tag().to_string()
}

impl Report {
    pub fn new(r: &GroupOrderResult) -> Self {
        let k = &r.coefficients;
        let w = &r.witness;
        let (verdict, degenerate_reason) = match r.verdict {
            Verdict::Finite(_) => ("finite", None),
            Verdict::Infinite => ("infinite", None),
            Verdict::Degenerate(d) => (
                "degenerate",
                Some(match d {
                    Degeneracy::NotBiquadratic(which) => format!("not-biquadratic: {which} vanishes"),
                    Degeneracy::Genus0(reason) => format!("genus0: {}", reason.tag()),
                    Degeneracy::PointNotOnCurve => d.tag().to_string(),
                }),
            ),
        };
        let order_field = |o: TorsionOrder, scale: u32| match o {
            TorsionOrder::Finite(n) => OrderField::Finite(n * scale),
            TorsionOrder::Infinite => OrderField::INFINITE,
        };
        let mut warnings = Vec::new();
        if let Some(c) = &r.criteria {
            let expected = r.verdict.group_order();
            let hits = &c.group_order_criteria;
            if hits.len() > 1 || hits.first().copied() != expected.filter(|&h| h >= 4) {
                warnings.push(format!("order criteria {hits:?} disagree with the computed order"));
            }
        }
        Report {
            weights: r.weights.grid().clone().map(|row| row.map(|q| s(&q))),
            kernel: KernelReport {
                a: v(&k.a),
                b: v(&k.b),
                c: v(&k.c),
                a_tilde: v(&k.a_tilde),
                b_tilde: v(&k.b_tilde),
                c_tilde: v(&k.c_tilde),
            },
            delta1: v(&r.delta1),
            delta2: v(&r.delta2),
            d: s(&w.d),
            e: s(&w.e),
            g2: s(&w.g2),
            g3: s(&w.g3),
            disc: s(&w.disc),
            det_p: s(&w.det_p),
            x: s(&w.x),
            y: s(&w.y),
            x_raw_centre: s(&w.x_raw_centre),
            genus: r.genus.map(|g| match g {
                GenusVerdict::One => "one".to_string(),
                GenusVerdict::ZeroDegenerate(_) => "zero-degenerate".to_string(),
            }),
            genus_reason: match r.genus {
                Some(GenusVerdict::ZeroDegenerate(reason)) => Some(genus_reason(reason)),
                _ => None,
            },
            on_curve: r.on_curve,
            verdict: verdict.to_string(),
            degenerate_reason,
            omega3_order: r.omega3_order.map(|o| order_field(o, 1)),
            group_order: r.omega3_order.map(|o| order_field(o, 2)),
            criteria: r.criteria.as_ref().map(CriteriaReport::from),
            oracle: None,
            warnings,
        }
    }

    /// Attaches a numerical orbit estimate, warning when it disagrees.
    pub fn with_oracle(mut self, est: &OrbitEstimate) -> Self {
        let closure = match est.closure {
            OrbitClosure::Order(n) => n.to_string(),
            OrbitClosure::NoClosure => "none".to_string(),
            OrbitClosure::Inconclusive => "inconclusive".to_string(),
        };
        let agrees = match (est.closure, self.omega3_order) {
            (OrbitClosure::Order(n), Some(OrderField::Finite(m))) => n == m,
            (OrbitClosure::NoClosure, Some(OrderField::Infinite(_))) => true,
            _ => false,
        };
        if !agrees {
            self.warnings.push(format!(
                "QRT orbit estimate {closure} disagrees with exact order {}",
                self.omega3_order.map_or("-".to_string(), |o| o.render())
            ));
        }
        self.oracle = Some(OracleReport {
            closure,
            seeds_used: est.seeds_used,
            seeds_agreeing: est.seeds_agreeing,
            residual: est.residual,
            agrees,
        });
        self
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let line = |out: &mut String, k: &str, v: &str| {
            let _ = writeln!(out, "{k:<22}{v}");
        };
        for (i, row) in self.weights.iter().enumerate() {
            let label = if i == 0 { "weights" } else { "" };
            line(&mut out, label, &row.join("  "));
        }
        let vec = |v: &[String]| format!("[{}]", v.join(", "));
        line(&mut out, "a(x)", &vec(&self.kernel.a));
        line(&mut out, "b(x)", &vec(&self.kernel.b));
        line(&mut out, "c(x)", &vec(&self.kernel.c));
        line(&mut out, "a~(y)", &vec(&self.kernel.a_tilde));
        line(&mut out, "b~(y)", &vec(&self.kernel.b_tilde));
        line(&mut out, "c~(y)", &vec(&self.kernel.c_tilde));
        line(&mut out, "delta1(y)", &vec(&self.delta1));
        line(&mut out, "delta2(x)", &vec(&self.delta2));
        for (k, v) in [
            ("D", &self.d),
            ("E", &self.e),
            ("g2", &self.g2),
            ("g3", &self.g3),
            ("disc", &self.disc),
            ("det P", &self.det_p),
            ("X", &self.x),
            ("Y", &self.y),
            ("X (raw centre)", &self.x_raw_centre),
        ] {
            line(&mut out, k, v);
        }
        let genus = match (&self.genus, &self.genus_reason) {
            (Some(g), Some(r)) => format!("{g} ({r})"),
            (Some(g), None) => g.clone(),
            (None, _) => "-".into(),
        };
        line(&mut out, "genus", &genus);
        line(&mut out, "on curve", &self.on_curve.map_or("-".into(), |b| b.to_string()));
        let verdict = match &self.degenerate_reason {
            Some(r) => format!("{} ({r})", self.verdict),
            None => self.verdict.clone(),
        };
        line(&mut out, "verdict", &verdict);
        line(&mut out, "ord(omega3)", &self.omega3_order.map_or("-".into(), |o| o.render()));
        line(&mut out, "|H|", &self.group_order.map_or("-".into(), |o| o.render()));
        if let Some(c) = &self.criteria {
            let zero = |b: bool| if b { "zero" } else { "nonzero" };
            line(&mut out, "order 4: det P", zero(c.order4_det_p_zero));
            line(&mut out, "order 6: Psi3", zero(c.order6_psi3_zero));
            line(&mut out, "  flex det (D,E)", &format!("{} [{}]", c.order6_det_de, zero(c.order6_det_de_zero)));
            line(
                &mut out,
                "  flex det (g2,g3)",
                &format!("{} [{}]", c.order6_det_hessian, zero(c.order6_det_hessian_zero)),
            );
            line(
                &mut out,
                "  cofactor det",
                &format!("{} [{}]", c.yellowbook_order6_det, zero(c.yellowbook_order6_zero)),
            );
            line(&mut out, "order 8: Psi4", zero(c.order8_psi4_zero));
            line(&mut out, "  sextic (D,E)", &format!("{} [{}]", c.order8_sextic_de, zero(c.order8_sextic_de_zero)));
            line(
                &mut out,
                "  sextic (g2,g3)",
                &format!("{} [{}]", c.order8_sextic_curve, zero(c.order8_sextic_curve_zero)),
            );
            if let Some(d) = &c.yellowbook_order8_det {
                line(&mut out, "  cofactor det", d);
            }
            line(&mut out, "4m/4m+2 criteria", &format!("{:?}", c.group_order_criteria));
            line(
                &mut out,
                "literal Psi order",
                &c.literal_recursion_order.map_or("none".into(), |n| n.to_string()),
            );
        }
        if let Some(o) = &self.oracle {
            line(
                &mut out,
                "QRT oracle",
                &format!(
                    "{} ({}/{} seeds, residual {:.1e})",
                    o.closure, o.seeds_agreeing, o.seeds_used, o.residual
                ),
            );
        }
        for w in &self.warnings {
            line(&mut out, "warning", w);
        }
        out
    }
}
