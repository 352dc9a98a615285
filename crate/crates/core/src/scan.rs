//! Enumeration of small integer weightings on a fixed step support.
//!
//! Each supported step gets an integer count in `1..=denominator_max`; counts
//! are normalized to probabilities (the stay weight is zero). Instances are
//! indexed lexicographically with the first supported direction most
//! significant, and results always come back in index order.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::classify::{classify, GroupOrderResult, Verdict};
use crate::elliptic::scalar_multiple;
use crate::error::{Error, Result};
use crate::qrt::{estimate_orbit_order, OrbitEstimate, DEFAULT_SEEDS};
use crate::walk::{base_point, curve_from_kernel, KernelCoefficients, KernelData, WeightMatrix};

/// Step directions `(i, j)` in mask order: the 3×3 grid read row by row,
/// skipping the centre.
pub const DIRECTIONS: [(i8, i8); 8] = [(1, 1), (1, 0), (1, -1), (0, 1), (0, -1), (-1, 1), (-1, 0), (-1, -1)];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Support([bool; 8]);

impl Support {
    pub const FULL: Support = Support([true; 8]);
    pub const COMPASS: Support = Support([false, true, false, true, true, false, true, false]);

    pub fn len(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn positions(&self) -> impl Iterator<Item = (i8, i8)> + '_ {
        DIRECTIONS.iter().zip(self.0).filter(|(_, on)| *on).map(|(d, _)| *d)
    }
}

impl FromStr for Support {
    type Err = Error;

    /// `full`, `compass`, or eight `0`/`1` characters in [`DIRECTIONS`] order.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => return Ok(Support::FULL),
            "compass" => return Ok(Support::COMPASS),
            _ => {}
        }
        let bits: Vec<bool> = s
            .chars()
            .map(|c| match c {
                '1' => Ok(true),
                '0' => Ok(false),
                _ => Err(Error::BadSupport(s.to_string())),
            })
            .collect::<Result<_>>()?;
        let bits: [bool; 8] = bits.try_into().map_err(|_| Error::BadSupport(s.to_string()))?;
        Ok(Support(bits))
    }
}

impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub denominator_max: u32,
    pub support: Support,
    /// Group order `|𝓗|` whose instances are collected as hits.
    pub target_order: Option<u32>,
    /// Sample this many instances when the space is larger.
    pub limit: usize,
    /// Worker threads; 0 lets rayon decide.
    pub jobs: usize,
    pub seed: u64,
    /// Re-check hits with the QRT orbit estimate.
    pub oracle: bool,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            denominator_max: 2,
            support: Support::FULL,
            target_order: None,
            limit: 100_000,
            jobs: 0,
            seed: 0,
            oracle: false,
        }
    }
}

/// Histogram bucket of a scanned instance.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Bucket {
    Finite(u32),
    Infinite,
    Degenerate(&'static str),
    Failed(String),
}

impl fmt::Display for Bucket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bucket::Finite(h) => write!(f, "|H| = {h}"),
            Bucket::Infinite => f.write_str("infinite"),
            Bucket::Degenerate(tag) => write!(f, "degenerate: {tag}"),
            Bucket::Failed(msg) => write!(f, "error: {msg}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ScanHit {
    pub index: u64,
    pub counts: [u32; 8],
    pub result: GroupOrderResult,
    /// `ord·Ω3 = O` and no proper divisor annihilates `Ω3`, by direct multiplication.
    pub multiples_verified: bool,
    pub oracle: Option<OrbitEstimate>,
}

#[derive(Debug, Clone)]
pub struct ScanSummary {
    pub space: u64,
    pub exhaustive: bool,
    pub examined: usize,
    pub histogram: BTreeMap<Bucket, usize>,
    pub hits: Vec<ScanHit>,
}

/// Counts `1..=denominator_max` for instance `index`, in support order.
fn decode(index: u64, base: u64, len: usize) -> Vec<u32> {
    let mut digits = vec![0u32; len];
    let mut rest = index;
    for d in digits.iter_mut().rev() {
        *d = (rest % base) as u32 + 1;
        rest /= base;
    }
    digits
}

/// The normalized walk for instance `index`, with its counts by direction.
pub fn instance(cfg: &ScanConfig, index: u64) -> ([u32; 8], WeightMatrix) {
    let digits = decode(index, cfg.denominator_max as u64, cfg.support.len());
    let mut counts = [0u32; 8];
    let mut grid = [[0i64; 3]; 3];
    for ((i, j), c) in cfg.support.positions().zip(digits) {
        let k = DIRECTIONS.iter().position(|&d| d == (i, j)).unwrap();
        counts[k] = c;
        grid[(1 - i) as usize][(1 - j) as usize] = c as i64;
    }
    let w = WeightMatrix::from_counts(grid).expect("positive counts off the centre form a valid walk");
    (counts, w)
}

pub fn space_size(cfg: &ScanConfig) -> Result<u64> {
    (cfg.denominator_max as u64)
        .checked_pow(cfg.support.len() as u32)
        .ok_or(Error::ScanTooLarge)
}

fn indices(cfg: &ScanConfig, space: u64) -> Result<(Vec<u64>, bool)> {
    if space <= cfg.limit as u64 {
        return Ok(((0..space).collect(), true));
    }
    let space_usize = usize::try_from(space).map_err(|_| Error::ScanTooLarge)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut picked: Vec<u64> = rand::seq::index::sample(&mut rng, space_usize, cfg.limit)
        .into_iter()
        .map(|i| i as u64)
        .collect();
    picked.sort_unstable();
    Ok((picked, false))
}

fn bucket(r: &Result<GroupOrderResult>) -> Bucket {
    match r {
        Ok(r) => match r.verdict {
            Verdict::Finite(h) => Bucket::Finite(h),
            Verdict::Infinite => Bucket::Infinite,
            Verdict::Degenerate(d) => Bucket::Degenerate(d.tag()),
        },
        Err(e) => Bucket::Failed(e.to_string()),
    }
}

/// Recomputes `n·Ω3` for `n = 1..=ord` from scratch.
fn verify_multiples(w: &WeightMatrix, order: u32) -> bool {
    let kernel = KernelData::new(KernelCoefficients::raw(w));
    let Ok(curve) = curve_from_kernel(&kernel) else {
        return false;
    };
    let p = base_point(w);
    let at = |n| scalar_multiple(n, &p, &curve).map(|q| q.is_infinity());
    matches!(at(order), Ok(true)) && (1..order).filter(|&d| order.is_multiple_of(d)).all(|d| matches!(at(d), Ok(false)))
}

pub fn scan(cfg: &ScanConfig) -> Result<ScanSummary> {
    if cfg.denominator_max == 0 || cfg.support.is_empty() {
        return Ok(ScanSummary {
            space: 0,
            exhaustive: true,
            examined: 0,
            histogram: BTreeMap::new(),
            hits: Vec::new(),
        });
    }
    let space = space_size(cfg)?;
    let (idx, exhaustive) = indices(cfg, space)?;

    let work = |&index: &u64| {
        let (counts, w) = instance(cfg, index);
        let r = classify(&w);
        let hit = match (&r, cfg.target_order) {
            (Ok(res), Some(t)) if res.verdict == Verdict::Finite(t) => {
                let oracle = cfg
                    .oracle
                    .then(|| estimate_orbit_order(&res.coefficients, DEFAULT_SEEDS, 12, cfg.seed ^ index).ok())
                    .flatten();
                Some(ScanHit {
                    index,
                    counts,
                    result: res.clone(),
                    multiples_verified: verify_multiples(&w, t / 2),
                    oracle,
                })
            }
            _ => None,
        };
        (bucket(&r), hit)
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .expect("thread pool");
    let results: Vec<(Bucket, Option<ScanHit>)> = pool.install(|| idx.par_iter().map(work).collect());

    let mut histogram = BTreeMap::new();
    let mut hits = Vec::new();
    for (b, hit) in results {
        *histogram.entry(b).or_insert(0) += 1;
        hits.extend(hit);
    }
    Ok(ScanSummary {
        space,
        exhaustive,
        examined: idx.len(),
        histogram,
        hits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn support_parsing() {
        assert_eq!("full".parse::<Support>().unwrap(), Support::FULL);
        assert_eq!("01011010".parse::<Support>().unwrap(), Support::COMPASS);
        assert_eq!(Support::COMPASS.to_string(), "01011010");
        assert!("0101".parse::<Support>().is_err());
        assert!("0101101x".parse::<Support>().is_err());
    }

    #[test]
    fn lexicographic_decoding() {
        let cfg = ScanConfig {
            denominator_max: 3,
            support: Support::COMPASS,
            ..Default::default()
        };
        let (c0, _) = instance(&cfg, 0);
        assert_eq!(c0, [0, 1, 0, 1, 1, 0, 1, 0]);
        let (c1, w1) = instance(&cfg, 1);
        assert_eq!(c1, [0, 1, 0, 1, 1, 0, 2, 0]);
        assert_eq!(*w1.p(-1, 0), rat(2, 5));
        let (last, _) = instance(&cfg, 80);
        assert_eq!(last, [0, 3, 0, 3, 3, 0, 3, 0]);
    }

    #[test]
    fn compass_support_is_all_order_four() {
        let cfg = ScanConfig {
            denominator_max: 4,
            support: Support::COMPASS,
            target_order: Some(4),
            ..Default::default()
        };
        let s = scan(&cfg).unwrap();
        assert!(s.exhaustive);
        assert_eq!(s.examined, 256);
        let finite: usize = s.histogram.iter().filter(|(b, _)| matches!(b, Bucket::Finite(_))).map(|(_, n)| n).sum();
        assert_eq!(s.histogram.get(&Bucket::Finite(4)).copied().unwrap_or(0), finite);
        assert!(finite > 0);
        assert!(s.hits.iter().all(|h| h.multiples_verified));
    }

    #[test]
    fn zero_limit_scans_nothing() {
        let cfg = ScanConfig {
            denominator_max: 8,
            limit: 0,
            ..Default::default()
        };
        let s = scan(&cfg).unwrap();
        assert_eq!(s.examined, 0);
        assert!(s.histogram.is_empty());
    }

    #[test]
    fn sampling_is_deterministic_across_job_counts() {
        let base = ScanConfig {
            denominator_max: 5,
            limit: 40,
            seed: 9,
            ..Default::default()
        };
        let one = scan(&ScanConfig { jobs: 1, ..base.clone() }).unwrap();
        let four = scan(&ScanConfig { jobs: 4, ..base }).unwrap();
        assert!(!one.exhaustive);
        assert_eq!(one.histogram, four.histogram);
        assert_eq!(one.examined, 40);
    }
}
