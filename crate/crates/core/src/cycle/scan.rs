//! Seeded agreement scan between simplicity and stability under the
//! polarization induced by the determinant.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generate::random_bundle_of_degree;
use super::hom::{is_simple, is_simple_in};
use super::sheaf::{det_bundle, induced_polarization, CycleBundle, Definiteness, Lambda, PolarizedCycle, Support};
use super::stability::{is_stable, verify_certificate, Destabilizer, Family, Verdict};
use crate::arith::field::PrimeField;
use crate::error::{Error, Result};

/// Field used for the simplicity computation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldChoice {
    #[default]
    Rational,
    Prime(u64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub cycle_sizes: Vec<usize>,
    pub rank: usize,
    /// Total degrees to draw from.
    pub degrees: Vec<i64>,
    pub samples: usize,
    pub seed: u64,
    #[serde(default = "default_bound")]
    pub bound: i64,
    /// Redraw (from the same per-sample stream) until the determinant is
    /// ample or anti-ample.
    #[serde(default)]
    pub require_definite: bool,
    #[serde(default)]
    pub field: FieldChoice,
}

fn default_bound() -> i64 {
    5
}

const REDRAWS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateSummary {
    pub family: Family,
    pub support: String,
    pub degrees: Vec<i64>,
    pub lambda: String,
    pub slope: String,
    pub verified: bool,
}

impl CertificateSummary {
    /// Summarizes a destabilizer and re-verifies it independently.
    pub fn new(e: &CycleBundle, c: &PolarizedCycle, d: &Destabilizer) -> Self {
        CertificateSummary {
            family: d.family,
            support: match d.sheaf.support {
                Support::Cycle => "cycle".to_string(),
                Support::Chain { start, len } => format!("chain:{start}+{len}"),
            },
            degrees: d.sheaf.degrees.clone(),
            lambda: match (&d.sheaf.lambda, d.witness.as_ref().and_then(|w| w.modulus.as_ref())) {
                (Lambda::Value(l), _) => l.to_string(),
                (Lambda::Generic, Some(m)) => format!("root of {m}"),
                (Lambda::Generic, None) => "generic".to_string(),
            },
            slope: d.slope.to_string(),
            verified: verify_certificate(e, c, d).is_ok(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub index: usize,
    pub n: usize,
    pub splits: Vec<Vec<i64>>,
    pub gluings: Vec<Vec<Vec<String>>>,
    pub multidegree: Vec<i64>,
    pub determinant: Definiteness,
    pub skipped: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simple: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slope: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agree: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateSummary>,
    pub bound_too_small: bool,
    pub complete: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanAggregate {
    pub samples: usize,
    pub skipped: usize,
    pub evaluated: usize,
    pub simple: usize,
    pub stable: usize,
    pub strictly_semistable: usize,
    pub unstable: usize,
    pub agreements: usize,
    pub disagreements: usize,
    pub certificates_verified: usize,
    pub certificate_failures: usize,
    pub bound_warnings: usize,
    pub incomplete: usize,
    /// Sample indices where simplicity and stability disagree.
    pub counterexamples: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub config: ScanConfig,
    pub records: Vec<ScanRecord>,
    pub aggregate: ScanAggregate,
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        if self.cycle_sizes.is_empty() || self.cycle_sizes.contains(&0) {
            return Err(Error::Config("cycle sizes must be positive and nonempty".into()));
        }
        if self.rank == 0 {
            return Err(Error::InvalidRank(0));
        }
        if self.degrees.is_empty() {
            return Err(Error::Config("no degrees to sample".into()));
        }
        if self.bound < 0 {
            return Err(Error::Config("search bound must be nonnegative".into()));
        }
        if let FieldChoice::Prime(p) = self.field {
            PrimeField::new(p).ok_or_else(|| Error::Config(format!("{p} is not a usable prime")))?;
        }
        Ok(())
    }
}

/// The generator stream for one sample; independent of scheduling.
pub fn sample_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

pub fn draw_sample(cfg: &ScanConfig, index: usize) -> CycleBundle {
    let mut rng = sample_rng(cfg.seed, index);
    let draw = |rng: &mut ChaCha8Rng| {
        let n = cfg.cycle_sizes[rng.gen_range(0..cfg.cycle_sizes.len())];
        let d = cfg.degrees[rng.gen_range(0..cfg.degrees.len())];
        random_bundle_of_degree(rng, n, cfg.rank, d)
    };
    let mut e = draw(&mut rng);
    if cfg.require_definite {
        for _ in 0..REDRAWS {
            if det_bundle(&e).1 != Definiteness::Neither {
                break;
            }
            e = draw(&mut rng);
        }
    }
    e
}

fn simple_in(cfg: &ScanConfig, e: &CycleBundle) -> Result<bool> {
    match cfg.field {
        FieldChoice::Rational => Ok(is_simple(e)),
        FieldChoice::Prime(p) => is_simple_in(&PrimeField::new(p).expect("validated"), e),
    }
}

pub fn evaluate_sample(cfg: &ScanConfig, index: usize) -> Result<ScanRecord> {
    let e = draw_sample(cfg, index);
    let (det, class) = det_bundle(&e);
    let mut rec = ScanRecord {
        index,
        n: e.n(),
        splits: e.splits().to_vec(),
        gluings: e
            .gluings()
            .iter()
            .map(|g| g.iter().map(|row| row.iter().map(|x| x.to_string()).collect()).collect())
            .collect(),
        multidegree: e.multidegree(),
        determinant: class,
        skipped: class == Definiteness::Neither,
        simple: None,
        verdict: None,
        slope: None,
        agree: None,
        certificate: None,
        bound_too_small: false,
        complete: true,
    };
    if rec.skipped {
        return Ok(rec);
    }
    let c = induced_polarization(&det)?;
    let simple = simple_in(cfg, &e)?;
    let rep = is_stable(&e, &c, cfg.bound)?;
    rec.simple = Some(simple);
    rec.verdict = Some(rep.verdict);
    rec.slope = Some(rep.slope.to_string());
    rec.agree = Some(simple == (rep.verdict == Verdict::Stable));
    rec.bound_too_small = rep.bound_too_small;
    rec.complete = rep.complete;
    rec.certificate = rep.certificate.map(|d| CertificateSummary::new(&e, &c, &d));
    Ok(rec)
}

/// Runs the scan on `jobs` worker threads; the report does not depend on
/// the worker count.
pub fn agreement_scan(cfg: &ScanConfig, jobs: usize) -> Result<ScanReport> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    let mut records: Vec<ScanRecord> = pool.install(|| {
        (0..cfg.samples)
            .into_par_iter()
            .map(|i| evaluate_sample(cfg, i))
            .collect::<Result<Vec<_>>>()
    })?;
    records.sort_by_key(|r| r.index);
    let aggregate = aggregate(&records);
    Ok(ScanReport {
        config: cfg.clone(),
        records,
        aggregate,
    })
}

fn aggregate(records: &[ScanRecord]) -> ScanAggregate {
    let mut a = ScanAggregate {
        samples: records.len(),
        ..Default::default()
    };
    for r in records {
        if r.skipped {
            a.skipped += 1;
            continue;
        }
        a.evaluated += 1;
        a.simple += usize::from(r.simple == Some(true));
        match r.verdict {
            Some(Verdict::Stable) => a.stable += 1,
            Some(Verdict::StrictlySemistable) => a.strictly_semistable += 1,
            Some(Verdict::Unstable) => a.unstable += 1,
            None => {}
        }
        if r.agree == Some(true) {
            a.agreements += 1;
        } else {
            a.disagreements += 1;
            a.counterexamples.push(r.index);
        }
        if let Some(c) = &r.certificate {
            if c.verified {
                a.certificates_verified += 1;
            } else {
                a.certificate_failures += 1;
            }
        }
        a.bound_warnings += usize::from(r.bound_too_small);
        a.incomplete += usize::from(!r.complete);
    }
    a
}
