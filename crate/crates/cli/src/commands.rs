use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use fiberwise_core::arith::field::PrimeField;
use fiberwise_core::arith::Q;
use fiberwise_core::cycle::{
    det_bundle, h0, h1, hom_dim, hom_dim_in, induced_polarization, is_simple, is_simple_in, is_stable,
    agreement_scan, CertificateSummary, CycleBundle, FieldChoice, PolarizedCycle, ScanConfig,
};
use fiberwise_core::grr::{
    c2_pair, chern_to_ch, chi_grr, cubic_form, presets, pushforward_ch, relative_todd, solve_moduli_invariants,
    synthetic_datum, validate_ring, Class, RingSpec, SheafClass,
};
use fiberwise_core::io::bundle::parse_bundle;
use fiberwise_core::io::records::{parse_class, parse_kernel, ClassRecord, KernelRecord};
use fiberwise_core::io::ring::parse_ring;
use fiberwise_core::io::samples::SampleSetFile;
use fiberwise_core::io::{from_toml, rational};
use fiberwise_core::lattice::{canonicalize, PDecider, TensorAnnotation, RankOneIdentity};
use fiberwise_core::{Error, Result};
use serde_json::{json, Value};

use crate::args::{Command, Global, SheafArgs};

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

/// An inline record, or the contents of a file when prefixed by `@`.
fn record_text(arg: &str) -> Result<String> {
    match arg.strip_prefix('@') {
        Some(path) => Ok(read(Path::new(path))?.trim().to_string()),
        None => Ok(arg.to_string()),
    }
}

pub fn field_choice(s: &str) -> Result<FieldChoice> {
    if s == "rational" {
        return Ok(FieldChoice::Rational);
    }
    let p = s
        .strip_prefix("prime:")
        .and_then(|p| p.parse::<u64>().ok())
        .ok_or_else(|| Error::Config(format!("field must be `rational` or `prime:<p>`, got {s:?}")))?;
    PrimeField::new(p).ok_or_else(|| Error::Config(format!("{p} is not a prime below 2^32")))?;
    Ok(FieldChoice::Prime(p))
}

fn field_name(f: FieldChoice) -> String {
    match f {
        FieldChoice::Rational => "rational".into(),
        FieldChoice::Prime(p) => format!("prime:{p}"),
    }
}

pub fn dispatch(cmd: &Command, g: &Global) -> Result<Value> {
    match cmd {
        Command::Transform { kernel, class, inverse } => transform(kernel, class, *inverse),
        Command::Canonicalize { class } => canonical(class, g.generic),
        Command::Equal {
            lhs,
            rhs,
            kernel,
            degrees,
        } => equal(lhs, rhs, kernel.as_deref(), degrees, g.generic),
        Command::Kernel { kernel } => kernel_info(kernel),
        Command::Hom { source, target } => hom(source, target.as_deref(), g),
        Command::Simple { bundle } => simple(bundle, g),
        Command::Stable { bundle } => stable(bundle, g),
        Command::Scan { config } => scan(config.as_deref(), g),
        Command::Chi { ring, sheaf } => chi(ring, sheaf),
        Command::Push { ring, sheaf, twist } => push(ring, sheaf, twist.as_deref()),
        Command::Cubic { ring, divisors } => cubic(ring, divisors),
        Command::Solve {
            samples,
            synthetic,
            max_r,
            emit_samples,
        } => solve(samples.as_deref(), *synthetic, *max_r, emit_samples.as_deref()),
        Command::Validate { ring } => validate(ring),
        Command::Run { .. } => Err(Error::Config("workflows cannot be nested".into())),
    }
}

fn transform(kernel: &str, class: &str, inverse: bool) -> Result<Value> {
    let kr = parse_kernel(&record_text(kernel)?)?;
    let mut k = kr.kernel()?;
    if inverse {
        k = k.invert();
    }
    let v = parse_class(&record_text(class)?)?.fiber_class()?;
    let w = k.transform(&v)?;
    let mut out = json!({
        "kernel": KernelRecord::from_kernel(&k),
        "input": ClassRecord::from_fiber_class(&v),
        "output": ClassRecord::from_fiber_class(&w),
    });
    if !inverse {
        if v.r() == 1 {
            let id = RankOneIdentity::new(&k, v.d())?;
            out["identity"] = json!({
                "lhs": ClassRecord::from_p_class(&id.lhs),
                "rhs": ClassRecord::from_p_class(&id.rhs),
                "statement": format!(
                    "P_{}({}, {}) = P_{}({}, {})",
                    id.lhs.space, id.lhs.r, id.lhs.d, id.rhs.space, id.rhs.r, id.rhs.d
                ),
            });
        } else if k.b != 0 {
            let ann = TensorAnnotation::new(&k, &v)?;
            let [f1, f2] = &ann.tensor_factors;
            out["annotation"] = json!({
                "lhs": ClassRecord::from_p_class(&ann.lhs),
                "tensor_factors": [ClassRecord::from_fiber_class(f1), ClassRecord::from_fiber_class(f2)],
                "statement": format!(
                    "P_{}({}, {}) = pi_*(V_{}({}, {}) x V_{}({}, {}))",
                    ann.lhs.space, ann.lhs.r, ann.lhs.d, f1.space(), f1.r(), f1.d(), f2.space(), f2.r(), f2.d()
                ),
            });
        }
    }
    Ok(out)
}

fn canonical(class: &str, generic: bool) -> Result<Value> {
    let p = parse_class(&record_text(class)?)?.p_class()?;
    let c = canonicalize(&p, generic)?;
    Ok(json!({
        "input": ClassRecord::from_p_class(&p),
        "canonical": ClassRecord::from_p_class(&c.class),
        "generic": generic,
        "log": c.log,
    }))
}

fn equal(lhs: &str, rhs: &str, kernel: Option<&str>, degrees: &[i64], generic: bool) -> Result<Value> {
    let p = parse_class(&record_text(lhs)?)?.p_class()?;
    let q = parse_class(&record_text(rhs)?)?.p_class()?;
    let mut dec = PDecider::new();
    if let Some(k) = kernel {
        let k = parse_kernel(&record_text(k)?)?.kernel()?;
        for &d in degrees {
            dec.register(RankOneIdentity::new(&k, d)?);
        }
    } else if !degrees.is_empty() {
        return Err(Error::Config("--degrees needs --kernel".into()));
    }
    let decision = dec.equal(&p, &q, generic)?;
    let bridges: Vec<Value> = dec
        .bridges()
        .iter()
        .map(|b| json!({"lhs": ClassRecord::from_p_class(&b.lhs), "rhs": ClassRecord::from_p_class(&b.rhs)}))
        .collect();
    Ok(json!({
        "lhs": ClassRecord::from_p_class(&p),
        "rhs": ClassRecord::from_p_class(&q),
        "generic": generic,
        "bridges": bridges,
        "decision": decision,
    }))
}

fn kernel_info(kernel: &str) -> Result<Value> {
    let k = parse_kernel(&record_text(kernel)?)?.kernel()?;
    let m = k.matrix();
    Ok(json!({
        "kernel": KernelRecord::from_kernel(&k),
        "matrix": m.0,
        "determinant": m.det(),
        "inverse": KernelRecord::from_kernel(&k.invert()),
    }))
}

fn load_bundle(path: &Path) -> Result<(CycleBundle, Option<PolarizedCycle>)> {
    parse_bundle(&read(path)?)
}

fn field_of(g: &Global) -> Result<FieldChoice> {
    g.field.as_deref().map(field_choice).transpose().map(|f| f.unwrap_or_default())
}

fn hom_in(f: FieldChoice, e: &CycleBundle, t: &CycleBundle) -> Result<usize> {
    match f {
        FieldChoice::Rational => hom_dim(e, t),
        FieldChoice::Prime(p) => hom_dim_in(&PrimeField::new(p).expect("validated prime"), e, t),
    }
}

fn hom(source: &Path, target: Option<&Path>, g: &Global) -> Result<Value> {
    let f = field_of(g)?;
    let (e, _) = load_bundle(source)?;
    match target {
        Some(t) => {
            let (t, _) = load_bundle(t)?;
            Ok(json!({"field": field_name(f), "hom_dim": hom_in(f, &e, &t)?}))
        }
        None => {
            let (h0, h1) = (h0(&e), h1(&e));
            Ok(json!({
                "field": "rational",
                "h0": h0,
                "h1": h1,
                "euler_characteristic": h0 as i64 - h1 as i64,
                "total_degree": e.total_degree(),
            }))
        }
    }
}

fn simple(bundle: &Path, g: &Global) -> Result<Value> {
    let f = field_of(g)?;
    let (e, _) = load_bundle(bundle)?;
    let (simple, end) = match f {
        FieldChoice::Rational => (is_simple(&e), hom_dim(&e, &e)?),
        FieldChoice::Prime(p) => {
            let k = PrimeField::new(p).expect("validated prime");
            (is_simple_in(&k, &e)?, hom_dim_in(&k, &e, &e)?)
        }
    };
    Ok(json!({"field": field_name(f), "simple": simple, "end_dim": end}))
}

fn stable(bundle: &Path, g: &Global) -> Result<Value> {
    let (e, pol) = load_bundle(bundle)?;
    let (det, class) = det_bundle(&e);
    let (c, source) = match pol {
        Some(c) => (c, "file"),
        None => (induced_polarization(&det)?, "determinant"),
    };
    let bound = g.bound.unwrap_or(5);
    if bound < 0 {
        return Err(Error::Config("search bound must be nonnegative".into()));
    }
    let rep = is_stable(&e, &c, bound)?;
    Ok(json!({
        "polarization": source,
        "weights": c.component_weights(),
        "determinant": class,
        "bound": bound,
        "verdict": rep.verdict,
        "slope": rep.slope.to_string(),
        "certificate": rep.certificate.as_ref().map(|d| CertificateSummary::new(&e, &c, d)),
        "bound_too_small": rep.bound_too_small,
        "complete": rep.complete,
    }))
}

pub fn default_scan() -> ScanConfig {
    ScanConfig {
        cycle_sizes: vec![1, 2],
        rank: 2,
        degrees: vec![-5, -4, -3, -2, -1, 1, 2, 3, 4, 5],
        samples: 200,
        seed: 0,
        bound: 5,
        require_definite: true,
        field: FieldChoice::Rational,
    }
}

fn scan(config: Option<&Path>, g: &Global) -> Result<Value> {
    let mut cfg = match config {
        Some(p) => from_toml(&read(p)?)?,
        None => default_scan(),
    };
    if let Some(s) = g.seed {
        cfg.seed = s;
    }
    if let Some(b) = g.bound {
        cfg.bound = b;
    }
    if let Some(f) = &g.field {
        cfg.field = field_choice(f)?;
    }
    let rep = agreement_scan(&cfg, g.jobs.unwrap_or(1))?;
    serde_json::to_value(rep).map_err(|e| Error::Config(e.to_string()))
}

pub fn load_ring(arg: &str) -> Result<(RingSpec, Option<RingSpec>)> {
    if presets::text(arg).is_some() {
        return presets::load(arg);
    }
    let path = Path::new(arg);
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_ring(&read(path)?, |name| {
        if let Ok((r, _)) = presets::load(name) {
            return Some(r);
        }
        [format!("{name}.toml"), format!("{}.toml", name.replace('-', "_"))]
            .iter()
            .find_map(|f| read(&dir.join(f)).ok())
            .and_then(|t| parse_ring(&t, |_| None).ok())
            .map(|(r, _)| r)
    })
}

/// Parses `name=q,name=q` into a class of `r`.
fn terms(r: &RingSpec, s: &str) -> Result<Class> {
    let mut pairs = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected name=value, got {part:?}")))?;
        pairs.push((name.trim(), rational(value)?));
    }
    r.class(&pairs)
}

fn sheaf(r: &RingSpec, a: &SheafArgs) -> Result<SheafClass> {
    if let Some(ch) = &a.ch {
        return Ok(SheafClass::new(terms(r, ch)?));
    }
    let rank = a.rank.as_deref().map(rational).transpose()?.unwrap_or_else(|| Q::from_integer(1.into()));
    let part = |s: &Option<String>| s.as_deref().map(|s| terms(r, s)).transpose().map(|c| c.unwrap_or_else(|| r.zero()));
    chern_to_ch(r, rank, &part(&a.c1)?, &part(&a.c2)?, &part(&a.c3)?)
}

fn chi(ring: &str, a: &SheafArgs) -> Result<Value> {
    let (r, _) = load_ring(ring)?;
    let f = sheaf(&r, a)?;
    Ok(json!({
        "ring": r.name(),
        "ch": r.named_coordinates(&f.ch),
        "chi": chi_grr(&r, &f).to_string(),
    }))
}

fn push(ring: &str, a: &SheafArgs, twist: Option<&str>) -> Result<Value> {
    let (x, base) = load_ring(ring)?;
    let base = base.ok_or(Error::MissingPushforwardTable)?;
    let mut f = sheaf(&x, a)?;
    let mut twist_class = base.zero();
    if let Some(t) = twist {
        twist_class = terms(&base, t)?;
        base.check_degree(&twist_class, 2, "twist")?;
        let pulled = fiberwise_core::grr::chern::pullback_class(&x, &base.exp(&twist_class))?;
        f = SheafClass::new(x.mul(&f.ch, &pulled));
    }
    let g = pushforward_ch(&x, &base, &f)?;
    Ok(json!({
        "ring": x.name(),
        "base": base.name(),
        "twist": base.named_coordinates(&twist_class),
        "relative_todd": x.named_coordinates(&relative_todd(&x, &base)?),
        "ch": x.named_coordinates(&f.ch),
        "pushforward": base.named_coordinates(&g.ch),
        "rank": g.rank().to_string(),
        "chi_total": chi_grr(&x, &f).to_string(),
        "chi_base": chi_grr(&base, &g).to_string(),
    }))
}

fn cubic(ring: &str, divisors: &[String]) -> Result<Value> {
    let (r, _) = load_ring(ring)?;
    match divisors.len() {
        3 => {
            let d: Vec<Class> = divisors.iter().map(|s| terms(&r, s)).collect::<Result<_>>()?;
            Ok(json!({
                "ring": r.name(),
                "cubic": cubic_form(&r, &d[0], &d[1], &d[2])?.to_string(),
                "c2": d.iter().map(|x| c2_pair(&r, x).map(|v| v.to_string())).collect::<Result<Vec<_>>>()?,
            }))
        }
        0 => {
            let divs: Vec<usize> = (0..r.len()).filter(|&i| r.basis()[i].degree == 2).collect();
            let mut table = BTreeMap::new();
            let mut c2 = BTreeMap::new();
            for (a, &i) in divs.iter().enumerate() {
                let di = r.basis_class(i);
                c2.insert(r.basis()[i].name.clone(), c2_pair(&r, &di)?.to_string());
                for (b, &j) in divs.iter().enumerate().skip(a) {
                    for &k in divs.iter().skip(b) {
                        let v = cubic_form(&r, &di, &r.basis_class(j), &r.basis_class(k))?;
                        let name = format!("{}*{}*{}", r.basis()[i].name, r.basis()[j].name, r.basis()[k].name);
                        table.insert(name, v.to_string());
                    }
                }
            }
            Ok(json!({"ring": r.name(), "cubic": table, "c2": c2}))
        }
        n => Err(Error::Config(format!("cubic takes 0 or 3 divisors, got {n}"))),
    }
}

fn solve(samples: Option<&Path>, synthetic: Option<u64>, max_r: i64, emit: Option<&Path>) -> Result<Value> {
    match (samples, synthetic) {
        (_, Some(seed)) => {
            let d = synthetic_datum(seed, max_r)?;
            if let Some(path) = emit {
                let text = toml::to_string(&SampleSetFile::from_samples(&d.base, &d.samples))
                    .map_err(|e| Error::Config(e.to_string()))?;
                fs::write(path, text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            }
            let rep = solve_moduli_invariants(&d.base, &d.samples, &BTreeMap::new())?;
            let planted: BTreeMap<String, String> =
                d.planted.named().into_iter().map(|(k, v)| (k, v.to_string())).collect();
            let recovered = rep.values == planted;
            let mut out = serde_json::to_value(&rep).map_err(|e| Error::Config(e.to_string()))?;
            out["synthetic"] = json!({"seed": seed, "samples": d.samples.len(), "planted": planted, "recovered": recovered});
            Ok(out)
        }
        (Some(p), None) => {
            let file = SampleSetFile::parse(&read(p)?)?;
            let (base, _) = load_ring(&file.base)?;
            let rep = solve_moduli_invariants(&base, &file.samples(&base)?, &file.constraints()?)?;
            serde_json::to_value(&rep).map_err(|e| Error::Config(e.to_string()))
        }
        (None, None) => Err(Error::Config("solve needs a sample file or --synthetic SEED".into())),
    }
}

fn validate(ring: &str) -> Result<Value> {
    let (r, base) = load_ring(ring)?;
    let rep = validate_ring(&r, base.as_ref());
    serde_json::to_value(&rep).map_err(|e| Error::Config(e.to_string()))
}
