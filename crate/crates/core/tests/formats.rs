use std::fs;
use std::path::PathBuf;

use fiberwise_core::cycle::ScanConfig;
use fiberwise_core::grr::{presets, validate_ring};
use fiberwise_core::io::bundle::parse_bundle;
use fiberwise_core::io::from_toml;
use fiberwise_core::io::records::{parse_class, parse_kernel};
use fiberwise_core::io::ring::parse_ring;
use fiberwise_core::io::samples::SampleSetFile;
use fiberwise_core::Error;

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn files(sub: &str) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = fs::read_dir(configs().join(sub))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    v.sort();
    v
}

#[test]
fn shipped_bundle_files_parse() {
    let all = files("bundles");
    assert!(!all.is_empty());
    for p in all {
        parse_bundle(&fs::read_to_string(&p).unwrap()).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
    }
}

#[test]
fn shipped_ring_files_parse_and_validate() {
    for p in files("rings") {
        let (r, base) = parse_ring(&fs::read_to_string(&p).unwrap(), |n| presets::load(n).ok().map(|x| x.0)).unwrap();
        assert!(validate_ring(&r, base.as_ref()).valid, "{}", p.display());
    }
}

#[test]
fn shipped_sample_sets_parse() {
    for p in files("samples") {
        let f = SampleSetFile::parse(&fs::read_to_string(&p).unwrap()).unwrap();
        let base = presets::load(&f.base).unwrap().0;
        assert!(!f.samples(&base).unwrap().is_empty());
    }
}

#[test]
fn scan_config_parses() {
    let cfg: ScanConfig = from_toml(&fs::read_to_string(configs().join("scan.toml")).unwrap()).unwrap();
    cfg.validate().unwrap();
    assert_eq!(cfg.samples, 200);
}

#[test]
fn malformed_records_are_parse_errors() {
    for bad in ["", "{", "[1,2]", "{\"r\":\"1\",\"d\":2}", "{\"r\":1,\"d\":2,\"extra\":0}"] {
        assert!(matches!(parse_class(bad), Err(Error::Parse(_))), "{bad}");
    }
    assert!(matches!(parse_kernel("{\"a\":1}"), Err(Error::Parse(_))));
    assert!(matches!(parse_class("{\"r\":2,\"d\":4}").unwrap().fiber_class(), Err(Error::InvalidClass { .. })));
}
