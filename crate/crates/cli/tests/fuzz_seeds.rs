//! Replays the checked-in fuzz seeds through the same round trips the fuzz
//! targets assert, so a format change that invalidates a seed shows up here.

use std::path::PathBuf;

use loopvir::geom::cache::{decode_entry, encode_entry};
use loopvir::poly::CoeffPoly;
use loopvir::rational::{format_rational, parse_rational};
use loopvir::verma::GramMatrix;
use loopvir_cli::config::RunConfig;

fn seeds(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read(&p).unwrap(),
            )
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

fn text(b: &[u8]) -> &str {
    std::str::from_utf8(b).unwrap()
}

#[test]
fn poly_seeds_round_trip() {
    for (name, s) in seeds("poly_parse") {
        let p: CoeffPoly = text(&s).parse().unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(p.to_string().parse::<CoeffPoly>().unwrap(), p, "{name}");
    }
}

#[test]
fn rational_seeds_round_trip() {
    for (name, s) in seeds("rational_parse") {
        let r = parse_rational(text(&s)).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r, "{name}");
    }
}

#[test]
fn cache_seeds_round_trip() {
    for (name, b) in seeds("cache_decode") {
        let e = decode_entry(&b).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(encode_entry(&e), b, "{name}");
    }
}

#[test]
fn config_seeds_validate() {
    for (name, s) in seeds("config_parse") {
        let c = RunConfig::from_toml(text(&s)).unwrap_or_else(|e| panic!("{name}: {e}"));
        c.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn gram_seeds_round_trip() {
    for (name, s) in seeds("gram_json") {
        let g = GramMatrix::from_json(text(&s)).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(
            GramMatrix::from_json(&g.to_json().to_string()).unwrap(),
            g,
            "{name}"
        );
    }
}
