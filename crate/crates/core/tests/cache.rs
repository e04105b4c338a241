use std::fs;

use loopvir::geom::build::Construction;
use loopvir::geom::cache::{self, decode_entry, encode_entry, DecodeError, FORMAT_VERSION, MAGIC};
use loopvir::geom::{Family, OperatorTable};

fn table() -> OperatorTable {
    let mut t = OperatorTable::new();
    for n in -3..=3 {
        t.ensure(n, 4).unwrap();
    }
    t
}

#[test]
fn entries_round_trip() {
    let t = table();
    for (_, e) in t.entries() {
        let bytes = encode_entry(e);
        assert_eq!(&bytes[..4], MAGIC);
        assert_eq!(bytes[4], FORMAT_VERSION);
        let d = decode_entry(&bytes).unwrap();
        assert_eq!(d.op, e.op);
        assert_eq!(d.mirror, e.mirror);
        assert_eq!(d.construction, e.construction);
        assert_eq!(d.series_order, e.series_order);
        assert_eq!(encode_entry(&d), bytes);
    }
}

#[test]
fn malformed_input_is_rejected() {
    let t = table();
    let (_, e) = t.entries().find(|(m, _)| **m == -2).unwrap();
    let bytes = encode_entry(e);
    assert_eq!(decode_entry(b"nope"), Err(DecodeError::BadMagic));
    let mut v = bytes.clone();
    v[4] = FORMAT_VERSION + 1;
    assert_eq!(
        decode_entry(&v),
        Err(DecodeError::Version(FORMAT_VERSION + 1))
    );
    for cut in [5, 12, bytes.len() / 2, bytes.len() - 1] {
        assert!(decode_entry(&bytes[..cut]).is_err(), "cut at {cut}");
    }
    let mut v = bytes.clone();
    v.push(0);
    assert_eq!(decode_entry(&v), Err(DecodeError::Trailing(1)));
    assert!(decode_entry(&[]).is_err());
}

#[test]
fn save_load_and_clear() {
    let dir = std::env::temp_dir().join(format!("loopvir-cache-test-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    let t = table();
    assert_eq!(cache::save(&dir, &t).unwrap(), 7);
    fs::write(dir.join("notes.txt"), "kept").unwrap();

    let mut fresh = OperatorTable::new();
    let r = cache::load(&dir, &mut fresh).unwrap();
    assert_eq!(r.loaded, vec![-3, -2, -1, 0, 1, 2, 3]);
    assert!(r.stale.is_empty() && r.corrupt.is_empty());
    let e = fresh.ensure(-3, 4).unwrap();
    assert_eq!(e.construction, Construction::Recursion);
    let before = fresh.get(Family::Anti, -2, 4).unwrap().clone();
    assert_eq!(&before, table().get(Family::Anti, -2, 4).unwrap());

    // one corrupt and one stale file
    let p2 = cache::entry_path(&dir, 2);
    fs::write(&p2, b"LVOP\x01garbage").unwrap();
    let p1 = cache::entry_path(&dir, 1);
    let mut v = fs::read(&p1).unwrap();
    v[4] = 0;
    fs::write(&p1, v).unwrap();
    let mut again = OperatorTable::new();
    let r = cache::load(&dir, &mut again).unwrap();
    assert_eq!(r.corrupt.len(), 1);
    assert_eq!(r.stale, vec![p1]);
    assert_eq!(r.loaded, vec![-3, -2, -1, 0, 3]);

    assert_eq!(cache::clear(&dir).unwrap(), 7);
    assert!(cache::cache_files(&dir).unwrap().is_empty());
    assert!(dir.join("notes.txt").exists());
    fs::remove_dir_all(&dir).unwrap();
}
