#![no_main]
use libfuzzer_sys::fuzz_target;
use loopvir::geom::cache::{decode_entry, encode_entry};

fuzz_target!(|data: &[u8]| {
    if let Ok(e) = decode_entry(data) {
        let bytes = encode_entry(&e);
        let again = decode_entry(&bytes).expect("re-encoded entry decodes");
        assert_eq!(again, e);
    }
});
