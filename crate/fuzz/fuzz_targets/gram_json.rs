#![no_main]
use libfuzzer_sys::fuzz_target;
use loopvir::verma::GramMatrix;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(g) = GramMatrix::from_json(s) {
        let text = g.to_json().to_string();
        assert_eq!(GramMatrix::from_json(&text).expect("export reparses"), g);
    }
});
