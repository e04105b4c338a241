#![no_main]
use libfuzzer_sys::fuzz_target;
use loopvir::poly::CoeffPoly;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(p) = s.parse::<CoeffPoly>() {
        let back: CoeffPoly = p.to_string().parse().expect("printed form reparses");
        assert_eq!(back, p);
    }
});
