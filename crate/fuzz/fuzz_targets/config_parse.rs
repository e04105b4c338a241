#![no_main]
use libfuzzer_sys::fuzz_target;
use loopvir_cli::config::RunConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(c) = RunConfig::from_toml(s) {
        let _ = c.validate();
        let _ = c.kappa_exact();
        let _ = c.lambda_exact();
    }
});
