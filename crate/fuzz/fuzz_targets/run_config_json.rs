#![no_main]

use libfuzzer_sys::fuzz_target;
use pstchain::config::{PartialConfig, RunConfig};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(partial) = PartialConfig::from_json(s) else { return };
    let text = serde_json::to_string(&partial).unwrap();
    assert_eq!(PartialConfig::from_json(&text).unwrap(), partial);
    if let Ok(cfg) = RunConfig::try_from(partial) {
        assert!(cfg.n >= 1 && cfg.tol > 0.0);
    }
});
