#![no_main]

use libfuzzer_sys::fuzz_target;
use pstchain::analysis::FidelitySeries;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(series) = FidelitySeries::from_csv(s) {
        assert_eq!(FidelitySeries::from_csv(&series.to_csv()).unwrap(), series);
    }
});
