#![no_main]

use libfuzzer_sys::fuzz_target;
use pstchain::ratio::ExactRatio;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(r) = s.parse::<ExactRatio>() {
        assert!(r.numer() >= 0 && r.denom() >= 1);
        assert_eq!(r.to_string().parse::<ExactRatio>().unwrap(), r);
    }
});
