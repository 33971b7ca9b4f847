#![no_main]

use libfuzzer_sys::fuzz_target;
use pstchain::expr::{Param, TimeExpr};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(t) = s.parse::<TimeExpr>() {
        assert!(t.value.is_finite() && t.value >= 0.0);
        if let Some(r) = t.pi_multiple {
            let again: TimeExpr = t.to_string().parse().unwrap();
            assert_eq!(again.pi_multiple, Some(r));
        }
    }
    if let Ok(p) = s.parse::<Param>() {
        assert!(p.value.is_finite() && p.value >= 0.0);
        if let Some(r) = p.exact {
            assert_eq!(p.to_string().parse::<Param>().unwrap().exact, Some(r));
        }
    }
});
