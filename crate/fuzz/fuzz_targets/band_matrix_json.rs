#![no_main]

use libfuzzer_sys::fuzz_target;
use pstchain::chain::{mirror_symmetry_check, BandMatrix};

fuzz_target!(|data: &[u8]| {
    let Ok(m) = serde_json::from_slice::<BandMatrix>(data) else { return };
    let text = serde_json::to_string(&m).unwrap();
    assert_eq!(serde_json::from_str::<BandMatrix>(&text).unwrap(), m);
    if m.n_sites() <= 64 {
        let _ = m.to_dense();
        let _ = mirror_symmetry_check(&m, 1e-12);
    }
});
