#![no_main]

use libfuzzer_sys::fuzz_target;
use pstchain::analysis::{FrPrediction, PstPrediction};

fuzz_target!(|data: &[u8]| {
    if let Ok(p) = serde_json::from_slice::<PstPrediction>(data) {
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<PstPrediction>(&text).unwrap(), p);
        if let Some(c) = p.certificate() {
            let _ = c.is_consistent();
        }
    }
    if let Ok(p) = serde_json::from_slice::<FrPrediction>(data) {
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<FrPrediction>(&text).unwrap(), p);
        if let Some(c) = p.certificate() {
            let _ = c.is_consistent();
        }
    }
});
