#![no_main]

use gwdeg::json::{gwu_from_json, gwu_to_json, Context};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(v) = serde_json::from_slice::<serde_json::Value>(data) else { return };
    if let Ok(a) = gwu_from_json(&v, &Context::default()) {
        let back = gwu_from_json(&gwu_to_json(&a), &Context::default()).expect("encoded class decodes");
        assert_eq!(back, a);
    }
});
