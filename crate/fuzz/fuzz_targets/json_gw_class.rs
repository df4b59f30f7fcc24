#![no_main]

use gwdeg::json::{gw_from_json, gw_to_json, Context};
use gwdeg_core::FieldSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(v) = serde_json::from_slice::<serde_json::Value>(data) else { return };
    let ctx = Context { field: Some(FieldSpec::Rationals), algebra: None };
    for ctx in [Context::default(), ctx] {
        if let Ok(beta) = gw_from_json(&v, &ctx) {
            let back = gw_from_json(&gw_to_json(&beta), &Context::default()).expect("encoded class decodes");
            assert_eq!(back, beta);
        }
    }
});
