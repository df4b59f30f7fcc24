#![no_main]

use gwdeg::parse::parse_polynomial;
use gwdeg_core::FieldSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    for field in [FieldSpec::Rationals, FieldSpec::prime(7).unwrap()] {
        if let Ok(p) = parse_polynomial(text, field) {
            // printing and reparsing is the identity
            let again = parse_polynomial(&p.to_string(), field).expect("printed polynomial reparses");
            assert_eq!(again, p);
        }
    }
});
