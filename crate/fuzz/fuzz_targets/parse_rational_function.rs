#![no_main]

use gwdeg::parse::parse_rational_function;
use gwdeg_core::{global_unstable_degree, FieldSpec, PointedRationalFunction};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let field = if text.len() % 2 == 0 { FieldSpec::Rationals } else { FieldSpec::prime(5).unwrap() };
    let Ok((num, den)) = parse_rational_function(text, field) else { return };
    if let Ok(q) = PointedRationalFunction::from_fraction(&num, &den) {
        if q.degree() <= 12 {
            let u = global_unstable_degree(&q).expect("pointed functions have a degree");
            assert_eq!(u.rank(), q.degree());
        }
    }
});
