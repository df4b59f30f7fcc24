#![no_main]

use gwdeg::parse::parse_algebra;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(alg) = parse_algebra(text) {
        let again = parse_algebra(&alg.to_string()).expect("printed descriptor reparses");
        assert_eq!(again, alg);
    }
});
