#![no_main]

use gwdeg::parse::{parse_field, parse_scalar_list};
use libfuzzer_sys::fuzz_target;

// First line: a field descriptor. Rest: a comma-separated scalar list.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let (head, rest) = text.split_once('\n').unwrap_or((text, ""));
    let Ok(field) = parse_field(head) else { return };
    if let Ok(values) = parse_scalar_list(rest, field) {
        for v in values {
            assert_eq!(v.field(), field);
        }
    }
});
