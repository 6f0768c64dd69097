#![no_main]

use libfuzzer_sys::fuzz_target;
use tyler_rmt::formats::{format_matrix_csv, parse_matrix_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(m) = parse_matrix_csv(text) {
        assert!(m.iter().all(|v| v.is_finite()));
        let again = parse_matrix_csv(&format_matrix_csv(&m)).expect("formatted matrix parses");
        assert_eq!(m, again);
    }
});
