#![no_main]

use libfuzzer_sys::fuzz_target;
use tyler_rmt::formats::{format_eigenvalue_lines, format_eigenvalues_csv, parse_eigenvalues_csv};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(esd) = parse_eigenvalues_csv(text) {
        let values = esd.eigenvalues();
        assert!(values.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(
            parse_eigenvalues_csv(&format_eigenvalues_csv(&esd)).unwrap(),
            esd
        );
        assert_eq!(
            parse_eigenvalues_csv(&format_eigenvalue_lines(&esd)).unwrap(),
            esd
        );
    }
});
