#![no_main]

use libfuzzer_sys::fuzz_target;
use tyler_rmt::formats::{format_law_table, parse_grid, MAX_GRID_POINTS};
use tyler_rmt::laws::ReferenceLaw;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(grid) = parse_grid(text) {
        assert!(!grid.is_empty() && grid.len() <= MAX_GRID_POINTS);
        assert!(grid.windows(2).all(|w| w[0] <= w[1]));
        if grid.len() <= 64 {
            let table = format_law_table(&ReferenceLaw::Semicircle, &grid);
            assert_eq!(table.lines().count(), grid.len() + 1);
        }
    }
});
