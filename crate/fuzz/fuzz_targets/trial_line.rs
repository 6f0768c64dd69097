#![no_main]

use libfuzzer_sys::fuzz_target;
use tyler_rmt::harness::persist::trials_to_jsonl;
use tyler_rmt::harness::{parse_trial_line, parse_trials};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(trials) = parse_trials(text) {
        assert_eq!(parse_trials(&trials_to_jsonl(&trials)).unwrap(), trials);
    }
    if let Ok(trial) = parse_trial_line(text) {
        let line = trials_to_jsonl([&trial]);
        assert_eq!(parse_trial_line(line.trim_end()).unwrap(), trial);
    }
});
