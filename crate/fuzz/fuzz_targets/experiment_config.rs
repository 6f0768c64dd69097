#![no_main]

use libfuzzer_sys::fuzz_target;
use tyler_rmt::harness::ExperimentConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cfg) = ExperimentConfig::from_json_str(text) {
        let pairs = cfg.pairs().expect("validated config has pairs");
        assert!(pairs.iter().all(|&(d, n)| d >= 1 && n >= 1));
        cfg.total_trials().expect("validated config counts trials");
        let again = ExperimentConfig::from_json_str(&cfg.to_json_pretty())
            .expect("serialized config parses");
        assert_eq!(cfg, again);
    }
});
