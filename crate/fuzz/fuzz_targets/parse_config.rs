#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(config) = cmabmt::harness::ExperimentConfig::from_ini_str(text) {
        let again = cmabmt::harness::ExperimentConfig::from_ini_str(&config.to_ini_string())
            .expect("resolved config reparses");
        assert_eq!(config, again);
    }
});
