#![no_main]

use libfuzzer_sys::fuzz_target;
use sdiff_dbi::config::RunConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = RunConfig::parse(text) {
        // anything accepted must survive a round trip
        let again = RunConfig::parse(&cfg.to_text()).expect("serialized config parses");
        assert_eq!(again.to_text(), cfg.to_text());
    }
});
