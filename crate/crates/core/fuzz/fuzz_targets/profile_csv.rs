#![no_main]

use libfuzzer_sys::fuzz_target;
use sdiff_dbi::profile::read_profile_csv;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = read_profile_csv(text);
});
