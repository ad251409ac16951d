#![no_main]

use libfuzzer_sys::fuzz_target;
use sdiff_dbi::{parse_potential, Sector};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    for sector in [Sector::Baby2D, Sector::Skyrme3D] {
        if let Ok(v) = parse_potential(text, sector) {
            assert!(v.vacuum_exponent() > 0.0 && v.vacuum_exponent().is_finite());
            let (lo, hi) = v.domain();
            let mid = 0.5 * (lo + hi);
            assert!(v.value(mid) >= 0.0);
            assert!(v.value(v.vacuum_coordinate()).abs() < 1e-12);
        }
    }
});
