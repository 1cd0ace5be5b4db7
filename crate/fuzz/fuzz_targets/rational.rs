#![no_main]

use libfuzzer_sys::fuzz_target;
use padtors::padic::parse_rational;
use padtors::Padic;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if parse_rational(s).is_ok() {
        // a nonzero denominator was accepted, so every prime gives a value
        for p in [5, 7, 101] {
            let _ = Padic::parse_rational(s, p, 24);
        }
    }
});
