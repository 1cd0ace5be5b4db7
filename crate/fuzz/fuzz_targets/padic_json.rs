#![no_main]

use libfuzzer_sys::fuzz_target;
use padtors::Padic;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(x) = Padic::from_json(s) {
        assert_eq!(Padic::from_json(&x.to_json()).expect("emitted JSON parses"), x);
    }
});
