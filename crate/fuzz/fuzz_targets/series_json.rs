#![no_main]

use libfuzzer_sys::fuzz_target;
use padtors::series::PadicSeries;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(f) = PadicSeries::from_json(s) {
        assert_eq!(PadicSeries::from_json(&f.to_json()).expect("emitted JSON parses"), f);
    }
});
