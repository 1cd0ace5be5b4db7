#![no_main]

use libfuzzer_sys::fuzz_target;
use padtors::elliptic::WeierstrassCurve;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(e) = WeierstrassCurve::from_json(s) {
        let back = WeierstrassCurve::from_json(&e.to_json()).expect("emitted JSON parses");
        assert_eq!(back.a4(), e.a4());
        assert_eq!(back.a6(), e.a6());
    }
});
