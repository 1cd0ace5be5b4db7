#![no_main]

use libfuzzer_sys::fuzz_target;
use padtors::elliptic::CurvePoint;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(pt) = CurvePoint::from_json(s) {
        assert_eq!(CurvePoint::from_json(&pt.to_json()).expect("emitted JSON parses"), pt);
    }
});
