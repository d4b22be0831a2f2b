#![no_main]

use libfuzzer_sys::fuzz_target;
use paratangent::{Rational, Scalar};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(v) = Rational::parse_text(s) {
        assert_eq!(Rational::parse_text(&v.to_text()).unwrap(), v);
    }
    if let Ok(v) = f64::parse_text(s) {
        assert!(v.is_finite());
        assert_eq!(f64::parse_text(&v.to_text()).unwrap(), v);
    }
});
