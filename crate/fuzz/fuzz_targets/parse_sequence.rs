#![no_main]

use libfuzzer_sys::fuzz_target;
use paratangent::format::{parse_sequence, to_json, SequenceDocument};
use paratangent::Rational;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(loaded) = parse_sequence::<Rational>(s) {
        let doc = SequenceDocument::from_sequence(&loaded.sequence, loaded.d, loaded.values.as_deref());
        let again = parse_sequence::<Rational>(&to_json(&doc)).unwrap();
        assert_eq!(again, loaded);
    }
    let _ = parse_sequence::<f64>(s);
});
