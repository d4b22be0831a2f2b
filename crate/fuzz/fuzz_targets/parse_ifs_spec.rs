#![no_main]

use libfuzzer_sys::fuzz_target;
use paratangent::format::{parse_ifs_spec, to_json, IfsDocument};
use paratangent::{IfsSystem, Rational};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(system) = parse_ifs_spec::<Rational>(s) {
        let again: IfsSystem<Rational> = parse_ifs_spec(&to_json(&IfsDocument::from_system(&system))).unwrap();
        assert_eq!(again, system);
    }
    let _ = parse_ifs_spec::<f64>(s);
});
