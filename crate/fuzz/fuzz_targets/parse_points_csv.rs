#![no_main]

use libfuzzer_sys::fuzz_target;
use paratangent::format::{parse_points_csv, write_points_csv};
use paratangent::Rational;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(table) = parse_points_csv::<Rational>(s) {
        if !table.points.is_empty() {
            let again =
                parse_points_csv::<Rational>(&write_points_csv(&table.points, table.values.as_deref())).unwrap();
            assert_eq!(again, table);
        }
    }
    let _ = parse_points_csv::<f64>(s);
});
