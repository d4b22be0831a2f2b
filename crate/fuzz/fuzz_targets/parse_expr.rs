#![no_main]

use libfuzzer_sys::fuzz_target;
use paratangent::expr::parse_expr;
use paratangent::{Rational, Scalar};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(expr) = parse_expr(s, 3) else { return };
    let reparsed = parse_expr(&expr.to_string(), 3).expect("printed form parses");
    let x = [
        Rational::from_ratio(1, 3),
        Rational::from_ratio(-2, 1),
        Rational::from_ratio(5, 7),
    ];
    // Evaluation may fail (division by zero, float-only features) but must not panic.
    let _ = expr.eval(&x);
    let _ = reparsed.eval(&[0.25f64, -1.5, 2.0]);
});
