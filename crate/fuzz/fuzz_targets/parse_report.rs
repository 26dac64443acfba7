#![no_main]
use libfuzzer_sys::fuzz_target;
use mostowkit::cli::{parse_report, render_report};

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(r) = parse_report(s) {
            let _ = parse_report(&render_report(&r));
        }
    }
});
