#![no_main]
use libfuzzer_sys::fuzz_target;
use mostowkit::cli::{parse_matrix_file, render_matrix_file};

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(m) = parse_matrix_file(s) {
            let back = parse_matrix_file(&render_matrix_file(&m)).expect("rendered matrix parses");
            assert_eq!(back.shape(), m.shape());
            for (a, b) in m.iter().zip(back.iter()) {
                assert_eq!(a.re.to_bits(), b.re.to_bits());
                assert_eq!(a.im.to_bits(), b.im.to_bits());
            }
        }
    }
});
