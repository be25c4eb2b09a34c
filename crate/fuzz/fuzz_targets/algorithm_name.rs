#![no_main]

use libfuzzer_sys::fuzz_target;
use qas_core::resource::Algorithm;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(a) = text.parse::<Algorithm>() {
            assert_eq!(a.to_string().parse::<Algorithm>().unwrap(), a);
        }
    }
});
