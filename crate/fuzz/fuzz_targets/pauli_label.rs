//! Pauli labels: anything accepted must print back to an equal string.

#![no_main]

use libfuzzer_sys::fuzz_target;
use qas_core::PauliString;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(p) = text.parse::<PauliString>() {
        let again: PauliString = p.to_string().parse().expect("display output must parse");
        assert_eq!(p, again);
        assert!(p.multiply(&p.inverse()).unwrap().is_identity());
    }
});
