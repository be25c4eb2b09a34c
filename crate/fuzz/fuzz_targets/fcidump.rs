//! Integral-file parser: arbitrary bytes must yield `Ok` or `Err`, never a
//! panic, and accepted input must satisfy the declared index symmetry.

#![no_main]

use libfuzzer_sys::fuzz_target;
use qas_core::chem::parse_fcidump_bytes;

fuzz_target!(|data: &[u8]| {
    if data.len() > 64 * 1024 {
        return;
    }
    if let Ok(ints) = parse_fcidump_bytes(data) {
        assert!(ints.check_symmetry().is_ok());
        assert_eq!(ints.one_body.nrows(), ints.n_orbitals);
    }
});
