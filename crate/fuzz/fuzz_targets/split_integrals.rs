//! Kinetic/potential sidecar parser. The first byte picks the orbital count.

#![no_main]

use libfuzzer_sys::fuzz_target;
use qas_core::chem::parse_split_integrals_bytes;

fuzz_target!(|data: &[u8]| {
    let Some((&n, rest)) = data.split_first() else {
        return;
    };
    let n_orbitals = (n % 8) as usize + 1;
    if let Ok(split) = parse_split_integrals_bytes(rest, n_orbitals) {
        assert_eq!(split.kinetic.nrows(), n_orbitals);
        assert_eq!(split.potential.ncols(), n_orbitals);
    }
});
