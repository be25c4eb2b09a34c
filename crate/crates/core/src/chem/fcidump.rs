//! FCIDUMP and split-integral sidecar readers.
//!
//! FCIDUMP: a `&FCI ... &END` (or `/`) namelist header with at least `NORB`,
//! `NELEC` and `MS2`, followed by records `value i j k l` with 1-based indices.
//! `i j k l` are two-electron integrals `(ij|kl)` in chemists' notation,
//! `i j 0 0` one-electron core integrals and `0 0 0 0` the core (nuclear) energy.
//! Records with `i > 0, j = k = l = 0` (orbital energies) are accepted and ignored.
//!
//! Sidecar: sections `&KINETIC` and `&POTENTIAL`, each closed by `&END`, holding
//! records `value i j`. Lines starting with `!` or `#` are comments.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use thiserror::Error;

/// Tolerance for symmetry and `h == t + v` consistency checks.
pub const SYMMETRY_TOLERANCE: f64 = 1e-10;

/// Guards against absurd headers allocating `norb^4` storage.
pub const MAX_ORBITALS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntegralError {
    #[error("missing FCIDUMP header")]
    MissingHeader,
    #[error("header is missing required key {0}")]
    MissingKey(&'static str),
    #[error("invalid header value for {key}: {value:?}")]
    BadHeaderValue { key: String, value: String },
    #[error("line {line}: malformed record {text:?}")]
    MalformedRecord { line: usize, text: String },
    #[error("line {line}: orbital index {index} exceeds NORB={norb}")]
    IndexOutOfRange { line: usize, index: usize, norb: usize },
    #[error("integral symmetry violated at {indices:?}: {a} vs {b}")]
    SymmetryViolation { indices: Vec<usize>, a: f64, b: f64 },
    #[error("split integrals do not sum to the core Hamiltonian at ({0}, {1}): diff {2:e}")]
    SplitMismatch(usize, usize, f64),
    #[error("split integrals cover {0} orbitals, expected {1}")]
    SplitShape(usize, usize),
    #[error("split file is missing section {0}")]
    MissingSection(&'static str),
    #[error("NORB={0} is outside the supported range 1..={MAX_ORBITALS}")]
    UnsupportedSize(usize),
    #[error("input is not valid UTF-8")]
    NotUtf8,
}

/// Kinetic and nuclear-attraction parts of the one-electron integrals.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitIntegrals {
    pub kinetic: DMatrix<f64>,
    pub potential: DMatrix<f64>,
}

/// Spatial-orbital integrals.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralSet {
    pub n_orbitals: usize,
    pub n_electrons: usize,
    pub ms2: i64,
    /// One-electron core integrals `h_pq`.
    pub one_body: DMatrix<f64>,
    /// `(pq|rs)` in chemists' notation, flattened `((p*n + q)*n + r)*n + s`.
    pub two_body: Vec<f64>,
    pub core_energy: f64,
    pub split: Option<SplitIntegrals>,
}

impl IntegralSet {
    /// Zero integrals for `n_orbitals` spatial orbitals.
    pub fn empty(n_orbitals: usize, n_electrons: usize) -> Self {
        Self {
            n_orbitals,
            n_electrons,
            ms2: 0,
            one_body: DMatrix::zeros(n_orbitals, n_orbitals),
            two_body: vec![0.0; n_orbitals.pow(4)],
            core_energy: 0.0,
            split: None,
        }
    }

    #[inline]
    fn idx(&self, p: usize, q: usize, r: usize, s: usize) -> usize {
        let n = self.n_orbitals;
        ((p * n + q) * n + r) * n + s
    }

    /// `(pq|rs)`, chemists' notation.
    pub fn eri(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        self.two_body[self.idx(p, q, r, s)]
    }

    /// `<pq|rs> = (pr|qs)`, physicists' notation.
    pub fn eri_physicist(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        self.eri(p, r, q, s)
    }

    /// Sets `(pq|rs)` and all of its 8-fold symmetric partners.
    pub fn set_eri(&mut self, p: usize, q: usize, r: usize, s: usize, value: f64) {
        for (a, b, c, d) in eri_partners(p, q, r, s) {
            let i = self.idx(a, b, c, d);
            self.two_body[i] = value;
        }
    }

    pub fn set_one_body(&mut self, p: usize, q: usize, value: f64) {
        self.one_body[(p, q)] = value;
        self.one_body[(q, p)] = value;
    }

    /// Attaches kinetic/potential integrals after checking they add up to `h_pq`.
    pub fn with_split(mut self, split: SplitIntegrals) -> Result<Self, IntegralError> {
        let n = self.n_orbitals;
        for m in [&split.kinetic, &split.potential] {
            if m.nrows() != n || m.ncols() != n {
                return Err(IntegralError::SplitShape(m.nrows(), n));
            }
        }
        for p in 0..n {
            for q in 0..n {
                let diff = split.kinetic[(p, q)] + split.potential[(p, q)] - self.one_body[(p, q)];
                if diff.abs() > SYMMETRY_TOLERANCE {
                    return Err(IntegralError::SplitMismatch(p + 1, q + 1, diff));
                }
            }
        }
        self.split = Some(split);
        Ok(self)
    }

    /// Verifies `h_pq = h_qp` and the 8-fold permutational symmetry of `(pq|rs)`.
    pub fn check_symmetry(&self) -> Result<(), IntegralError> {
        let n = self.n_orbitals;
        let check = |a: f64, b: f64, indices: Vec<usize>| {
            if (a - b).abs() > SYMMETRY_TOLERANCE {
                Err(IntegralError::SymmetryViolation { indices, a, b })
            } else {
                Ok(())
            }
        };
        for p in 0..n {
            for q in 0..n {
                check(self.one_body[(p, q)], self.one_body[(q, p)], vec![p + 1, q + 1])?;
                if let Some(split) = &self.split {
                    check(split.kinetic[(p, q)], split.kinetic[(q, p)], vec![p + 1, q + 1])?;
                    check(split.potential[(p, q)], split.potential[(q, p)], vec![p + 1, q + 1])?;
                }
                for r in 0..n {
                    for s in 0..n {
                        let v = self.eri(p, q, r, s);
                        for (a, b, c, d) in eri_partners(p, q, r, s) {
                            check(v, self.eri(a, b, c, d), vec![p + 1, q + 1, r + 1, s + 1])?;
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn eri_partners(p: usize, q: usize, r: usize, s: usize) -> [(usize, usize, usize, usize); 8] {
    [
        (p, q, r, s),
        (q, p, r, s),
        (p, q, s, r),
        (q, p, s, r),
        (r, s, p, q),
        (s, r, p, q),
        (r, s, q, p),
        (s, r, q, p),
    ]
}

#[derive(Debug, Default)]
struct Header {
    values: BTreeMap<String, String>,
}

impl Header {
    fn get_usize(&self, key: &'static str) -> Result<usize, IntegralError> {
        let raw = self.values.get(key).ok_or(IntegralError::MissingKey(key))?;
        raw.trim()
            .parse()
            .map_err(|_| IntegralError::BadHeaderValue { key: key.into(), value: raw.clone() })
    }

    fn get_i64(&self, key: &'static str) -> Result<i64, IntegralError> {
        let raw = self.values.get(key).ok_or(IntegralError::MissingKey(key))?;
        raw.trim()
            .parse()
            .map_err(|_| IntegralError::BadHeaderValue { key: key.into(), value: raw.clone() })
    }
}

/// Splits the namelist body into `KEY=value` pairs; list values keep their commas.
fn parse_namelist(body: &str) -> Header {
    let mut header = Header::default();
    let mut current: Option<String> = None;
    let mut buf = String::new();
    // Tokenise on '=': the text before each '=' ends with the next key.
    let pieces: Vec<&str> = body.split('=').collect();
    for (i, piece) in pieces.iter().enumerate() {
        if i == 0 {
            current = Some(piece.trim().trim_matches(',').trim().to_ascii_uppercase());
            continue;
        }
        let (value, next_key) = if i + 1 == pieces.len() {
            (*piece, "")
        } else {
            // The last whitespace/comma separated word is the next key.
            let trimmed = piece.trim_end();
            let cut = trimmed
                .char_indices()
                .rev()
                .find(|(_, c)| *c == ',' || c.is_whitespace())
                .map(|(k, c)| k + c.len_utf8())
                .unwrap_or(0);
            (&trimmed[..cut], &trimmed[cut..])
        };
        buf.clear();
        buf.push_str(value.trim().trim_end_matches(',').trim());
        if let Some(key) = current.take() {
            if !key.is_empty() {
                header.values.insert(key, buf.clone());
            }
        }
        current = Some(next_key.trim().to_ascii_uppercase());
    }
    header
}

/// Parses FCIDUMP bytes.
pub fn parse_fcidump_bytes(bytes: &[u8]) -> Result<IntegralSet, IntegralError> {
    let text = std::str::from_utf8(bytes).map_err(|_| IntegralError::NotUtf8)?;
    parse_fcidump(text)
}

pub fn parse_fcidump(text: &str) -> Result<IntegralSet, IntegralError> {
    let mut lines = text.lines().enumerate();
    // Header: from the line containing "&FCI" to the terminator "&END" or "/".
    let mut body = String::new();
    let mut started = false;
    let mut finished = false;
    for (_, line) in lines.by_ref() {
        let mut rest = line.trim();
        if !started {
            if rest.is_empty() {
                continue;
            }
            let upper = rest.to_ascii_uppercase();
            match upper.find("&FCI") {
                Some(0) => {
                    started = true;
                    rest = &rest[4..];
                }
                _ => return Err(IntegralError::MissingHeader),
            }
        }
        let upper = rest.to_ascii_uppercase();
        let end = upper.find("&END").or_else(|| upper.find('/'));
        if let Some(k) = end {
            body.push_str(&rest[..k]);
            body.push(' ');
            finished = true;
            break;
        }
        body.push_str(rest);
        body.push(' ');
    }
    if !started || !finished {
        return Err(IntegralError::MissingHeader);
    }
    let header = parse_namelist(&body);
    let norb = header.get_usize("NORB")?;
    let nelec = header.get_usize("NELEC")?;
    let ms2 = header.get_i64("MS2")?;
    if norb == 0 || norb > MAX_ORBITALS {
        return Err(IntegralError::UnsupportedSize(norb));
    }

    let mut ints = IntegralSet::empty(norb, nelec);
    ints.ms2 = ms2;
    let mut seen = vec![false; norb.pow(4)];
    let mut seen_one = vec![false; norb * norb];
    for (lineno, line) in lines {
        let line_no = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let malformed = || IntegralError::MalformedRecord { line: line_no, text: trimmed.chars().take(120).collect() };
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(malformed());
        }
        let value: f64 = fields[0].replace(['D', 'd'], "e").parse().map_err(|_| malformed())?;
        if !value.is_finite() {
            return Err(malformed());
        }
        let mut idx = [0usize; 4];
        for (slot, f) in idx.iter_mut().zip(&fields[1..]) {
            *slot = f.parse().map_err(|_| malformed())?;
            if *slot > norb {
                return Err(IntegralError::IndexOutOfRange { line: line_no, index: *slot, norb });
            }
        }
        match idx {
            [0, 0, 0, 0] => ints.core_energy = value,
            [i, 0, 0, 0] if i > 0 => {} // orbital energy
            [i, j, 0, 0] if i > 0 && j > 0 => {
                let (p, q) = (i - 1, j - 1);
                for (a, b) in [(p, q), (q, p)] {
                    if seen_one[a * norb + b] && (ints.one_body[(a, b)] - value).abs() > SYMMETRY_TOLERANCE {
                        return Err(IntegralError::SymmetryViolation {
                            indices: vec![i, j],
                            a: ints.one_body[(a, b)],
                            b: value,
                        });
                    }
                }
                seen_one[p * norb + q] = true;
                seen_one[q * norb + p] = true;
                ints.set_one_body(p, q, value);
            }
            [i, j, k, l] if i > 0 && j > 0 && k > 0 && l > 0 => {
                let (p, q, r, s) = (i - 1, j - 1, k - 1, l - 1);
                let partners = eri_partners(p, q, r, s).map(|(a, b, c, d)| ints.idx(a, b, c, d));
                for &at in &partners {
                    if seen[at] && (ints.two_body[at] - value).abs() > SYMMETRY_TOLERANCE {
                        return Err(IntegralError::SymmetryViolation {
                            indices: vec![i, j, k, l],
                            a: ints.two_body[at],
                            b: value,
                        });
                    }
                }
                for at in partners {
                    seen[at] = true;
                }
                ints.set_eri(p, q, r, s, value);
            }
            _ => return Err(malformed()),
        }
    }
    Ok(ints)
}

pub fn parse_split_integrals_bytes(bytes: &[u8], n_orbitals: usize) -> Result<SplitIntegrals, IntegralError> {
    let text = std::str::from_utf8(bytes).map_err(|_| IntegralError::NotUtf8)?;
    parse_split_integrals(text, n_orbitals)
}

/// Parses the `&KINETIC` / `&POTENTIAL` sidecar for `n_orbitals` spatial orbitals.
pub fn parse_split_integrals(text: &str, n_orbitals: usize) -> Result<SplitIntegrals, IntegralError> {
    if n_orbitals == 0 || n_orbitals > MAX_ORBITALS {
        return Err(IntegralError::UnsupportedSize(n_orbitals));
    }
    let mut kinetic: Option<DMatrix<f64>> = None;
    let mut potential: Option<DMatrix<f64>> = None;
    // 0 = outside any section, 1 = kinetic, 2 = potential
    let mut section = 0u8;
    let mut current = DMatrix::zeros(n_orbitals, n_orbitals);
    for (lineno, line) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('!') || trimmed.starts_with('#') {
            continue;
        }
        let malformed = || IntegralError::MalformedRecord { line: line_no, text: trimmed.chars().take(120).collect() };
        if let Some(tag) = trimmed.strip_prefix('&') {
            match (section, tag.trim().to_ascii_uppercase().as_str()) {
                (0, "KINETIC") => section = 1,
                (0, "POTENTIAL") => section = 2,
                (1 | 2, "END") => {
                    let done = std::mem::replace(&mut current, DMatrix::zeros(n_orbitals, n_orbitals));
                    let slot = if section == 1 { &mut kinetic } else { &mut potential };
                    if slot.is_some() {
                        return Err(malformed());
                    }
                    *slot = Some(done);
                    section = 0;
                }
                _ => return Err(malformed()),
            }
            continue;
        }
        if section == 0 {
            return Err(malformed());
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(malformed());
        }
        let value: f64 = fields[0].replace(['D', 'd'], "e").parse().map_err(|_| malformed())?;
        if !value.is_finite() {
            return Err(malformed());
        }
        let mut ij = [0usize; 2];
        for (slot, f) in ij.iter_mut().zip(&fields[1..]) {
            *slot = f.parse().map_err(|_| malformed())?;
            if *slot == 0 {
                return Err(malformed());
            }
            if *slot > n_orbitals {
                return Err(IntegralError::IndexOutOfRange { line: line_no, index: *slot, norb: n_orbitals });
            }
        }
        let (p, q) = (ij[0] - 1, ij[1] - 1);
        current[(p, q)] = value;
        current[(q, p)] = value;
    }
    if section != 0 {
        return Err(IntegralError::MissingSection(if section == 1 { "&END after &KINETIC" } else { "&END after &POTENTIAL" }));
    }
    Ok(SplitIntegrals {
        kinetic: kinetic.ok_or(IntegralError::MissingSection("&KINETIC"))?,
        potential: potential.ok_or(IntegralError::MissingSection("&POTENTIAL"))?,
    })
}
