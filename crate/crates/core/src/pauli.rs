//! Bit-packed Pauli strings, weighted Pauli sums and the Jordan-Wigner map.
//!
//! A [`PauliString`] on `n` qubits is stored as two masks: bit `q` of `x_mask`
//! is set when qubit `q` carries X or Y, bit `q` of `z_mask` when it carries Z
//! or Y. The operator is `phase * P` where `P` is the Hermitian tensor product
//! (so `x = z = 1` is a genuine `Y`, not `XZ`). Qubit `q` corresponds to bit `q`
//! of a computational-basis index.
//!
//! Text labels list qubit 0 first: `"XIZ"` is `X` on qubit 0 and `Z` on qubit 2.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

/// Largest supported register.
pub const MAX_QUBITS: usize = 63;

/// Coefficients whose magnitude falls below this are removed when terms merge.
pub const DEFAULT_DROP_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PauliError {
    #[error("qubit count mismatch: {0} vs {1}")]
    QubitMismatch(usize, usize),
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },
    #[error("register of {0} qubits is not supported (max {MAX_QUBITS})")]
    TooManyQubits(usize),
    #[error("mode {mode} out of range for {n_modes} modes")]
    ModeOutOfRange { mode: usize, n_modes: usize },
    #[error("invalid Pauli label {0:?}")]
    InvalidLabel(String),
    #[error("matrix of dimension {0} is not a power of two")]
    BadDimension(usize),
}

/// A phase `i^k`, `k` in `0..4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(k: u32) -> Self {
        Phase((k % 4) as u8)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    pub fn conj(self) -> Self {
        Phase((4 - self.0) % 4)
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.0 {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        })
    }
}

/// Single-qubit Pauli factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

fn mask_for(n_qubits: usize) -> u64 {
    if n_qubits == 64 {
        u64::MAX
    } else {
        (1u64 << n_qubits) - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n_qubits: usize,
    x_mask: u64,
    z_mask: u64,
    phase: Phase,
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Result<Self, PauliError> {
        Self::from_masks(n_qubits, 0, 0, Phase::ONE)
    }

    pub fn from_masks(n_qubits: usize, x_mask: u64, z_mask: u64, phase: Phase) -> Result<Self, PauliError> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(PauliError::TooManyQubits(n_qubits));
        }
        let valid = mask_for(n_qubits);
        if (x_mask | z_mask) & !valid != 0 {
            let index = 63 - ((x_mask | z_mask) & !valid).leading_zeros() as usize;
            return Err(PauliError::QubitOutOfRange { index, n_qubits });
        }
        Ok(Self { n_qubits, x_mask, z_mask, phase })
    }

    /// A single non-identity factor on `qubit`.
    pub fn single(n_qubits: usize, qubit: usize, pauli: Pauli) -> Result<Self, PauliError> {
        if qubit >= n_qubits {
            return Err(PauliError::QubitOutOfRange { index: qubit, n_qubits });
        }
        let (x, z) = pauli.bits();
        Self::from_masks(n_qubits, (x as u64) << qubit, (z as u64) << qubit, Phase::ONE)
    }

    /// Builds a string from `(qubit, factor)` pairs; later factors on the same qubit multiply in.
    pub fn from_factors(n_qubits: usize, factors: &[(usize, Pauli)]) -> Result<Self, PauliError> {
        let mut out = Self::identity(n_qubits)?;
        for &(q, p) in factors {
            out = out.multiply(&Self::single(n_qubits, q, p)?)?;
        }
        Ok(out)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn x_mask(&self) -> u64 {
        self.x_mask
    }

    pub fn z_mask(&self) -> u64 {
        self.z_mask
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    /// The same string with phase `+1`.
    pub fn unphased(self) -> Self {
        self.with_phase(Phase::ONE)
    }

    pub fn is_identity(&self) -> bool {
        self.x_mask == 0 && self.z_mask == 0
    }

    pub fn weight(&self) -> u32 {
        (self.x_mask | self.z_mask).count_ones()
    }

    pub fn factor(&self, qubit: usize) -> Pauli {
        Pauli::from_bits(self.x_mask >> qubit & 1 == 1, self.z_mask >> qubit & 1 == 1)
    }

    /// Number of `Y` factors.
    pub fn y_count(&self) -> u32 {
        (self.x_mask & self.z_mask).count_ones()
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x_mask & other.z_mask).count_ones() + (self.z_mask & other.x_mask).count_ones()).is_multiple_of(2)
    }

    /// Operator product `self * other`, tracking the accumulated phase.
    pub fn multiply(&self, other: &PauliString) -> Result<PauliString, PauliError> {
        if self.n_qubits != other.n_qubits {
            return Err(PauliError::QubitMismatch(self.n_qubits, other.n_qubits));
        }
        // Hermitian P = i^{|x&z|} X^x Z^z and Z^z1 X^x2 = (-1)^{|z1&x2|} X^x2 Z^z1.
        let x = self.x_mask ^ other.x_mask;
        let z = self.z_mask ^ other.z_mask;
        let k = self.y_count() + other.y_count() + 2 * (self.z_mask & other.x_mask).count_ones() + 4 * 64
            - (x & z).count_ones();
        let phase = self.phase * other.phase * Phase::from_exponent(k);
        Ok(PauliString { n_qubits: self.n_qubits, x_mask: x, z_mask: z, phase })
    }

    /// Inverse element: `P^-1 = conj(phase) * P` since every unphased string squares to `I`.
    pub fn inverse(&self) -> PauliString {
        self.with_phase(self.phase.conj())
    }

    /// Acts on computational basis index `b`: returns `(b', c)` with `P|b> = c|b'>`.
    #[inline]
    pub fn act_on_basis(&self, b: usize) -> (usize, Complex64) {
        let b64 = b as u64;
        // X^x Z^z |b> = (-1)^{|z&b|} |b ^ x>, then multiply by i^{|x&z|} and the string phase.
        let sign = (self.z_mask & b64).count_ones() * 2;
        let k = sign + self.y_count() + self.phase.exponent() as u32;
        ((b64 ^ self.x_mask) as usize, Phase::from_exponent(k).to_complex())
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let dim = 1usize << self.n_qubits;
        let mut m = DMatrix::zeros(dim, dim);
        for b in 0..dim {
            let (row, c) = self.act_on_basis(b);
            m[(row, b)] = c;
        }
        m
    }

    fn sort_key(&self) -> (u64, u64, u8) {
        (self.x_mask, self.z_mask, self.phase.exponent())
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PauliString {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.n_qubits
            .cmp(&other.n_qubits)
            .then_with(|| self.sort_key().cmp(&other.sort_key()))
    }
}

impl Neg for PauliString {
    type Output = PauliString;
    fn neg(self) -> PauliString {
        let phase = self.phase * Phase::MINUS_ONE;
        self.with_phase(phase)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.phase != Phase::ONE {
            write!(f, "{}", self.phase)?;
        }
        for q in 0..self.n_qubits {
            write!(f, "{}", self.factor(q).as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = PauliError;

    /// Parses `[+|-][i]` followed by one of `IXYZ` per qubit, qubit 0 first.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PauliError::InvalidLabel(s.chars().take(80).collect());
        let mut rest = s.trim();
        let mut phase = Phase::ONE;
        if let Some(r) = rest.strip_prefix('-') {
            phase = Phase::MINUS_ONE;
            rest = r;
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        }
        if let Some(r) = rest.strip_prefix('i') {
            phase = phase * Phase::I;
            rest = r;
        }
        let n = rest.chars().count();
        if n == 0 || n > MAX_QUBITS {
            return Err(bad());
        }
        let (mut x, mut z) = (0u64, 0u64);
        for (q, c) in rest.chars().enumerate() {
            let p = match c {
                'I' => Pauli::I,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                _ => return Err(bad()),
            };
            let (bx, bz) = p.bits();
            x |= (bx as u64) << q;
            z |= (bz as u64) << q;
        }
        PauliString::from_masks(n, x, z, phase)
    }
}

/// Weighted sum of Pauli strings with unique, phase-free keys.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: BTreeMap<PauliString, Complex64>,
    drop_tolerance: f64,
}

impl PauliSum {
    pub fn zero(n_qubits: usize) -> Self {
        Self::with_tolerance(n_qubits, DEFAULT_DROP_TOLERANCE)
    }

    pub fn with_tolerance(n_qubits: usize, drop_tolerance: f64) -> Self {
        Self { n_qubits, terms: BTreeMap::new(), drop_tolerance }
    }

    pub fn identity(n_qubits: usize, coefficient: Complex64) -> Result<Self, PauliError> {
        let mut s = Self::zero(n_qubits);
        s.add_term(coefficient, PauliString::identity(n_qubits)?)?;
        Ok(s)
    }

    pub fn from_terms<I>(n_qubits: usize, terms: I) -> Result<Self, PauliError>
    where
        I: IntoIterator<Item = (Complex64, PauliString)>,
    {
        let mut s = Self::zero(n_qubits);
        for (c, p) in terms {
            s.add_term(c, p)?;
        }
        Ok(s)
    }

    /// Builds a sum from merged weights, dropping those below `drop_tolerance` and
    /// clearing imaginary parts smaller than it.
    pub(crate) fn from_merged(
        n_qubits: usize,
        mut terms: BTreeMap<PauliString, Complex64>,
        drop_tolerance: f64,
    ) -> Self {
        terms.retain(|_, c| c.norm() >= drop_tolerance);
        for c in terms.values_mut() {
            if c.im.abs() < drop_tolerance {
                c.im = 0.0;
            }
        }
        Self { n_qubits, terms, drop_tolerance }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn drop_tolerance(&self) -> f64 {
        self.drop_tolerance
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `coefficient * string`, folding the string's phase into the weight.
    pub fn add_term(&mut self, coefficient: Complex64, string: PauliString) -> Result<(), PauliError> {
        if string.n_qubits() != self.n_qubits {
            return Err(PauliError::QubitMismatch(self.n_qubits, string.n_qubits()));
        }
        let weight = coefficient * string.phase().to_complex();
        let key = string.unphased();
        let tol = self.drop_tolerance;
        let entry = self.terms.entry(key).or_insert(Complex64::new(0.0, 0.0));
        *entry += weight;
        if entry.norm() < tol {
            self.terms.remove(&key);
        }
        Ok(())
    }

    pub fn coefficient(&self, string: &PauliString) -> Complex64 {
        let key = string.unphased();
        let c = self.terms.get(&key).copied().unwrap_or_default();
        // `string` = phase * key, so the weight on `string` is c / phase.
        c * string.phase().conj().to_complex()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PauliString, &Complex64)> {
        self.terms.iter()
    }

    pub fn strings(&self) -> impl Iterator<Item = &PauliString> {
        self.terms.keys()
    }

    pub fn scale(&self, factor: Complex64) -> PauliSum {
        let mut out = Self::with_tolerance(self.n_qubits, self.drop_tolerance);
        for (p, c) in &self.terms {
            out.add_term(c * factor, *p).expect("same register");
        }
        out
    }

    pub fn add(&self, other: &PauliSum) -> Result<PauliSum, PauliError> {
        let mut out = self.clone();
        out.add_assign(other)?;
        Ok(out)
    }

    pub fn add_assign(&mut self, other: &PauliSum) -> Result<(), PauliError> {
        if other.n_qubits != self.n_qubits {
            return Err(PauliError::QubitMismatch(self.n_qubits, other.n_qubits));
        }
        for (p, c) in &other.terms {
            self.add_term(*c, *p)?;
        }
        Ok(())
    }

    /// Distributive product `self * other` with like terms merged.
    pub fn product(&self, other: &PauliSum) -> Result<PauliSum, PauliError> {
        if other.n_qubits != self.n_qubits {
            return Err(PauliError::QubitMismatch(self.n_qubits, other.n_qubits));
        }
        // Accumulate without dropping, then filter once, so partial sums that pass
        // through zero are not lost.
        let mut acc: BTreeMap<PauliString, Complex64> = BTreeMap::new();
        for (pa, ca) in &self.terms {
            for (pb, cb) in &other.terms {
                let prod = pa.multiply(pb)?;
                *acc.entry(prod.unphased()).or_default() += ca * cb * prod.phase().to_complex();
            }
        }
        let tol = self.drop_tolerance.max(other.drop_tolerance);
        acc.retain(|_, c| c.norm() >= tol);
        Ok(PauliSum { n_qubits: self.n_qubits, terms: acc, drop_tolerance: self.drop_tolerance })
    }

    pub fn adjoint(&self) -> PauliSum {
        let terms = self.terms.iter().map(|(p, c)| (*p, c.conj())).collect();
        PauliSum { n_qubits: self.n_qubits, terms, drop_tolerance: self.drop_tolerance }
    }

    /// True when every (phase-normalised) weight is real within `tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.im.abs() <= tol)
    }

    /// Sum of absolute weights (the `lambda` of LCU-type cost models).
    pub fn one_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    /// Weight of the identity string.
    pub fn constant(&self) -> Complex64 {
        PauliString::identity(self.n_qubits).map(|id| self.coefficient(&id)).unwrap_or_default()
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let dim = 1usize << self.n_qubits;
        let mut m = DMatrix::zeros(dim, dim);
        for (p, c) in &self.terms {
            for b in 0..dim {
                let (row, phase) = p.act_on_basis(b);
                m[(row, b)] += c * phase;
            }
        }
        m
    }

    /// Largest absolute matrix element of the dense operator.
    pub fn max_abs_element(&self) -> f64 {
        self.to_dense().iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Pauli decomposition `c_P = Tr(P M) / 2^n` of a dense `2^n x 2^n` matrix.
    pub fn from_dense(m: &DMatrix<Complex64>) -> Result<PauliSum, PauliError> {
        let dim = m.nrows();
        if dim != m.ncols() || dim < 2 || !dim.is_power_of_two() {
            return Err(PauliError::BadDimension(dim));
        }
        let n = dim.trailing_zeros() as usize;
        let mut out = PauliSum::zero(n);
        for x in 0..dim as u64 {
            for z in 0..dim as u64 {
                let p = PauliString::from_masks(n, x, z, Phase::ONE)?;
                // Tr(P M) = sum_b <b|P M|b> = sum_b sum_{b'} P_{b b'} M_{b' b}
                let mut tr = Complex64::new(0.0, 0.0);
                for col in 0..dim {
                    let (row, c) = p.act_on_basis(col);
                    // P_{row,col} = c, contributes P_{row col} M_{col row}
                    tr += c * m[(col, row)];
                }
                let coeff = tr / dim as f64;
                if coeff.norm() >= out.drop_tolerance {
                    out.terms.insert(p, coeff);
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (p, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({:+.6}{:+.6}i) {}", c.re, c.im, p)?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// A fermionic creation (`dagger`) or annihilation operator on spin-orbital `mode`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FermionOp {
    pub mode: usize,
    pub dagger: bool,
}

impl FermionOp {
    pub fn create(mode: usize) -> Self {
        Self { mode, dagger: true }
    }

    pub fn annihilate(mode: usize) -> Self {
        Self { mode, dagger: false }
    }
}

/// Jordan-Wigner image: `a†_p -> (X_p - iY_p)/2 * Z_0 ... Z_{p-1}`, `a_p` its adjoint.
pub fn jordan_wigner(op: FermionOp, n_modes: usize) -> Result<PauliSum, PauliError> {
    if op.mode >= n_modes {
        return Err(PauliError::ModeOutOfRange { mode: op.mode, n_modes });
    }
    let p = op.mode;
    let z_string = (1u64 << p) - 1;
    let bit = 1u64 << p;
    let x = PauliString::from_masks(n_modes, bit, z_string, Phase::ONE)?;
    let y = PauliString::from_masks(n_modes, bit, z_string | bit, Phase::ONE)?;
    let y_weight = if op.dagger { -0.5 } else { 0.5 };
    PauliSum::from_terms(n_modes, [(Complex64::new(0.5, 0.0), x), (Complex64::new(0.0, y_weight), y)])
}

/// Jordan-Wigner image of an ordered product of fermionic operators.
pub fn jordan_wigner_product(ops: &[FermionOp], n_modes: usize) -> Result<PauliSum, PauliError> {
    let mut out = PauliSum::identity(n_modes, Complex64::new(1.0, 0.0))?;
    for op in ops {
        out = out.product(&jordan_wigner(*op, n_modes)?)?;
    }
    Ok(out)
}
