//! CSS code families: hypergraph products of classical codes and bivariate
//! bicycle codes built from commuting cyclic shifts.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2::{BinaryMatrix, BitVector, Gf2Error, RowReducer};

/// Largest kernel dimension enumerated by [`min_distance_exhaustive`] unless
/// the caller asks for another budget.
pub const DEFAULT_DISTANCE_BUDGET: usize = 22;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CodeError {
    #[error("parity-check matrix is empty")]
    EmptyCheck,
    #[error("CSS condition violated: h_x * h_z^T != 0")]
    NotCss,
    #[error("check matrices have {h_x} and {h_z} columns")]
    ColumnMismatch { h_x: usize, h_z: usize },
    #[error("invalid exponent {exponent} for axis {axis} with cycle length {cycle}")]
    InvalidExponent { axis: Axis, exponent: usize, cycle: usize },
    #[error("cycle lengths must be positive (got l={l}, m={m})")]
    InvalidCycle { l: usize, m: usize },
    #[error("bivariate polynomial needs exactly three terms, got {0}")]
    TermCount(usize),
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("cannot build a ({bits}, {checks}) biregular graph with degrees ({bit_degree}, {check_degree})")]
    Biregular {
        bits: usize,
        checks: usize,
        bit_degree: usize,
        check_degree: usize,
    },
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
}

/// What is known about a code's minimum distance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Distance {
    /// Certified by exhaustive enumeration.
    Exact { d: usize },
    /// Quoted from the literature, not checked here.
    Unverified { d: usize },
    Unknown { reason: UnknownReason },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UnknownReason {
    NoLogicalOperators,
    BudgetExceeded { kernel_dim: usize, budget: usize },
    NotComputed,
}

impl Distance {
    pub fn value(&self) -> Option<usize> {
        match self {
            Distance::Exact { d } | Distance::Unverified { d } => Some(*d),
            Distance::Unknown { .. } => None,
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Exact { d } => write!(f, "{d}"),
            Distance::Unverified { d } => write!(f, "{d} (unverified)"),
            Distance::Unknown { reason } => write!(f, "unknown ({reason:?})"),
        }
    }
}

/// A CSS code given by its two check matrices.
///
/// Rows of `h_x` are X-type stabilizers and rows of `h_z` are Z-type
/// stabilizers; `h_x * h_z^T = 0` always holds for a constructed value.
#[derive(Debug, Clone, PartialEq)]
pub struct CssCode {
    pub h_x: BinaryMatrix,
    pub h_z: BinaryMatrix,
    pub n: usize,
    pub k: usize,
    pub d_min: Distance,
}

impl CssCode {
    /// Validates the CSS condition and certifies `k` by rank-nullity.
    pub fn new(h_x: BinaryMatrix, h_z: BinaryMatrix) -> Result<Self, CodeError> {
        if h_x.cols() != h_z.cols() {
            return Err(CodeError::ColumnMismatch {
                h_x: h_x.cols(),
                h_z: h_z.cols(),
            });
        }
        if !css_condition(&h_x, &h_z)? {
            return Err(CodeError::NotCss);
        }
        let n = h_x.cols();
        let used = h_x.rank() + h_z.rank();
        // CSS orthogonality forces rank(h_x) + rank(h_z) <= n.
        let k = n
            .checked_sub(used)
            .ok_or_else(|| CodeError::Certification(format!("ranks {used} exceed n = {n}")))?;
        Ok(Self {
            h_x,
            h_z,
            n,
            k,
            d_min: Distance::Unknown {
                reason: UnknownReason::NotComputed,
            },
        })
    }

    /// Steane's [[7,1,3]] code: both check matrices are the Hamming(7,4) checks.
    pub fn steane() -> Self {
        let mut h = BinaryMatrix::zeros(3, 7);
        for col in 0..7 {
            let label = col + 1;
            for bit in 0..3 {
                if label >> bit & 1 == 1 {
                    h.set(bit, col, true);
                }
            }
        }
        let mut code = Self::new(h.clone(), h).expect("Hamming checks are self-orthogonal");
        code.d_min = min_distance_exhaustive(&code, DEFAULT_DISTANCE_BUDGET);
        code
    }

    pub fn certificate(&self) -> CodeCertificate {
        CodeCertificate {
            n: self.n,
            k: self.k,
            d_min: self.d_min.clone(),
            css_ok: css_condition(&self.h_x, &self.h_z).unwrap_or(false),
        }
    }
}

/// Parameter certificate emitted alongside exported check matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeCertificate {
    pub n: usize,
    pub k: usize,
    pub d_min: Distance,
    pub css_ok: bool,
}

pub fn css_condition(h_x: &BinaryMatrix, h_z: &BinaryMatrix) -> Result<bool, Gf2Error> {
    Ok(h_x.matmul(&h_z.transpose())?.is_zero())
}

/// Hypergraph product of a classical code with itself.
///
/// `h` is the `n_b × n_a` check matrix (`n_b` checks on `n_a` bits). The
/// result has `n = n_a² + n_b²` qubits with
/// `h_x = [I_{n_a} ⊗ h | h^T ⊗ I_{n_b}]` and `h_z = [h ⊗ I_{n_a} | I_{n_b} ⊗ h^T]`.
pub fn hypergraph_product(h: &BinaryMatrix) -> Result<CssCode, CodeError> {
    let (n_b, n_a) = (h.rows(), h.cols());
    if n_b == 0 || n_a == 0 {
        return Err(CodeError::EmptyCheck);
    }
    let ht = h.transpose();
    let h_x = BinaryMatrix::identity(n_a)
        .kron(h)?
        .hstack(&ht.kron(&BinaryMatrix::identity(n_b))?)?;
    let h_z = h
        .kron(&BinaryMatrix::identity(n_a))?
        .hstack(&BinaryMatrix::identity(n_b).kron(&ht)?)?;
    let code = CssCode::new(h_x, h_z)?;
    let floor = n_a.abs_diff(n_b).pow(2);
    if code.k < floor {
        return Err(CodeError::Certification(format!(
            "k = {} below (n_a - n_b)^2 = {floor}",
            code.k
        )));
    }
    Ok(code)
}

/// Random `checks × bits` check matrix whose bits all have degree
/// `bit_degree` and whose checks all have degree `check_degree`.
///
/// Built with a configuration model; sockets are re-shuffled until no
/// check touches the same bit twice. Expansion is not certified.
pub fn random_biregular<R: Rng + ?Sized>(
    bits: usize,
    checks: usize,
    bit_degree: usize,
    check_degree: usize,
    rng: &mut R,
) -> Result<BinaryMatrix, CodeError> {
    let fail = CodeError::Biregular {
        bits,
        checks,
        bit_degree,
        check_degree,
    };
    if bits == 0 || checks == 0 || bits * bit_degree != checks * check_degree || check_degree > bits {
        return Err(fail);
    }
    let mut sockets: Vec<usize> = (0..bits).flat_map(|b| std::iter::repeat_n(b, bit_degree)).collect();
    sockets.shuffle(rng);
    // Repair repeated edges by swapping the offending socket with a random one.
    for _ in 0..100_000 {
        let Some(bad) = first_repeat(&sockets, check_degree) else {
            let mut h = BinaryMatrix::zeros(checks, bits);
            for (c, chunk) in sockets.chunks(check_degree).enumerate() {
                for &b in chunk {
                    h.set(c, b, true);
                }
            }
            return Ok(h);
        };
        let other = rng.gen_range(0..sockets.len());
        sockets.swap(bad, other);
    }
    Err(fail)
}

fn first_repeat(sockets: &[usize], check_degree: usize) -> Option<usize> {
    sockets.chunks(check_degree).enumerate().find_map(|(c, chunk)| {
        (1..chunk.len())
            .find(|&i| chunk[..i].contains(&chunk[i]))
            .map(|i| c * check_degree + i)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
        })
    }
}

/// Three-term sum of powers of the shift generators `x` and `y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BbPolynomial {
    pub terms: Vec<(Axis, usize)>,
}

impl BbPolynomial {
    pub fn new(terms: [(Axis, usize); 3]) -> Self {
        Self {
            terms: terms.to_vec(),
        }
    }

    fn validate(&self, l: usize, m: usize) -> Result<(), CodeError> {
        if self.terms.len() != 3 {
            return Err(CodeError::TermCount(self.terms.len()));
        }
        for &(axis, exponent) in &self.terms {
            let cycle = match axis {
                Axis::X => l,
                Axis::Y => m,
            };
            if exponent >= cycle {
                return Err(CodeError::InvalidExponent {
                    axis,
                    exponent,
                    cycle,
                });
            }
        }
        Ok(())
    }

    /// Sum of the matrix powers, with `x = S_l ⊗ I_m` and `y = I_l ⊗ S_m`.
    pub fn to_matrix(&self, l: usize, m: usize) -> Result<BinaryMatrix, CodeError> {
        self.validate(l, m)?;
        let (x, y) = bb_generators(l, m)?;
        let mut acc = BinaryMatrix::zeros(l * m, l * m);
        for &(axis, exponent) in &self.terms {
            let base = match axis {
                Axis::X => &x,
                Axis::Y => &y,
            };
            acc = acc.add(&matrix_power(base, exponent)?)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for BbPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(a, e)| format!("{a}^{e}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `S_l`: row `i` has its single one in column `i + 1 (mod l)`.
pub fn cyclic_shift(l: usize) -> BinaryMatrix {
    let mut s = BinaryMatrix::zeros(l, l);
    for i in 0..l {
        s.set(i, (i + 1) % l, true);
    }
    s
}

fn matrix_power(base: &BinaryMatrix, exponent: usize) -> Result<BinaryMatrix, Gf2Error> {
    let mut out = BinaryMatrix::identity(base.rows());
    for _ in 0..exponent {
        out = out.matmul(base)?;
    }
    Ok(out)
}

/// Bivariate bicycle code with `h_x = [A | B]` and `h_z = [B^T | A^T]`.
///
/// `k` is taken as `2·dim(ker A ∩ ker B)` and must agree with rank-nullity
/// on the check matrices.
pub fn bb_code(l: usize, m: usize, a: &BbPolynomial, b: &BbPolynomial) -> Result<CssCode, CodeError> {
    if l == 0 || m == 0 {
        return Err(CodeError::InvalidCycle { l, m });
    }
    a.validate(l, m)?;
    b.validate(l, m)?;
    bb_code_from_blocks(&a.to_matrix(l, m)?, &b.to_matrix(l, m)?)
}

/// Shift generators `(x, y) = (S_l ⊗ I_m, I_l ⊗ S_m)`.
pub fn bb_generators(l: usize, m: usize) -> Result<(BinaryMatrix, BinaryMatrix), Gf2Error> {
    Ok((
        cyclic_shift(l).kron(&BinaryMatrix::identity(m))?,
        BinaryMatrix::identity(l).kron(&cyclic_shift(m))?,
    ))
}

/// Bicycle construction from two commuting square blocks.
pub fn bb_code_from_blocks(a: &BinaryMatrix, b: &BinaryMatrix) -> Result<CssCode, CodeError> {
    let h_x = a.hstack(b)?;
    let h_z = b.transpose().hstack(&a.transpose())?;
    let code = CssCode::new(h_x, h_z)?;
    let k_kernel = 2 * a.kernel_intersection(b)?.len();
    if k_kernel != code.k {
        return Err(CodeError::Certification(format!(
            "kernel intersection gives k = {k_kernel}, rank-nullity gives {}",
            code.k
        )));
    }
    Ok(code)
}

/// The [[144,12,12]] instance: `l = 12`, `m = 6`, `A = x³ + y + y²`,
/// `B = y³ + x + x²`. The distance is carried as an unverified label.
pub fn gross_code() -> Result<CssCode, CodeError> {
    let a = BbPolynomial::new([(Axis::X, 3), (Axis::Y, 1), (Axis::Y, 2)]);
    let b = BbPolynomial::new([(Axis::Y, 3), (Axis::X, 1), (Axis::X, 2)]);
    let mut code = bb_code(12, 6, &a, &b)?;
    code.d_min = Distance::Unverified { d: 12 };
    Ok(code)
}

/// Which logical sector [`min_distance_exhaustive`] searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceSector {
    /// `min |v|` over `ker(h_x) \ rs(h_z)`.
    #[default]
    X,
    /// `min |v|` over `ker(h_z) \ rs(h_x)`.
    Z,
    /// The smaller of the two.
    Both,
}

/// Exact distance by enumerating every kernel vector, or `Unknown` when the
/// kernel dimension exceeds `budget`.
///
/// Reports the sector-X distance; the symmetric constructions in this crate
/// have equal X and Z distance, and [`min_distance_sector`] computes both
/// when that assumption should be checked.
pub fn min_distance_exhaustive(code: &CssCode, budget: usize) -> Distance {
    min_distance_sector(code, budget, DistanceSector::X)
}

pub fn min_distance_sector(code: &CssCode, budget: usize, sector: DistanceSector) -> Distance {
    match sector {
        DistanceSector::X => sector_distance(&code.h_x, &code.h_z, budget),
        DistanceSector::Z => sector_distance(&code.h_z, &code.h_x, budget),
        DistanceSector::Both => {
            let dx = sector_distance(&code.h_x, &code.h_z, budget);
            let dz = sector_distance(&code.h_z, &code.h_x, budget);
            match (&dx, &dz) {
                (Distance::Exact { d: a }, Distance::Exact { d: b }) => Distance::Exact { d: *a.min(b) },
                (Distance::Unknown { .. }, _) => dx,
                _ => dz,
            }
        }
    }
}

fn sector_distance(checks: &BinaryMatrix, stabilizers: &BinaryMatrix, budget: usize) -> Distance {
    let kernel = checks.kernel_basis();
    let reducer = RowReducer::new(stabilizers);
    if kernel.iter().all(|v| reducer.contains(v)) {
        return Distance::Unknown {
            reason: UnknownReason::NoLogicalOperators,
        };
    }
    if kernel.len() > budget {
        return Distance::Unknown {
            reason: UnknownReason::BudgetExceeded {
                kernel_dim: kernel.len(),
                budget,
            },
        };
    }
    // Gray-code walk: each step flips one basis vector into the running sum.
    let mut current = BitVector::zeros(checks.cols());
    let mut best = usize::MAX;
    for step in 1u64..(1u64 << kernel.len()) {
        let flip = step.trailing_zeros() as usize;
        current.xor_assign(&kernel[flip]);
        let w = current.weight();
        if w < best && !reducer.contains(&current) {
            best = w;
        }
    }
    Distance::Exact { d: best }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rep2() -> BinaryMatrix {
        "11".parse().unwrap()
    }

    #[test]
    fn product_of_repetition_code() {
        let code = hypergraph_product(&rep2()).unwrap();
        assert_eq!((code.n, code.k), (5, 1));
        assert_eq!(code.h_x.rank(), 2);
        assert_eq!(code.h_z.rank(), 2);
        assert_eq!(code.h_x.to_string(), "11001\n00111");
        assert_eq!(code.h_z.to_string(), "10101\n01011");
        assert!(code.h_x.matmul(&code.h_z.transpose()).unwrap().is_zero());
        assert_eq!(min_distance_exhaustive(&code, DEFAULT_DISTANCE_BUDGET), Distance::Exact { d: 2 });
        assert_eq!(
            min_distance_sector(&code, DEFAULT_DISTANCE_BUDGET, DistanceSector::Both),
            Distance::Exact { d: 2 }
        );
    }

    #[test]
    fn product_of_identity_has_no_logicals() {
        let code = hypergraph_product(&BinaryMatrix::identity(2)).unwrap();
        assert_eq!((code.n, code.k), (8, 0));
        assert_eq!(
            min_distance_exhaustive(&code, DEFAULT_DISTANCE_BUDGET),
            Distance::Unknown {
                reason: UnknownReason::NoLogicalOperators
            }
        );
    }

    #[test]
    fn empty_check_rejected() {
        assert_eq!(
            hypergraph_product(&BinaryMatrix::zeros(0, 3)).unwrap_err(),
            CodeError::EmptyCheck
        );
    }

    #[test]
    fn shift_matrix_layout() {
        assert_eq!(cyclic_shift(3).to_string(), "010\n001\n100");
        assert_eq!(cyclic_shift(1).to_string(), "1");
    }

    #[test]
    fn trivial_bb_code() {
        let p = BbPolynomial::new([(Axis::X, 0), (Axis::Y, 0), (Axis::X, 0)]);
        let code = bb_code(1, 1, &p, &p).unwrap();
        assert_eq!((code.n, code.k), (2, 0));
    }

    #[test]
    fn bb_rejects_bad_exponent() {
        let a = BbPolynomial::new([(Axis::X, 4), (Axis::Y, 0), (Axis::Y, 1)]);
        let b = BbPolynomial::new([(Axis::Y, 0), (Axis::X, 1), (Axis::X, 2)]);
        assert!(matches!(
            bb_code(4, 3, &a, &b),
            Err(CodeError::InvalidExponent { axis: Axis::X, exponent: 4, cycle: 4 })
        ));
        assert!(matches!(bb_code(0, 3, &b, &b), Err(CodeError::InvalidCycle { .. })));
    }

    #[test]
    fn gross_code_parameters() {
        let code = gross_code().unwrap();
        assert_eq!((code.n, code.k), (144, 12));
        assert_eq!(code.d_min, Distance::Unverified { d: 12 });
        assert_eq!(
            min_distance_exhaustive(&code, DEFAULT_DISTANCE_BUDGET),
            Distance::Unknown {
                reason: UnknownReason::BudgetExceeded { kernel_dim: 78, budget: 22 }
            }
        );
    }

    #[test]
    fn steane_distance() {
        let code = CssCode::steane();
        assert_eq!((code.n, code.k), (7, 1));
        assert_eq!(min_distance_exhaustive(&code, DEFAULT_DISTANCE_BUDGET), Distance::Exact { d: 3 });
    }

    #[test]
    fn random_biregular_degrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let h = random_biregular(16, 14, 7, 8, &mut rng).unwrap();
        assert!((0..16).all(|c| h.col_weight(c) == 7));
        assert!((0..14).all(|r| h.row_weight(r) == 8));
        assert!(random_biregular(5, 3, 2, 2, &mut rng).is_err());
    }

    #[test]
    fn non_css_pair_rejected() {
        let a: BinaryMatrix = "10".parse().unwrap();
        assert_eq!(CssCode::new(a.clone(), a).unwrap_err(), CodeError::NotCss);
    }
}
