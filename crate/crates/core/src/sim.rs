//! Pauli-frame Monte Carlo of repeated wait–refresh cycles on small CSS
//! codes, plus an exact enumeration of the single-cycle failure probability.
//!
//! Frames are stored as bit masks (qubit `i` is bit `i`), so codes are
//! limited to [`MAX_SIM_QUBITS`] qubits. X errors are seen by the Z checks
//! (`h_z`) and Z errors by the X checks (`h_x`); the two sectors are decoded
//! independently.
//!
//! Noisy syndromes can leave the frame off the code space. After the last
//! cycle one noiseless decoding round is applied, and the trial fails if the
//! remaining frame is not a stabilizer.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codes::CssCode;
use crate::gf2::{BinaryMatrix, BitVector, RowReducer};

pub const MAX_SIM_QUBITS: usize = 10;
/// Largest number of checks per sector handled by the lookup table.
pub const MAX_SYNDROME_BITS: usize = 20;
/// Largest code for [`exact_logical_error`].
pub const MAX_EXACT_QUBITS: usize = 7;
/// Largest total syndrome length for [`exact_logical_error`] with `q > 0`.
pub const MAX_EXACT_SYNDROME_BITS: usize = 8;
/// Trials per RNG stream.
pub const BLOCK_TRIALS: u64 = 16_384;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("code has {n} qubits; at most {max} are supported")]
    CodeTooLarge { n: usize, max: usize },
    #[error("{bits} syndrome bits exceed the limit of {max}")]
    SyndromeTooLarge { bits: usize, max: usize },
    #[error("{name} = {value} is outside [0, 1]")]
    Probability { name: &'static str, value: f64 },
    #[error("at least one trial and one cycle are required")]
    Empty,
}

fn check_probability(name: &'static str, value: f64) -> Result<(), SimError> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(SimError::Probability { name, value })
    }
}

fn row_masks(h: &BinaryMatrix) -> Vec<u64> {
    (0..h.rows()).map(|r| h.row(r).to_mask()).collect()
}

fn syndrome(rows: &[u64], e: u64) -> u64 {
    rows.iter()
        .enumerate()
        .fold(0, |s, (i, &r)| s | (((r & e).count_ones() as u64) & 1) << i)
}

/// Visits every subset of `0..n` by increasing size, lexicographic within a size.
fn for_each_pattern(n: usize, mut visit: impl FnMut(u64)) {
    fn rec(start: usize, n: usize, left: usize, acc: u64, visit: &mut dyn FnMut(u64)) {
        if left == 0 {
            visit(acc);
            return;
        }
        for i in start..=n - left {
            rec(i + 1, n, left - 1, acc | 1 << i, visit);
        }
    }
    for w in 0..=n {
        rec(0, n, w, 0, &mut visit);
    }
}

/// Minimum-weight lookup table for one sector.
#[derive(Debug, Clone)]
pub struct SectorTable {
    checks: Vec<u64>,
    corrections: Vec<Option<u64>>,
}

impl SectorTable {
    fn build(n: usize, h: &BinaryMatrix) -> Result<Self, SimError> {
        if h.rows() > MAX_SYNDROME_BITS {
            return Err(SimError::SyndromeTooLarge {
                bits: h.rows(),
                max: MAX_SYNDROME_BITS,
            });
        }
        let checks = row_masks(h);
        let mut corrections = vec![None; 1 << checks.len()];
        for_each_pattern(n, |e| {
            let slot = &mut corrections[syndrome(&checks, e) as usize];
            if slot.is_none() {
                *slot = Some(e);
            }
        });
        Ok(Self { checks, corrections })
    }

    pub fn syndrome_bits(&self) -> usize {
        self.checks.len()
    }

    pub fn syndrome(&self, e: u64) -> u64 {
        syndrome(&self.checks, e)
    }

    /// Correction for a syndrome, or `None` if no error produces it.
    pub fn correction(&self, s: u64) -> Option<u64> {
        self.corrections[s as usize]
    }
}

/// Lookup decoder for both sectors of a small CSS code.
#[derive(Debug, Clone)]
pub struct LookupDecoder {
    pub n: usize,
    /// Decodes X errors from `h_z` syndromes.
    pub x: SectorTable,
    /// Decodes Z errors from `h_x` syndromes.
    pub z: SectorTable,
}

pub fn build_decoder_table(code: &CssCode) -> Result<LookupDecoder, SimError> {
    if code.n > MAX_SIM_QUBITS {
        return Err(SimError::CodeTooLarge {
            n: code.n,
            max: MAX_SIM_QUBITS,
        });
    }
    Ok(LookupDecoder {
        n: code.n,
        x: SectorTable::build(code.n, &code.h_z)?,
        z: SectorTable::build(code.n, &code.h_x)?,
    })
}

/// For every frame in one sector: does an ideal decoding round leave a
/// logical error?
fn failure_table(n: usize, table: &SectorTable, stabilizers: &BinaryMatrix) -> Vec<bool> {
    let rs = RowReducer::new(stabilizers);
    (0..1u64 << n)
        .map(|e| {
            let fix = table.correction(table.syndrome(e)).expect("ideal syndrome is reachable");
            !rs.contains(&BitVector::from_mask(n, e ^ fix))
        })
        .collect()
}

struct Engine {
    decoder: LookupDecoder,
    fail_x: Vec<bool>,
    fail_z: Vec<bool>,
}

impl Engine {
    fn new(code: &CssCode) -> Result<Self, SimError> {
        let decoder = build_decoder_table(code)?;
        let fail_x = failure_table(code.n, &decoder.x, &code.h_x);
        let fail_z = failure_table(code.n, &decoder.z, &code.h_z);
        Ok(Self { decoder, fail_x, fail_z })
    }

    fn fails(&self, e_x: u64, e_z: u64) -> bool {
        self.fail_x[e_x as usize] || self.fail_z[e_z as usize]
    }
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub code: CssCode,
    /// Depolarizing parameter per qubit per cycle.
    pub p_tilde: f64,
    /// Flip probability of each syndrome bit.
    pub q: f64,
    pub cycles: u32,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub logical_error_estimate: f64,
    /// Three binomial standard errors.
    pub confidence_halfwidth: f64,
    pub trials_run: u64,
    pub failures: u64,
}

impl SimResult {
    pub fn from_counts(failures: u64, trials: u64) -> Self {
        let est = failures as f64 / trials as f64;
        Self {
            logical_error_estimate: est,
            confidence_halfwidth: 3.0 * (est * (1.0 - est) / trials as f64).sqrt(),
            trials_run: trials,
            failures,
        }
    }
}

fn noisy_syndrome(rng: &mut ChaCha8Rng, s: u64, bits: usize, q: f64) -> u64 {
    if q == 0.0 {
        return s;
    }
    (0..bits).fold(s, |s, i| if rng.gen::<f64>() < q { s ^ 1 << i } else { s })
}

fn run_block(engine: &Engine, cfg: &SimConfig, block: u64, trials: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(block);
    let (dx, dz) = (&engine.decoder.x, &engine.decoder.z);
    let third = cfg.p_tilde / 3.0;
    let mut failures = 0;
    for _ in 0..trials {
        let (mut e_x, mut e_z) = (0u64, 0u64);
        for _ in 0..cfg.cycles {
            if cfg.p_tilde > 0.0 {
                for i in 0..engine.decoder.n {
                    let r = rng.gen::<f64>();
                    if r < third {
                        e_x ^= 1 << i;
                    } else if r < 2.0 * third {
                        e_x ^= 1 << i;
                        e_z ^= 1 << i;
                    } else if r < cfg.p_tilde {
                        e_z ^= 1 << i;
                    }
                }
            }
            let s_x = noisy_syndrome(&mut rng, dx.syndrome(e_x), dx.syndrome_bits(), cfg.q);
            let s_z = noisy_syndrome(&mut rng, dz.syndrome(e_z), dz.syndrome_bits(), cfg.q);
            e_x ^= dx.correction(s_x).unwrap_or(0);
            e_z ^= dz.correction(s_z).unwrap_or(0);
        }
        failures += engine.fails(e_x, e_z) as u64;
    }
    failures
}

/// Runs `cfg.trials` independent memories for `cfg.cycles` cycles each.
///
/// Trials are split into fixed blocks of [`BLOCK_TRIALS`], each with its own
/// ChaCha stream, so the result depends only on the config and not on the
/// thread count.
pub fn simulate(cfg: &SimConfig) -> Result<SimResult, SimError> {
    check_probability("p_tilde", cfg.p_tilde)?;
    check_probability("q", cfg.q)?;
    if cfg.trials == 0 || cfg.cycles == 0 {
        return Err(SimError::Empty);
    }
    let engine = Engine::new(&cfg.code)?;
    let blocks = cfg.trials.div_ceil(BLOCK_TRIALS);
    let failures: u64 = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let size = BLOCK_TRIALS.min(cfg.trials - b * BLOCK_TRIALS);
            run_block(&engine, cfg, b, size)
        })
        .sum();
    Ok(SimResult::from_counts(failures, cfg.trials))
}

/// Probability that one noisy decoding round, with syndrome bits flipped
/// independently, leaves frame `e` in a logical failure.
fn sector_failure(engine_fail: &[bool], table: &SectorTable, e: u64, q: f64) -> f64 {
    let s = table.syndrome(e);
    let bits = table.syndrome_bits();
    if q == 0.0 {
        let fix = table.correction(s).unwrap_or(0);
        return engine_fail[(e ^ fix) as usize] as u8 as f64;
    }
    (0..1u64 << bits)
        .map(|flip| {
            let w = flip.count_ones() as i32;
            let fix = table.correction(s ^ flip).unwrap_or(0);
            if engine_fail[(e ^ fix) as usize] {
                q.powi(w) * (1.0 - q).powi(bits as i32 - w)
            } else {
                0.0
            }
        })
        .sum()
}

/// Exact single-cycle logical error probability, summing over every Pauli
/// pattern and every syndrome flip pattern.
pub fn exact_logical_error(code: &CssCode, p_tilde: f64, q: f64) -> Result<f64, SimError> {
    check_probability("p_tilde", p_tilde)?;
    check_probability("q", q)?;
    if code.n > MAX_EXACT_QUBITS {
        return Err(SimError::CodeTooLarge {
            n: code.n,
            max: MAX_EXACT_QUBITS,
        });
    }
    let bits = code.h_x.rows() + code.h_z.rows();
    if q > 0.0 && bits > MAX_EXACT_SYNDROME_BITS {
        return Err(SimError::SyndromeTooLarge {
            bits,
            max: MAX_EXACT_SYNDROME_BITS,
        });
    }
    let engine = Engine::new(code)?;
    let n = code.n;
    let single = [1.0 - p_tilde, p_tilde / 3.0, p_tilde / 3.0, p_tilde / 3.0];
    let mut total = 0.0;
    for pattern in 0..1u64 << (2 * n) {
        let (mut e_x, mut e_z, mut prob) = (0u64, 0u64, 1.0);
        for i in 0..n {
            // 0 = I, 1 = X, 2 = Y, 3 = Z
            let pauli = (pattern >> (2 * i)) & 3;
            prob *= single[pauli as usize];
            if pauli == 1 || pauli == 2 {
                e_x |= 1 << i;
            }
            if pauli == 2 || pauli == 3 {
                e_z |= 1 << i;
            }
        }
        if prob == 0.0 {
            continue;
        }
        let fx = sector_failure(&engine.fail_x, &engine.decoder.x, e_x, q);
        let fz = sector_failure(&engine.fail_z, &engine.decoder.z, e_z, q);
        total += prob * (1.0 - (1.0 - fx) * (1.0 - fz));
    }
    Ok(total)
}
