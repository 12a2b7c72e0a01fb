//! Concatenated rewriting codes with error correction.
//!
//! Three constructions:
//! - WOM x repetition: each cell of a binary WOM code is repeated into a
//!   block of odd length; majority voting on the parities corrects errors,
//!   and replaying the WOM code in complement-scheme cycles gives
//!   ceil((q-1)t / 3) writes on q-level cells when one position can be hit
//!   every write.
//! - classical x flash: an outer error-correcting code over the inner flash
//!   code's message alphabet multiplies the correction capability to
//!   (E+1)(e+1) - 1.
//! - classical x repetition: the special case where the inner flash code
//!   stores a single bit, correcting me+m+e errors with ceil((q-1)/3)
//!   guaranteed writes.
//!
//! Errors are magnitude-one level shifts.  A parity error is corrected by
//! increasing the cell by one; a cell already at the top level is left in
//! place, which keeps the decoded message right but leaves its parity for
//! the majority vote to absorb.

use std::sync::Arc;

use rand::Rng;

use crate::codes::BinaryCode;
use crate::error::{Error, Result};
use crate::wom::{QCellState, TableWom, WomCode};
use crate::BitVector;

/// Magnitude-one level shifts at distinct cells.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ErrorPattern(pub Vec<(usize, i8)>);

/// Apply an error pattern, validating positions, magnitudes and the
/// resulting levels.
pub fn inject_errors(state: &QCellState, pattern: &ErrorPattern) -> Result<QCellState> {
    let mut out = state.clone();
    let mut seen = vec![false; state.len()];
    for &(pos, delta) in &pattern.0 {
        if pos >= state.len() || delta.abs() != 1 || seen[pos] {
            return Err(Error::BadState(format!("bad error pattern entry ({pos}, {delta})")));
        }
        seen[pos] = true;
        let level = state.level(pos) as i16 + delta as i16;
        if level < 0 || level >= state.q() as i16 {
            return Err(Error::LevelOutOfRange {
                level: level.clamp(0, u8::MAX as i16) as u8,
                q: state.q(),
            });
        }
        out.set_level(pos, level as u8);
    }
    Ok(out)
}

/// Random pattern of `count` magnitude-one errors at distinct cells, each in
/// a direction the current level allows.
pub fn random_error_pattern(rng: &mut impl Rng, state: &QCellState, count: usize) -> ErrorPattern {
    assert!(count <= state.len());
    let mut positions: Vec<usize> = (0..state.len()).collect();
    // Partial Fisher-Yates for the first `count` entries.
    for i in 0..count {
        let j = rng.gen_range(i..positions.len());
        positions.swap(i, j);
    }
    let entries = positions[..count]
        .iter()
        .map(|&pos| {
            let level = state.level(pos);
            let delta = if level == 0 {
                1
            } else if level == state.q() - 1 {
                -1
            } else if rng.gen_bool(0.5) {
                1
            } else {
                -1
            };
            (pos, delta)
        })
        .collect();
    ErrorPattern(entries)
}

/// The trivial <2>^1/1 WOM code: one cell storing one bit.  Used as the
/// inner stage that turns a classical code into a flash code.
pub fn bit_code() -> TableWom {
    TableWom::new(
        "bit",
        1,
        vec![2],
        vec!["0".into(), "1".into()],
        vec![vec!["0".parse().unwrap()], vec!["1".parse().unwrap()]],
    )
}

/// A binary WOM code with every cell repeated `rep` times, run on q-level
/// cells in complement-scheme cycles.
pub struct WomRepCode {
    wom: Arc<dyn WomCode>,
    rep: usize,
    q: u8,
}

impl WomRepCode {
    pub fn new(wom: Arc<dyn WomCode>, rep: usize, q: u8) -> Result<Self> {
        if rep.is_multiple_of(2) {
            return Err(Error::EvenRepetition { n: rep });
        }
        if q < 2 {
            return Err(Error::LevelOutOfRange { level: q, q: 2 });
        }
        Ok(WomRepCode { wom, rep, q })
    }

    pub fn inner_wom(&self) -> &dyn WomCode {
        self.wom.as_ref()
    }

    pub fn rep(&self) -> usize {
        self.rep
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn cells(&self) -> usize {
        self.wom.cells() * self.rep
    }

    /// Errors corrected at each write.
    pub fn error_capability(&self) -> usize {
        (self.rep - 1) / 2
    }

    /// Raw complement-scheme write slots.
    pub fn raw_writes(&self) -> usize {
        (self.q as usize - 1) * self.wom.writes()
    }

    /// Writes guaranteed when one position may be hit by an error every
    /// write: ceil((q-1) t / 3).
    pub fn guaranteed_writes(&self) -> usize {
        self.raw_writes().div_ceil(3)
    }

    pub fn zero_state(&self) -> QCellState {
        QCellState::zero(self.q, self.cells())
    }

    fn cycle_of(&self, write: usize) -> u8 {
        (write / self.wom.writes()) as u8
    }

    /// Majority bit of block `i` after removing the cycle parity.
    fn block_bit(&self, state: &QCellState, block: usize, cycle: u8) -> bool {
        let ones = (0..self.rep)
            .filter(|&r| (state.level(block * self.rep + r) + cycle) % 2 == 1)
            .count();
        ones * 2 > self.rep
    }

    /// Binary word stored in `state` given how many writes have happened.
    fn read_word(&self, state: &QCellState, writes_done: usize) -> BitVector {
        let cycle = if writes_done == 0 { 0 } else { self.cycle_of(writes_done - 1) };
        let mut word = BitVector::zero(self.wom.cells());
        for i in 0..self.wom.cells() {
            word.set(i, self.block_bit(state, i, cycle));
        }
        word
    }

    /// Store `message` at 0-based `write`; errors in the current state are
    /// voted away before the underlying WOM encode runs.
    pub fn encode(&self, write: usize, state: &QCellState, message: usize) -> Result<QCellState> {
        let t = self.wom.writes();
        if write >= self.raw_writes() {
            return Err(Error::EraseRequired { budget: self.raw_writes() });
        }
        let cycle = self.cycle_of(write);
        let k = write % t;
        let prev = if k == 0 {
            BitVector::zero(self.wom.cells())
        } else {
            self.read_word(state, write)
        };
        let next = self.wom.encode(k, &prev, message)?;
        let mut out = state.clone();
        for i in 0..self.wom.cells() {
            let target = cycle + u8::from(next.get(i));
            for r in 0..self.rep {
                let pos = i * self.rep + r;
                let mut lo = state.level(pos).max(target);
                if lo % 2 != target % 2 {
                    lo += 1;
                }
                if lo >= self.q {
                    return Err(Error::EraseRequired { budget: self.raw_writes() });
                }
                out.set_level(pos, lo);
            }
        }
        Ok(out)
    }

    /// Decode after `writes_done` writes, fixing parity errors by raising
    /// the offending cells.  Cells already at the top level cannot be
    /// raised and are left for future majority votes to outvote.
    pub fn read_and_correct(&self, writes_done: usize, state: &QCellState) -> Result<(usize, QCellState)> {
        let cycle = if writes_done == 0 { 0 } else { self.cycle_of(writes_done - 1) };
        let word = self.read_word(state, writes_done);
        let mut corrected = state.clone();
        for i in 0..self.wom.cells() {
            let bit = word.get(i);
            for r in 0..self.rep {
                let pos = i * self.rep + r;
                let level = state.level(pos);
                if ((level + cycle) % 2 == 1) != bit && level + 1 < self.q {
                    corrected.set_level(pos, level + 1);
                }
            }
        }
        let message = self.wom.decode(&word)?;
        Ok((message, corrected))
    }
}

/// An outer classical binary code over an inner one-bit flash code: the
/// concatenation corrects (E+1)(e+1) - 1 errors where the inner stage
/// corrects E per block and the outer code corrects e block failures.
pub struct ClassicalFlashCode {
    outer: BinaryCode,
    inner: WomRepCode,
}

impl ClassicalFlashCode {
    pub fn new(outer: BinaryCode, inner: WomRepCode) -> Result<Self> {
        let inner_bits = (inner.inner_wom().message_count() as f64).log2() as usize;
        if inner.inner_wom().message_count() != 2 {
            // A binary outer code carries one bit per symbol.
            return Err(Error::AlphabetMismatch { outer_bits: 1, inner_bits });
        }
        Ok(ClassicalFlashCode { outer, inner })
    }

    pub fn outer(&self) -> &BinaryCode {
        &self.outer
    }

    pub fn inner(&self) -> &WomRepCode {
        &self.inner
    }

    pub fn cells(&self) -> usize {
        self.outer.length() * self.inner.cells()
    }

    pub fn message_count(&self) -> usize {
        1 << self.outer.dimension()
    }

    pub fn guaranteed_writes(&self) -> usize {
        self.inner.guaranteed_writes()
    }

    /// Total errors corrected: (E+1)(e+1) - 1.
    pub fn error_capability(&self) -> usize {
        let e = (self.outer.min_distance() - 1) / 2;
        let cap_e = self.inner.error_capability();
        (cap_e + 1) * (e + 1) - 1
    }

    pub fn zero_state(&self) -> QCellState {
        QCellState::zero(self.inner.q(), self.cells())
    }

    fn block(&self, state: &QCellState, i: usize) -> QCellState {
        let w = self.inner.cells();
        QCellState::new(state.q(), state.levels()[i * w..(i + 1) * w].to_vec()).unwrap()
    }

    /// Write one of 2^k1 messages at 0-based `write`.
    pub fn encode(&self, write: usize, state: &QCellState, message: usize) -> Result<QCellState> {
        if message >= self.message_count() {
            return Err(Error::BadMessage(message.to_string()));
        }
        let codeword = self.outer.encode(message);
        let mut levels = Vec::with_capacity(self.cells());
        for i in 0..self.outer.length() {
            let block = self.block(state, i);
            let next = self.inner.encode(write, &block, usize::from(codeword.get(i)))?;
            levels.extend_from_slice(next.levels());
        }
        QCellState::new(state.q(), levels)
    }

    /// Decode after `writes_done` writes: inner majority per block, then
    /// outer syndrome correction, then cell-level repair.
    pub fn read_and_correct(&self, writes_done: usize, state: &QCellState) -> Result<(usize, QCellState)> {
        let n1 = self.outer.length();
        let mut word = BitVector::zero(n1);
        let mut corrected_levels = Vec::with_capacity(self.cells());
        for i in 0..n1 {
            let block = self.block(state, i);
            let (bit, fixed) = self.inner.read_and_correct(writes_done, &block)?;
            word.set(i, bit == 1);
            corrected_levels.extend_from_slice(fixed.levels());
        }
        let (codeword, flipped) = self.outer.correct_single(&word)?;
        let mut corrected = QCellState::new(state.q(), corrected_levels)?;
        if let Some(i) = flipped {
            // The whole block was outvoted; repair its cells toward the
            // outer decision.
            corrected = self.repair_block(writes_done, corrected, i, codeword.get(i));
        }
        let message = self.outer.message_of(&codeword)?;
        Ok((message, corrected))
    }

    fn repair_block(&self, writes_done: usize, mut state: QCellState, block: usize, bit: bool) -> QCellState {
        let w = self.inner.cells();
        let cycle = if writes_done == 0 { 0 } else { ((writes_done - 1) / self.inner.inner_wom().writes()) as u8 };
        for r in 0..w {
            let pos = block * w + r;
            let level = state.level(pos);
            if ((level + cycle) % 2 == 1) != bit && level + 1 < state.q() {
                state.set_level(pos, level + 1);
            }
        }
        state
    }
}

/// WOM x repetition (Theorem-2 style construction).
pub fn wom_times_repetition(wom: Arc<dyn WomCode>, rep: usize, q: u8) -> Result<WomRepCode> {
    WomRepCode::new(wom, rep, q)
}

/// Classical outer code x inner flash code (Theorem-3 style construction).
pub fn classical_times_flash(outer: BinaryCode, inner: WomRepCode) -> Result<ClassicalFlashCode> {
    ClassicalFlashCode::new(outer, inner)
}

/// Classical outer code x inner repetition code on q-level cells
/// (Theorem-4 style construction): corrects me+m+e errors with
/// ceil((q-1)/3) guaranteed writes, rep = 2m+1.
pub fn classical_times_repetition(outer: BinaryCode, rep: usize, q: u8) -> Result<ClassicalFlashCode> {
    let inner = WomRepCode::new(Arc::new(bit_code()), rep, q)?;
    ClassicalFlashCode::new(outer, inner)
}
