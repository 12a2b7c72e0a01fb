//! WOM codes built from finite geometries.
//!
//! Valid memory states are the vectors at Hamming distance exactly one from
//! a codeword of an underlying linear code; the stored message is the point
//! where the single flip sits.  PG(2,2) gives a <7>^4/7 code over the Fano
//! plane, and EG(m,2) with the Reed-Muller code R(m-2,m) gives codes on 2^m
//! cells whose minimum-weight codewords are the planes of the geometry.

use std::collections::HashSet;

use crate::codes::{hamming_from_columns, reed_muller, BinaryCode};
use crate::error::{Error, Result};
use crate::geometry::enumerate_flats;
use crate::wom::WomCode;
use crate::BitVector;

/// Fano-plane lines with points labelled 1..7 as in the figure; cell i
/// stores point i+1.
pub const FANO_LINES: [[usize; 3]; 7] = [
    [1, 2, 4],
    [1, 3, 7],
    [1, 5, 6],
    [2, 3, 5],
    [2, 6, 7],
    [3, 4, 6],
    [4, 5, 7],
];

/// Parity-check column of each Fano point, i.e. its coordinates as a point
/// of PG(2,2).  Lines XOR to zero under this labelling.
pub const FANO_COLUMNS: [u32; 7] = [2, 4, 3, 6, 7, 5, 1];

/// Display order used by the four-write worked example: printed position i
/// shows the cell of point `FIG1_PERMUTATION[i]`.
pub const FIG1_PERMUTATION: [usize; 7] = [2, 3, 5, 1, 4, 7, 6];

/// Message sequence (0-based point indices) of the four-write example.
pub const FIG1_MESSAGES: [usize; 4] = [2, 4, 6, 2];

/// The <7>^4/7 WOM code on the Fano plane.
///
/// Each write uses a fixed configuration shape: a single point, then a line
/// minus a point, then a line plus a point, then either the union of two
/// lines or the complement of a point.  Among the states of the scheduled
/// shape the encoder picks the minimal one in (weight, lex) order.
pub struct Pg22Code {
    code: BinaryCode,
    reps: Vec<Vec<BitVector>>,
}

impl Default for Pg22Code {
    fn default() -> Self {
        Self::new()
    }
}

impl Pg22Code {
    pub fn new() -> Self {
        let code = hamming_from_columns("pg(2,2)-hamming", 3, &FANO_COLUMNS);
        let mut reps = vec![Vec::new(); 7];
        for mask in 0u64..128 {
            let v = BitVector::from_mask(7, mask);
            if let Ok(pos) = code.flip_position(&v) {
                reps[pos].push(v);
            }
        }
        for list in &mut reps {
            list.sort_by_key(|v| (v.weight(), *v));
            debug_assert_eq!(list.len(), 16);
        }
        Pg22Code { code, reps }
    }

    pub fn base_code(&self) -> &BinaryCode {
        &self.code
    }

    /// Reorder a state for display in the figure's cell order.
    pub fn fig1_display(state: &BitVector) -> BitVector {
        let mut out = BitVector::zero(7);
        for (i, &label) in FIG1_PERMUTATION.iter().enumerate() {
            out.set(i, state.get(label - 1));
        }
        out
    }

    fn allowed_weights(write: usize) -> &'static [usize] {
        match write {
            0 => &[1],
            1 => &[2],
            2 => &[4],
            3 => &[5, 6],
            // Past the guaranteed schedule, take anything that still fits.
            _ => &[1, 2, 4, 5, 6],
        }
    }
}

impl WomCode for Pg22Code {
    fn name(&self) -> &str {
        "pg(2,2)"
    }

    fn cells(&self) -> usize {
        7
    }

    fn writes(&self) -> usize {
        4
    }

    fn messages_per_write(&self) -> Vec<usize> {
        vec![7; 4]
    }

    fn encode(&self, write: usize, state: &BitVector, message: usize) -> Result<BitVector> {
        if state.len() != 7 {
            return Err(Error::LengthMismatch { len: state.len(), expected: 7 });
        }
        if self.decode(state).ok() == Some(message) {
            return Ok(*state);
        }
        let weights = Self::allowed_weights(write);
        self.reps[message]
            .iter()
            .find(|v| weights.contains(&v.weight()) && state.subset_of(v))
            .copied()
            .ok_or_else(|| Error::Unwritable {
                write: write + 1,
                message: self.message_label(message),
                state: state.to_string(),
            })
    }

    fn decode(&self, state: &BitVector) -> Result<usize> {
        self.code.flip_position(state)
    }

    fn representations(&self, message: usize) -> Vec<BitVector> {
        self.reps[message].clone()
    }

    fn message_label(&self, message: usize) -> String {
        (message + 1).to_string()
    }

    fn parse_message(&self, label: &str) -> Result<usize> {
        let p: usize = label.parse().map_err(|_| Error::BadMessage(label.to_string()))?;
        if !(1..=7).contains(&p) {
            return Err(Error::BadMessage(label.to_string()));
        }
        Ok(p - 1)
    }
}

/// WOM code on the 2^m points of EG(m,2) from the Reed-Muller code
/// R(m-2, m), for 3 <= m <= 5.
///
/// States decoding to point y form the coset C + e_y.  For m <= 4 the
/// encoder scans that coset in (weight, lex) order for the first superset of
/// the current state.  For m = 5 the coset is too large to scan, so the
/// search is restricted to candidates shaped by the geometry: the current
/// state grown by a 2-flat or 3-flat with the target point added or removed.
/// That pool covers every shape the write schedule needs; states outside it
/// simply fail earlier than an exhaustive search would.
pub struct EgCode {
    m: usize,
    code: BinaryCode,
    /// Sorted coset C + e_y per message; empty when m = 5.
    reps: Vec<Vec<BitVector>>,
    /// Incidence masks of 2- and 3-flats, used by the m = 5 candidate pool.
    flat_masks: Vec<u64>,
}

impl EgCode {
    pub fn new(m: usize) -> Result<Self> {
        if !(3..=5).contains(&m) {
            return Err(Error::DimensionRange { m, min: 3, max: 5 });
        }
        let code = reed_muller(m - 2, m)?;
        let n = 1usize << m;
        let mut reps = Vec::new();
        let mut flat_masks = Vec::new();
        if m <= 4 {
            let codewords = code.codewords();
            for y in 0..n {
                let mut list: Vec<BitVector> = codewords
                    .iter()
                    .map(|c| c.xor(&BitVector::from_mask(n, 1 << y)))
                    .collect();
                list.sort_by_key(|v| (v.weight(), *v));
                reps.push(list);
            }
        } else {
            for mu in 2..=3 {
                for flat in enumerate_flats(m, mu)? {
                    flat_masks.push(flat.incidence_vector().mask());
                }
            }
        }
        Ok(EgCode { m, code, reps, flat_masks })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn base_code(&self) -> &BinaryCode {
        &self.code
    }

    fn encode_by_scan(&self, write: usize, state: &BitVector, message: usize) -> Result<BitVector> {
        self.reps[message]
            .iter()
            .find(|v| state.subset_of(v))
            .copied()
            .ok_or_else(|| self.unwritable(write, state, message))
    }

    fn encode_by_pool(&self, write: usize, state: &BitVector, message: usize) -> Result<BitVector> {
        let n = self.cells();
        let ey = 1u64 << message;
        let mut best: Option<BitVector> = None;
        let mut consider = |mask: u64| {
            let v = BitVector::from_mask(n, mask);
            // Valid with flip at `message` iff v + e_y is a codeword.
            if !self.code.contains(&v.xor(&BitVector::from_mask(n, ey))) {
                return;
            }
            match best {
                Some(b) if (b.weight(), b) <= (v.weight(), v) => {}
                _ => best = Some(v),
            }
        };
        for x in std::iter::once(0).chain(self.flat_masks.iter().copied()) {
            let grown = state.mask() | x;
            consider(grown | ey);
            if state.mask() & ey == 0 {
                consider(grown & !ey);
            }
        }
        best.ok_or_else(|| self.unwritable(write, state, message))
    }

    fn unwritable(&self, write: usize, state: &BitVector, message: usize) -> Error {
        Error::Unwritable {
            write: write + 1,
            message: self.message_label(message),
            state: state.to_string(),
        }
    }
}

impl WomCode for EgCode {
    fn name(&self) -> &str {
        match self.m {
            3 => "eg(3,2)",
            4 => "eg(4,2)",
            _ => "eg(5,2)",
        }
    }

    fn cells(&self) -> usize {
        1 << self.m
    }

    fn writes(&self) -> usize {
        4 * (self.m - 2)
    }

    /// Declared per-write message counts: blocks of <2^k, 2^k, 2^k, 2^k - 4>
    /// for k = m down to 3.
    fn messages_per_write(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for k in (3..=self.m).rev() {
            let v = 1usize << k;
            out.extend_from_slice(&[v, v, v, v - 4]);
        }
        out
    }

    fn message_count(&self) -> usize {
        1 << self.m
    }

    fn encode(&self, write: usize, state: &BitVector, message: usize) -> Result<BitVector> {
        if state.len() != self.cells() {
            return Err(Error::LengthMismatch { len: state.len(), expected: self.cells() });
        }
        if self.decode(state).ok() == Some(message) {
            return Ok(*state);
        }
        if self.m <= 4 {
            self.encode_by_scan(write, state, message)
        } else {
            self.encode_by_pool(write, state, message)
        }
    }

    fn decode(&self, state: &BitVector) -> Result<usize> {
        self.code.flip_position(state)
    }

    fn representations(&self, message: usize) -> Vec<BitVector> {
        assert!(self.m <= 4, "representation sets of eg(5,2) are too large to enumerate");
        self.reps[message].clone()
    }

    fn message_label(&self, message: usize) -> String {
        (message + 1).to_string()
    }

    fn parse_message(&self, label: &str) -> Result<usize> {
        let p: usize = label.parse().map_err(|_| Error::BadMessage(label.to_string()))?;
        if p < 1 || p > self.message_count() {
            return Err(Error::BadMessage(label.to_string()));
        }
        Ok(p - 1)
    }
}

/// Breadth-first search over everything the encoder can reach, reporting for
/// each write the minimum number of representable messages (counting a
/// repeat of the stored message) across all states at that write.
///
/// The result is the per-write guarantee the implementation actually
/// achieves, to be compared against `messages_per_write`.
pub fn verify_write_count(code: &dyn WomCode, writes: usize) -> Vec<usize> {
    let v = code.message_count();
    let mut layer: HashSet<BitVector> = HashSet::new();
    layer.insert(BitVector::zero(code.cells()));
    let mut mins = Vec::with_capacity(writes);
    for write in 0..writes {
        let mut next = HashSet::new();
        let mut min_count = usize::MAX;
        for state in &layer {
            let stored = code.decode(state).ok();
            let mut count = 0;
            for msg in 0..v {
                if stored == Some(msg) {
                    count += 1;
                    next.insert(*state);
                } else if let Ok(s) = code.encode(write, state, msg) {
                    count += 1;
                    next.insert(s);
                }
            }
            min_count = min_count.min(count);
        }
        mins.push(min_count);
        layer = next;
        if layer.is_empty() {
            break;
        }
    }
    mins
}
