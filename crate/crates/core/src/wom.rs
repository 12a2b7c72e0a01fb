//! Core write-once-memory abstractions.
//!
//! A binary WOM code stores one of `v_j` messages at each of `t` writes into
//! `n` once-programmable cells: bits may go from 0 to 1 but never back.  The
//! trait below captures the per-write encode map, the decode map, and the
//! representation sets U(x) that the multilevel strategies build on.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::BitVector;

/// State of `n` flash cells with `q` levels each.  Levels may only increase.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QCellState {
    q: u8,
    levels: Vec<u8>,
}

impl QCellState {
    pub fn zero(q: u8, n: usize) -> Self {
        assert!(q >= 2);
        QCellState { q, levels: vec![0; n] }
    }

    pub fn new(q: u8, levels: Vec<u8>) -> Result<Self> {
        if let Some(&l) = levels.iter().find(|&&l| l >= q) {
            return Err(Error::LevelOutOfRange { level: l, q });
        }
        Ok(QCellState { q, levels })
    }

    pub fn from_bits(q: u8, bits: &BitVector) -> Self {
        QCellState {
            q,
            levels: bits.iter_bits().map(u8::from).collect(),
        }
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn levels(&self) -> &[u8] {
        &self.levels
    }

    pub fn level(&self, i: usize) -> u8 {
        self.levels[i]
    }

    pub fn set_level(&mut self, i: usize, l: u8) {
        debug_assert!(l < self.q);
        self.levels[i] = l;
    }

    pub fn max_level(&self) -> u8 {
        self.levels.iter().copied().max().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.levels.iter().map(|&l| l as u64).sum()
    }

    /// Levels reduced mod 2, the binary shadow the lifted decoders read.
    pub fn mod2(&self) -> BitVector {
        assert!(self.len() <= 64);
        let mut v = BitVector::zero(self.len());
        for (i, &l) in self.levels.iter().enumerate() {
            v.set(i, l % 2 == 1);
        }
        v
    }

    /// True when no cell of `self` exceeds the same cell of `other`.
    pub fn le(&self, other: &QCellState) -> bool {
        self.levels.iter().zip(&other.levels).all(|(a, b)| a <= b)
    }

    /// Number of cells where `other` is strictly above `self`.
    pub fn cells_increased(&self, other: &QCellState) -> usize {
        self.levels.iter().zip(&other.levels).filter(|(a, b)| b > a).count()
    }
}

impl PartialOrd for QCellState {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QCellState {
    fn cmp(&self, other: &Self) -> Ordering {
        self.levels.cmp(&other.levels)
    }
}

impl fmt::Display for QCellState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q <= 10 {
            for &l in &self.levels {
                write!(f, "{l}")?;
            }
        } else {
            let parts: Vec<String> = self.levels.iter().map(|l| l.to_string()).collect();
            write!(f, "{}", parts.join("-"))?;
        }
        Ok(())
    }
}

impl FromStr for QCellState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let levels: Vec<u8> = if s.contains('-') {
            s.split('-')
                .map(|p| p.parse().map_err(|_| Error::BadState(s.to_string())))
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(|d| d as u8).ok_or_else(|| Error::BadState(s.to_string())))
                .collect::<Result<_>>()?
        };
        let q = levels.iter().copied().max().unwrap_or(0).max(1) + 1;
        QCellState::new(q, levels)
    }
}

/// A binary WOM code.
///
/// Messages are indices `0..message_count()`; `message_label` gives the
/// user-facing spelling (bit strings for Rivest-Shamir, point numbers for
/// the geometric codes).
pub trait WomCode: Send + Sync {
    fn name(&self) -> &str;

    /// Number of cells n.
    fn cells(&self) -> usize;

    /// Guaranteed number of writes t.
    fn writes(&self) -> usize;

    /// Messages available at each write, `<v_1, ..., v_t>`.
    fn messages_per_write(&self) -> Vec<usize>;

    fn message_count(&self) -> usize {
        *self.messages_per_write().iter().max().unwrap()
    }

    /// Next state storing `message` at 0-based `write` from state `state`.
    /// Writing the currently stored message leaves the state unchanged.
    fn encode(&self, write: usize, state: &BitVector, message: usize) -> Result<BitVector>;

    /// Message stored in `state`.
    fn decode(&self, state: &BitVector) -> Result<usize>;

    /// U(x): every valid state, over all writes, that decodes to `message`,
    /// sorted by weight then lexicographically.
    fn representations(&self, message: usize) -> Vec<BitVector>;

    fn message_label(&self, message: usize) -> String {
        message.to_string()
    }

    fn parse_message(&self, label: &str) -> Result<usize> {
        let msg: usize = label.parse().map_err(|_| Error::BadMessage(label.to_string()))?;
        if msg >= self.message_count() {
            return Err(Error::BadMessage(label.to_string()));
        }
        Ok(msg)
    }

    /// Sum rate: log2 of the total number of storable message sequences per
    /// cell.
    fn rate(&self) -> f64 {
        let bits: f64 = self.messages_per_write().iter().map(|&v| (v as f64).log2()).sum();
        bits / self.cells() as f64
    }
}

/// One step of an encoded write sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    /// 1-based write number.
    pub write: usize,
    pub message: usize,
    pub state: BitVector,
}

/// A full write history starting from the all-zero state.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WriteTrace {
    pub steps: Vec<TraceStep>,
}

impl WriteTrace {
    pub fn states(&self) -> Vec<BitVector> {
        self.steps.iter().map(|s| s.state).collect()
    }
}

/// Encode a message sequence from the empty memory, checking monotonicity at
/// every step.
pub fn encode_sequence(code: &dyn WomCode, messages: &[usize]) -> Result<WriteTrace> {
    let mut state = BitVector::zero(code.cells());
    let mut trace = WriteTrace::default();
    for (i, &msg) in messages.iter().enumerate() {
        let next = code.encode(i, &state, msg)?;
        debug_assert!(state.subset_of(&next), "write {} violated monotonicity", i + 1);
        debug_assert_eq!(code.decode(&next).ok(), Some(msg));
        state = next;
        trace.steps.push(TraceStep { write: i + 1, message: msg, state });
    }
    Ok(trace)
}

/// A WOM code given by an explicit representation table.  Encoding picks the
/// first superset of the current state in (weight, lex) order, which makes
/// the update deterministic and minimal.
pub struct TableWom {
    name: String,
    cells: usize,
    messages_per_write: Vec<usize>,
    labels: Vec<String>,
    /// Per message, all representing states sorted by (weight, lex).
    reps: Vec<Vec<BitVector>>,
    decode_map: HashMap<BitVector, usize>,
}

impl TableWom {
    pub fn new(
        name: impl Into<String>,
        cells: usize,
        messages_per_write: Vec<usize>,
        labels: Vec<String>,
        mut reps: Vec<Vec<BitVector>>,
    ) -> Self {
        let mut decode_map = HashMap::new();
        for (msg, list) in reps.iter_mut().enumerate() {
            list.sort_by_key(|v| (v.weight(), *v));
            for &v in list.iter() {
                let prev = decode_map.insert(v, msg);
                debug_assert!(prev.is_none(), "state {v} represents two messages");
            }
        }
        TableWom {
            name: name.into(),
            cells,
            messages_per_write,
            labels,
            reps,
            decode_map,
        }
    }
}

impl WomCode for TableWom {
    fn name(&self) -> &str {
        &self.name
    }

    fn cells(&self) -> usize {
        self.cells
    }

    fn writes(&self) -> usize {
        self.messages_per_write.len()
    }

    fn messages_per_write(&self) -> Vec<usize> {
        self.messages_per_write.clone()
    }

    fn message_count(&self) -> usize {
        self.reps.len()
    }

    fn encode(&self, write: usize, state: &BitVector, message: usize) -> Result<BitVector> {
        if self.decode(state).ok() == Some(message) {
            return Ok(*state);
        }
        self.reps[message]
            .iter()
            .find(|v| state.subset_of(v))
            .copied()
            .ok_or_else(|| Error::Unwritable {
                write: write + 1,
                message: self.message_label(message),
                state: state.to_string(),
            })
    }

    fn decode(&self, state: &BitVector) -> Result<usize> {
        self.decode_map.get(state).copied().ok_or(Error::NotAWomState)
    }

    fn representations(&self, message: usize) -> Vec<BitVector> {
        self.reps[message].clone()
    }

    fn message_label(&self, message: usize) -> String {
        self.labels[message].clone()
    }

    fn parse_message(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::BadMessage(label.to_string()))
    }
}

/// The Rivest-Shamir <4>^2/3 code: two writes of two bits into three binary
/// cells.  A state with bits (a1, a2, a3) decodes to (a2 + a3, a1 + a3).
pub fn rivest_shamir() -> TableWom {
    let labels: Vec<String> = ["00", "01", "10", "11"].iter().map(|s| s.to_string()).collect();
    let reps: Vec<Vec<BitVector>> = [
        ["000", "111"],
        ["100", "011"],
        ["010", "101"],
        ["001", "110"],
    ]
    .iter()
    .map(|pair| pair.iter().map(|s| s.parse().unwrap()).collect())
    .collect();
    TableWom::new("rivest-shamir", 3, vec![4, 4], labels, reps)
}
