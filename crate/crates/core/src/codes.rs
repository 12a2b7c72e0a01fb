//! Binary linear codes used as the backbone of the WOM constructions:
//! Reed-Muller codes, Hamming codes and repetition codes, together with the
//! syndrome machinery ("flip position" decoding) that turns states at
//! distance one from a codeword back into messages.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::BitVector;

/// A binary linear [n, k, d] code with generator and parity-check matrices
/// and a precomputed single-error syndrome table.
#[derive(Debug, Clone)]
pub struct BinaryCode {
    name: String,
    n: usize,
    k: usize,
    d: usize,
    generator: Vec<BitVector>,
    parity: Vec<BitVector>,
    /// syndrome -> position of the single bit whose flip clears it.
    syndrome_table: Vec<Option<u8>>,
    /// codeword mask -> message index, for codes small enough to tabulate.
    codeword_index: Option<HashMap<u64, usize>>,
}

impl BinaryCode {
    fn build(name: String, n: usize, d: usize, generator: Vec<BitVector>, parity: Vec<BitVector>) -> Self {
        let k = generator.len();
        debug_assert_eq!(parity.len(), n - k);
        let r = n - k;
        assert!(r <= 24, "syndrome table too large");
        let mut syndrome_table = vec![None; 1usize << r];
        for pos in 0..n {
            let e = BitVector::from_mask(n, 1u64 << pos);
            let s = syndrome_of(&parity, &e) as usize;
            if syndrome_table[s].is_none() {
                syndrome_table[s] = Some(pos as u8);
            }
        }
        let codeword_index = if k <= 16 {
            let mut map = HashMap::with_capacity(1 << k);
            for msg in 0..(1usize << k) {
                map.insert(encode_with(&generator, msg).mask(), msg);
            }
            Some(map)
        } else {
            None
        };
        BinaryCode { name, n, k, d, generator, parity, syndrome_table, codeword_index }
    }

    /// Build a code from explicit generator rows; the parity-check matrix is
    /// a basis of the dual, found by Gaussian elimination.
    pub fn from_generator(name: impl Into<String>, d: usize, generator: Vec<BitVector>) -> Self {
        let n = generator[0].len();
        let parity = nullspace(n, &generator);
        Self::build(name.into(), n, d, generator, parity)
    }

    /// Build a code from explicit parity-check rows.
    pub fn from_parity(name: impl Into<String>, n: usize, d: usize, parity: Vec<BitVector>) -> Self {
        let generator = nullspace(n, &parity);
        Self::build(name.into(), n, d, generator, parity)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn length(&self) -> usize {
        self.n
    }

    pub fn dimension(&self) -> usize {
        self.k
    }

    pub fn min_distance(&self) -> usize {
        self.d
    }

    pub fn generator_rows(&self) -> &[BitVector] {
        &self.generator
    }

    pub fn parity_rows(&self) -> &[BitVector] {
        &self.parity
    }

    /// Codeword for a k-bit message, row 0 of the generator as the most
    /// significant message bit.
    pub fn encode(&self, message: usize) -> BitVector {
        debug_assert!(message < 1 << self.k);
        encode_with(&self.generator, message)
    }

    /// Message index of an exact codeword.
    pub fn message_of(&self, codeword: &BitVector) -> Result<usize> {
        let map = self.codeword_index.as_ref().expect("code too large to index");
        map.get(&codeword.mask()).copied().ok_or(Error::NotAWomState)
    }

    pub fn syndrome(&self, v: &BitVector) -> u64 {
        syndrome_of(&self.parity, v)
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.syndrome(v) == 0
    }

    /// Position of the unique bit whose flip turns `v` into a codeword.
    ///
    /// Errors with [`Error::NoMessage`] when `v` already is a codeword and
    /// [`Error::NotAWomState`] when no single flip works.
    pub fn flip_position(&self, v: &BitVector) -> Result<usize> {
        if v.len() != self.n {
            return Err(Error::LengthMismatch { len: v.len(), expected: self.n });
        }
        let s = self.syndrome(v) as usize;
        if s == 0 {
            return Err(Error::NoMessage);
        }
        match self.syndrome_table[s] {
            Some(pos) => Ok(pos as usize),
            None => Err(Error::NotAWomState),
        }
    }

    /// Correct at most one bit error, returning the codeword and the flipped
    /// position if any.  Errors when the syndrome matches no single flip.
    pub fn correct_single(&self, v: &BitVector) -> Result<(BitVector, Option<usize>)> {
        let s = self.syndrome(v) as usize;
        if s == 0 {
            return Ok((*v, None));
        }
        match self.syndrome_table[s] {
            Some(pos) => Ok((v.xor(&BitVector::from_mask(self.n, 1 << pos)), Some(pos as usize))),
            None => Err(Error::CorruptedState { found: 2, capability: 1 }),
        }
    }

    /// All 2^k codewords.  Only for small dimensions.
    pub fn codewords(&self) -> Vec<BitVector> {
        assert!(self.k <= 24, "too many codewords to enumerate");
        (0..1usize << self.k).map(|m| self.encode(m)).collect()
    }

    /// Every codeword of weight exactly `min_distance`.
    pub fn min_weight_codewords(&self) -> Vec<BitVector> {
        let mut out: Vec<BitVector> = self
            .codewords()
            .into_iter()
            .filter(|c| c.weight() == self.d)
            .collect();
        out.sort();
        out
    }
}

fn encode_with(generator: &[BitVector], message: usize) -> BitVector {
    let k = generator.len();
    let mut c = BitVector::zero(generator[0].len());
    for (i, row) in generator.iter().enumerate() {
        if (message >> (k - 1 - i)) & 1 == 1 {
            c = c.xor(row);
        }
    }
    c
}

fn syndrome_of(parity: &[BitVector], v: &BitVector) -> u64 {
    let mut s = 0u64;
    for (i, row) in parity.iter().enumerate() {
        s |= u64::from((row.mask() & v.mask()).count_ones() & 1) << i;
    }
    s
}

/// Basis of the space orthogonal to the given rows, via column-wise Gaussian
/// elimination.
fn nullspace(n: usize, rows: &[BitVector]) -> Vec<BitVector> {
    let mut mat: Vec<u64> = rows.iter().map(|r| r.mask()).collect();
    let mut pivot_cols = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let Some(pr) = (rank..mat.len()).find(|&r| (mat[r] >> col) & 1 == 1) else {
            continue;
        };
        mat.swap(rank, pr);
        let row = mat[rank];
        for (r, m) in mat.iter_mut().enumerate() {
            if r != rank && (*m >> col) & 1 == 1 {
                *m ^= row;
            }
        }
        pivot_cols.push(col);
        rank += 1;
    }
    let mut basis = Vec::with_capacity(n - rank);
    for free in 0..n {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = 1u64 << free;
        for (r, &pc) in pivot_cols.iter().enumerate() {
            if (mat[r] >> free) & 1 == 1 {
                v |= 1 << pc;
            }
        }
        basis.push(BitVector::from_mask(n, v));
    }
    basis
}

/// Reed-Muller code R(r, m): evaluations of degree <= r monomials at all 2^m
/// points, rows ordered by degree then lexicographically on variable sets,
/// points in canonical index order (coordinate 1 as the most significant
/// bit).  The parity-check matrix is the generator of R(m-r-1, m).
pub fn reed_muller(r: usize, m: usize) -> Result<BinaryCode> {
    if m == 0 || m > 6 {
        return Err(Error::DimensionRange { m, min: 1, max: 6 });
    }
    if r > m {
        return Err(Error::FlatDimension { mu: r, m });
    }
    let generator = rm_rows(r, m);
    let parity = if r == m { Vec::new() } else { rm_rows(m - r - 1, m) };
    let n = 1usize << m;
    let d = 1usize << (m - r);
    Ok(BinaryCode::build(format!("rm({r},{m})"), n, d, generator, parity))
}

fn rm_rows(r: usize, m: usize) -> Vec<BitVector> {
    let n = 1usize << m;
    let mut monomials: Vec<Vec<usize>> = Vec::new();
    for deg in 0..=r {
        let mut sets = subsets_of_size(m, deg);
        sets.sort();
        monomials.extend(sets);
    }
    monomials
        .into_iter()
        .map(|vars| {
            let mut row = BitVector::zero(n);
            for p in 0..n {
                // Variable x_j reads bit m-j of the point index.
                let val = vars.iter().all(|&j| (p >> (m - j)) & 1 == 1);
                row.set(p, val);
            }
            row
        })
        .collect()
}

fn subsets_of_size(m: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(start: usize, m: usize, left: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(current.clone());
            return;
        }
        for v in start..=m + 1 - left {
            current.push(v);
            rec(v + 1, m, left - 1, current, out);
            current.pop();
        }
    }
    rec(1, m, size, &mut current, &mut out);
    out
}

/// Hamming code [2^r - 1, 2^r - 1 - r, 3] with parity-check columns equal to
/// 1..2^r - 1 in increasing order, top row as the most significant bit.
pub fn hamming_code(r: usize) -> Result<BinaryCode> {
    if !(2..=10).contains(&r) {
        return Err(Error::DimensionRange { m: r, min: 2, max: 10 });
    }
    let columns: Vec<u32> = (1..1u32 << r).collect();
    Ok(hamming_from_columns(format!("hamming({r})"), r, &columns))
}

/// Hamming-type code from an explicit column arrangement.  Used for the
/// projective-geometry WOM code, whose columns follow the Fano labelling of
/// Figure 1 rather than increasing order.
pub fn hamming_from_columns(name: impl Into<String>, r: usize, columns: &[u32]) -> BinaryCode {
    let n = columns.len();
    let parity: Vec<BitVector> = (0..r)
        .map(|i| {
            let mut row = BitVector::zero(n);
            for (j, &c) in columns.iter().enumerate() {
                row.set(j, (c >> (r - 1 - i)) & 1 == 1);
            }
            row
        })
        .collect();
    BinaryCode::from_parity(name, n, 3, parity)
}

/// Repetition code [m, 1, m].
pub fn repetition_code(m: usize) -> Result<BinaryCode> {
    if m == 0 || m > 64 {
        return Err(Error::DimensionRange { m, min: 1, max: 64 });
    }
    let all = BitVector::from_mask(m, if m == 64 { u64::MAX } else { (1 << m) - 1 });
    Ok(BinaryCode::from_generator(format!("repetition({m})"), m, vec![all]))
}

/// Identity code [n, n, 1]; useful as a trivial outer code in concatenation.
pub fn identity_code(n: usize) -> BinaryCode {
    let rows = (0..n).map(|i| BitVector::from_mask(n, 1 << i)).collect();
    BinaryCode::from_generator(format!("identity({n})"), 1, rows)
}
