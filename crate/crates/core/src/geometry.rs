//! Euclidean and projective geometries over GF(2).
//!
//! Points of EG(m,2) are the 2^m vectors of F_2^m.  A point's index is the
//! integer value of its coordinate tuple with coordinate 1 as the most
//! significant bit, so in EG(3,2) the point (1,0,1) has index 5.  A mu-flat
//! is a coset of a mu-dimensional linear subspace.
//!
//! PG(m,2) is handled only as far as the WOM constructions need it: point
//! and line counts plus line enumeration.  Projective points are the nonzero
//! vectors of F_2^(m+1), indexed 1..2^(m+1)-1.

use crate::error::{Error, Result};
use crate::BitVector;

/// Largest geometry dimension accepted anywhere in this module.
pub const MAX_DIM: usize = 16;

/// Flats with more cosets than this are refused by [`enumerate_flats`].
pub const ENUMERATION_BUDGET: u64 = 1 << 21;

/// An affine flat of EG(m,2): a coset of a linear subspace, stored as its
/// sorted point list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flat {
    m: usize,
    dim: usize,
    points: Vec<u32>,
}

impl Flat {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[u32] {
        &self.points
    }

    pub fn contains(&self, p: u32) -> bool {
        self.points.binary_search(&p).is_ok()
    }

    /// Characteristic vector over the 2^m points.  Only geometries that fit
    /// in one machine word support this.
    pub fn incidence_vector(&self) -> BitVector {
        assert!(self.m <= 6, "incidence vectors need 2^m <= 64");
        let mut v = BitVector::zero(1 << self.m);
        for &p in &self.points {
            v.set(p as usize, true);
        }
        v
    }
}

fn check_dims(m: usize, mu: usize) -> Result<()> {
    if m == 0 || m > MAX_DIM {
        return Err(Error::DimensionRange { m, min: 1, max: MAX_DIM });
    }
    if mu > m {
        return Err(Error::FlatDimension { mu, m });
    }
    Ok(())
}

/// Number of points of EG(m,2).
pub fn eg_num_points(m: usize) -> u64 {
    1u64 << m
}

/// Number of points and lines of PG(m,2).
pub fn pg_counts(m: usize) -> Result<(u64, u64)> {
    check_dims(m, 0)?;
    let points = (1u64 << (m + 1)) - 1;
    // Lines of PG(m,2) = 2-dim subspaces of F_2^(m+1).
    let lines = gaussian_binomial(m + 1, 2);
    Ok((points, lines))
}

/// Gaussian binomial coefficient [n choose k]_2, exact.
fn gaussian_binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    // Multiply and divide incrementally, cancelling by gcd so the u128
    // intermediates stay small even at m = 16.
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 1..=k {
        num *= (1u128 << (n - i + 1)) - 1;
        den *= (1u128 << (k - i + 1)) - 1;
        let g = gcd(num, den);
        num /= g;
        den /= g;
    }
    debug_assert_eq!(den, 1);
    u64::try_from(num).expect("flat count fits in u64 for m <= 16")
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Exact number of mu-flats of EG(m,2):
/// 2^(m-mu) * prod_{i=1}^{mu} (2^(m-i+1) - 1) / (2^(mu-i+1) - 1).
pub fn num_mu_flats(m: usize, mu: usize) -> Result<u64> {
    check_dims(m, mu)?;
    Ok((1u64 << (m - mu)) * gaussian_binomial(m, mu))
}

/// All mu-dimensional linear subspaces of F_2^m, each as a sorted list of
/// vector values.  Enumerated through reduced row-echelon bases so every
/// subspace appears exactly once.
fn enumerate_subspaces(m: usize, mu: usize) -> Vec<Vec<u32>> {
    if mu == 0 {
        return vec![vec![0]];
    }
    let mut out = Vec::new();
    // Pivot columns are coordinate positions 0..m (coordinate 1 first); the
    // bit for coordinate j+1 sits at position m-1-j of the point index.
    let mut pivots = (0..mu).collect::<Vec<usize>>();
    loop {
        emit_rref_bases(m, mu, &pivots, &mut out);
        // Next combination of pivot columns.
        let mut i = mu;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pivots[i] + (mu - i) < m {
                pivots[i] += 1;
                for j in i + 1..mu {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn emit_rref_bases(m: usize, mu: usize, pivots: &[usize], out: &mut Vec<Vec<u32>>) {
    // Free entries: row i may have a 1 in any non-pivot column right of its
    // pivot.  Enumerate all assignments.
    let bit = |col: usize| 1u32 << (m - 1 - col);
    let mut free_slots: Vec<(usize, usize)> = Vec::new();
    for (i, &p) in pivots.iter().enumerate() {
        for col in p + 1..m {
            if !pivots.contains(&col) {
                free_slots.push((i, col));
            }
        }
    }
    let f = free_slots.len();
    for assign in 0u64..(1u64 << f) {
        let mut rows = vec![0u32; mu];
        for (i, &p) in pivots.iter().enumerate() {
            rows[i] = bit(p);
        }
        for (slot, &(row, col)) in free_slots.iter().enumerate() {
            if (assign >> slot) & 1 == 1 {
                rows[row] |= bit(col);
            }
        }
        let mut span = Vec::with_capacity(1 << mu);
        for sel in 0u32..(1u32 << mu) {
            let mut v = 0u32;
            for (i, &r) in rows.iter().enumerate() {
                if (sel >> i) & 1 == 1 {
                    v ^= r;
                }
            }
            span.push(v);
        }
        span.sort_unstable();
        out.push(span);
    }
}

/// Every mu-flat of EG(m,2), sorted by point list.  Refuses geometries whose
/// flat count exceeds [`ENUMERATION_BUDGET`].
pub fn enumerate_flats(m: usize, mu: usize) -> Result<Vec<Flat>> {
    check_dims(m, mu)?;
    let count = num_mu_flats(m, mu)?;
    if count > ENUMERATION_BUDGET {
        return Err(Error::EnumerationBudget { count, budget: ENUMERATION_BUDGET });
    }
    let mut flats = Vec::with_capacity(count as usize);
    for span in enumerate_subspaces(m, mu) {
        let mut seen = vec![false; 1usize << m];
        for rep in 0u32..(1u32 << m) {
            if seen[rep as usize] {
                continue;
            }
            let mut coset: Vec<u32> = span.iter().map(|&s| rep ^ s).collect();
            coset.sort_unstable();
            for &p in &coset {
                seen[p as usize] = true;
            }
            flats.push(Flat { m, dim: mu, points: coset });
        }
    }
    debug_assert_eq!(flats.len() as u64, count);
    flats.sort_unstable();
    Ok(flats)
}

/// Smallest flat of EG(m,2) containing the given points.
pub fn affine_span(m: usize, points: &[u32]) -> Result<Flat> {
    check_dims(m, 0)?;
    if points.is_empty() {
        return Err(Error::BadState("affine span of an empty point set".into()));
    }
    let limit = 1u32 << m;
    if points.iter().any(|&p| p >= limit) {
        return Err(Error::MixedGeometry);
    }
    let origin = points[0];
    // Row-reduce the translated points to a basis of the direction space.
    let mut basis: Vec<u32> = Vec::new();
    for &p in &points[1..] {
        let mut v = p ^ origin;
        for &b in &basis {
            let high = 31 - b.leading_zeros();
            if (v >> high) & 1 == 1 {
                v ^= b;
            }
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    let dim = basis.len();
    let mut pts = Vec::with_capacity(1 << dim);
    for sel in 0u32..(1u32 << dim) {
        let mut v = origin;
        for (i, &b) in basis.iter().enumerate() {
            if (sel >> i) & 1 == 1 {
                v ^= b;
            }
        }
        pts.push(v);
    }
    pts.sort_unstable();
    Ok(Flat { m, dim, points: pts })
}

/// Split EG(m,2) into two parallel hyperplanes, the first containing every
/// seed point.  The separating functional is the smallest nonzero mask (in
/// integer order) orthogonal to all seed differences; with an empty seed
/// this is the last coordinate, giving the even/odd split.
pub fn hyperplane_partition(m: usize, seed: &[u32]) -> Result<(Flat, Flat)> {
    check_dims(m, 0)?;
    let limit = 1u32 << m;
    if seed.iter().any(|&p| p >= limit) {
        return Err(Error::MixedGeometry);
    }
    let origin = seed.first().copied().unwrap_or(0);
    let diffs: Vec<u32> = seed.iter().map(|&p| p ^ origin).collect();
    let functional = (1..limit)
        .find(|&f| diffs.iter().all(|&d| (f & d).count_ones() % 2 == 0))
        .ok_or_else(|| {
            let span_dim = affine_span(m, seed).map(|f| f.dim()).unwrap_or(m);
            Error::SeedTooLarge { span_dim, target_dim: m - 1 }
        })?;
    let target = (functional & origin).count_ones() % 2;
    let mut inside = Vec::new();
    let mut outside = Vec::new();
    for p in 0..limit {
        if (functional & p).count_ones() % 2 == target {
            inside.push(p);
        } else {
            outside.push(p);
        }
    }
    Ok((
        Flat { m, dim: m - 1, points: inside },
        Flat { m, dim: m - 1, points: outside },
    ))
}

/// Lines of PG(m,2) as sorted triples {a, b, a^b} of nonzero vectors.
pub fn pg_lines(m: usize) -> Result<Vec<[u32; 3]>> {
    check_dims(m, 0)?;
    if m + 1 > 21 {
        return Err(Error::DimensionRange { m, min: 1, max: 20 });
    }
    let n = (1u32 << (m + 1)) - 1;
    let mut lines = Vec::new();
    for a in 1..=n {
        for b in a + 1..=n {
            let c = a ^ b;
            if b < c {
                lines.push([a, b, c]);
            }
        }
    }
    Ok(lines)
}
